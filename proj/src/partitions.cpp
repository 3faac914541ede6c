#include "rotsum/partitions.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "rotsum/detail/int128.hpp"

namespace rotsum {

using detail::u128;

namespace {

void require_level(const CFExpansion& cf, int n) {
    if (n < 0 || n % 2 != 0)
        throw std::invalid_argument("partition level must be even and >= 0");
    if (cf.q.size() <= static_cast<std::size_t>(n) + 1 ||
        cf.lambda.size() <= static_cast<std::size_t>(n) + 1)
        throw InsufficientDepth("expansion too shallow for level " + std::to_string(n));
    if (cf.lambda[static_cast<std::size_t>(n) + 1] == 0)
        throw InsufficientDepth("expansion terminates at level " + std::to_string(n + 1) +
                                "; partition degenerate");
}

std::mutex cache_mutex;
std::map<std::pair<std::string, int>, std::shared_ptr<const PartitionLevel>> cache;

} // namespace

std::shared_ptr<const PartitionLevel>
build_level(const CFExpansion& cf, int n, std::uint64_t cap) {
    require_level(cf, n);
    const auto key = std::make_pair(cf.alpha.str(), n);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }

    const BigInt& qn = cf.q[static_cast<std::size_t>(n)];
    const BigInt& qn1 = cf.q[static_cast<std::size_t>(n) + 1];
    const BigInt total = qn + qn1;
    if (total > BigInt(cap))
        throw LevelTooLarge("level " + std::to_string(n) + " has " + total.str() +
                            " intervals (cap " + std::to_string(cap) + ")");

    auto level = std::make_shared<PartitionLevel>();
    level->n = n;
    level->lambda_n = cf.lam(n);
    level->lambda_n1 = cf.lam(n + 1);
    level->q_n = qn;
    level->q_n1 = qn1;

    // Ascending successor walk over the endpoints {k alpha : k < q_n+q_{n+1}}:
    // from index k the next endpoint is k+q_n (gap lambda^(n)) while
    // k < q_{n+1}, else k-q_{n+1} (gap lambda^(n+1)).
    const std::uint64_t count = static_cast<std::uint64_t>(total);
    level->intervals.reserve(count);
    BigRat cur(0);
    BigInt k(0);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (k < qn1) {
            level->intervals.push_back({cur, 'l', k});
            cur += level->lambda_n;
            k += qn;
        } else {
            level->intervals.push_back({cur, 's', k - qn1});
            cur += level->lambda_n1;
            k -= qn1;
        }
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, _] = cache.emplace(key, std::move(level));
    return it->second;
}

CodingString coding_string(const PartitionLevel& level) {
    CodingString s;
    s.letters.reserve(level.intervals.size());
    for (const auto& iv : level.intervals)
        s.letters.push_back(iv.type);
    return s;
}

CodingString reflected_string(const PartitionLevel& level) {
    // Reflect each interval [a, a+len) to [1-a-len, 1-a) and sort by left
    // endpoint; types travel with their intervals.
    std::vector<std::pair<BigRat, char>> refl;
    refl.reserve(level.intervals.size());
    for (const auto& iv : level.intervals) {
        const BigRat len = iv.type == 'l' ? level.lambda_n : level.lambda_n1;
        refl.emplace_back(1 - iv.left - len, iv.type);
    }
    std::sort(refl.begin(), refl.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    CodingString s;
    s.letters.reserve(refl.size());
    for (const auto& [left, type] : refl)
        s.letters.push_back(type);
    return s;
}

MiddlePoints middle_points(const PartitionLevel& level) {
    MiddlePoints mp;
    const BigRat half_l = level.lambda_n / 2;
    const BigRat half_s = level.lambda_n1 / 2;
    for (const auto& iv : level.intervals) {
        if (iv.type == 'l')
            mp.z_l.push_back(iv.left + half_l);
        else
            mp.z_s.push_back(iv.left + half_s);
    }
    mp.zp_l.reserve(mp.z_l.size());
    for (auto it = mp.z_l.rbegin(); it != mp.z_l.rend(); ++it)
        mp.zp_l.push_back(1 - *it);
    mp.zp_s.reserve(mp.z_s.size());
    for (auto it = mp.z_s.rbegin(); it != mp.z_s.rend(); ++it)
        mp.zp_s.push_back(1 - *it);
    return mp;
}

SymmetryCheck almost_symmetry_check(const CFExpansion& cf, int n,
                                    std::uint64_t full_cap, std::uint64_t window) {
    require_level(cf, n);
    const BigInt& qnB = cf.q[static_cast<std::size_t>(n)];
    const BigInt& qn1B = cf.q[static_cast<std::size_t>(n) + 1];
    if (!detail::fits_u128(qnB + qn1B))
        throw LevelTooLarge("level too large for streaming index walk");
    const u128 qn = detail::to_u128(qnB);
    const u128 qn1 = detail::to_u128(qn1B);
    const u128 L = qn + qn1;

    SymmetryCheck res;
    res.length = detail::u128_to_double(L);

    // The reflection maps the i-th interval to the (L+1-i)-th position, so
    // the reflected string is the reverse of the coding string; the check
    // compares letters at mirror positions. Forward stream from position 1
    // (index 0) and backward stream from position L (index q_{n+1}).
    auto letter = [&](u128 k) { return k < qn1 ? 'l' : 's'; };
    auto succ = [&](u128 k) { return k < qn1 ? k + qn : k - qn1; };
    auto pred = [&](u128 k) { return k >= qn ? k - qn : k + qn1; };

    u128 kf = 0;       // position 1
    u128 kb = qn1;     // position L (= pred(0))
    res.ends_differ = letter(kf) == 'l' && letter(kb) == 's';

    u128 t_full = L >= 2 ? (L - 2) / 2 : 0;
    const bool full = L <= u128(full_cap);
    u128 t_max = full ? t_full : (u128(window) < t_full ? u128(window) : t_full);
    res.complete = t_max == t_full;

    bool ok = true;
    std::uint64_t checked = 0;
    for (u128 t = 1; t <= t_max; ++t) {
        kf = succ(kf); // position 1+t
        kb = pred(kb); // position L-t == L+1-(1+t)
        ++checked;
        if (letter(kf) != letter(kb)) {
            ok = false;
            break;
        }
    }
    res.interior_match = ok;
    res.positions_checked = checked;
    return res;
}

} // namespace rotsum
