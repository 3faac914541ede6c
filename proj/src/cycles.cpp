#include "rotsum/cycles.hpp"

#include <algorithm>
#include <cmath>

#include "rotsum/detail/int128.hpp"
#include "rotsum/detail/kahan.hpp"

namespace rotsum {

using detail::u128;

namespace {

enum class Branch { L, S };

void require_depth(const CFExpansion& cf, int n) {
    if (n < 0 || n % 2 != 0)
        throw std::invalid_argument("cycle level must be even and >= 0");
    if (cf.lambda.size() <= static_cast<std::size_t>(n) + 1 ||
        cf.q.size() <= static_cast<std::size_t>(n) + 1)
        throw InsufficientDepth("expansion too shallow for level " + std::to_string(n));
}

Branch classify(const CFExpansion& cf, int n, const BigRat& x) {
    const BigRat& ln = cf.lambda[static_cast<std::size_t>(n)];
    const BigRat& ln1 = cf.lambda[static_cast<std::size_t>(n) + 1];
    if (x >= 0 && x < ln)
        return Branch::L;
    if (x >= 1 - ln1 && x < 1)
        return Branch::S;
    throw PointOutsideDomain("start point not in Delta(" + std::to_string(n) + ")");
}

// Scales a rational with power-of-two denominator <= 2^128 onto the 2^128
// grid; returns false if not representable.
bool dyadic128(const BigRat& v, u128& out) {
    BigInt den = boost::multiprecision::denominator(v);
    if (den <= 0 || (den & (den - 1)) != 0)
        return false;
    unsigned bit = static_cast<unsigned>(boost::multiprecision::msb(den));
    if (bit > 128)
        return false;
    BigInt num = boost::multiprecision::numerator(v) << (128 - bit);
    if (!detail::fits_u128(num))
        return false;
    out = detail::to_u128(num);
    return true;
}

} // namespace

std::uint64_t k_of_eps(double eps) {
    if (!(eps > 0))
        throw std::invalid_argument("eps must be positive");
    return static_cast<std::uint64_t>(std::ceil(56.0 / eps));
}

int K_of_eps(double eps) {
    const std::uint64_t k = k_of_eps(eps);
    int K = 4;
    while (std::pow(2.0, (K - 2) / 2.0) <= static_cast<double>(k))
        K += 2;
    return K;
}

BigInt cycle_length(const CFExpansion& cf, int n, const Rational01& start) {
    require_depth(cf, n);
    return classify(cf, n, start.value()) == Branch::L
               ? cf.q[static_cast<std::size_t>(n) + 1]
               : cf.q[static_cast<std::size_t>(n)];
}

std::pair<std::vector<BigRat>, std::vector<BigRat>>
cycle_points(const CFExpansion& cf, int n, const Rational01& start) {
    require_depth(cf, n);
    const BigRat x = start.value();
    const Branch br = classify(cf, n, x);
    const BigRat ln = cf.lam(n), ln1 = cf.lam(n + 1);
    std::vector<BigRat> xs, ys;

    if (br == Branch::L) {
        // One orbit point per floor of Z_l; sorted values follow the
        // three-gap successor walk of {j alpha : j < q_{n+1}} with gaps
        // lambda^(n) and lambda^(n)+lambda^(n+1). x itself is the minimum.
        const BigInt qn = cf.q[static_cast<std::size_t>(n)];
        const BigInt qn1 = cf.q[static_cast<std::size_t>(n) + 1];
        const std::uint64_t q = static_cast<std::uint64_t>(qn1);
        xs.reserve(q);
        BigRat cur = x;
        BigInt j = 0;
        for (std::uint64_t i = 0; i < q; ++i) {
            xs.push_back(cur);
            if (j + qn < qn1) {
                cur += ln;
                j += qn;
            } else {
                cur += ln + ln1;
                j += qn - qn1;
            }
        }
    } else {
        // One orbit point per floor of Z_s; x is the maximum. Descend with
        // the gaps lambda^(n-1) and lambda^(n-1)+lambda^(n) of
        // {j alpha : j < q_n}.
        const BigRat lnm1 = cf.lam(n - 1);
        const BigInt qn = cf.q[static_cast<std::size_t>(n)];
        const BigInt qm1 = n >= 1 ? cf.q[static_cast<std::size_t>(n) - 1] : BigInt(0);
        const std::uint64_t q = static_cast<std::uint64_t>(qn);
        std::vector<BigRat> desc;
        desc.reserve(q);
        BigRat cur = x;
        BigInt j = 0;
        for (std::uint64_t i = 0; i < q; ++i) {
            desc.push_back(cur);
            if (j + qm1 < qn) {
                cur -= lnm1;
                j += qm1;
            } else {
                cur -= lnm1 + ln;
                j += qm1 - qn;
            }
        }
        xs.assign(desc.rbegin(), desc.rend());
    }
    ys.reserve(xs.size());
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        ys.push_back(1 - *it);
    return {std::move(xs), std::move(ys)};
}

double cycle_sum_exact(const CFExpansion& cf, int n, const Rational01& start, double c) {
    require_depth(cf, n);
    const BigInt q = cycle_length(cf, n, start);
    const std::uint64_t steps = static_cast<std::uint64_t>(q);
    detail::Kahan acc;

    u128 anum, xnum;
    if (dyadic128(cf.alpha.value(), anum) && dyadic128(start.value(), xnum)) {
        const double scale = std::ldexp(1.0, -128);
        u128 cur = xnum;
        for (std::uint64_t i = 0; i < steps; ++i) {
            if (cur == 0)
                throw SingularHit("orbit hit 0 exactly");
            const double v = detail::u128_to_double(cur) * scale;
            acc.add(1.0 / v - 1.0 / (1.0 - v));
            cur += anum; // mod 2^128 by wraparound
        }
        return c * acc.value();
    }

    BigRat cur = start.value();
    const BigRat alpha = cf.alpha.value();
    for (std::uint64_t i = 0; i < steps; ++i) {
        if (cur == 0)
            throw SingularHit("orbit hit 0 exactly");
        const double v = rat_to_double(cur);
        acc.add(1.0 / v - 1.0 / (1.0 - v));
        cur += alpha;
        if (cur >= 1)
            cur -= 1;
    }
    return c * acc.value();
}

GEpsInputs g_eps_inputs(const CFExpansion& cf, int n, const Rational01& start,
                        double c, double eps) {
    require_depth(cf, n);
    const BigRat x = start.value();
    const Branch br = classify(cf, n, x);
    const BigRat ln = cf.lam(n), ln1 = cf.lam(n + 1);
    const int K = K_of_eps(eps);

    GEpsInputs in;
    in.n = n;
    in.c = c;
    in.eps = eps;
    in.lam_ratio = ln1 / ln;
    in.lo_index = std::max(1, n - K);
    in.hi_index = std::min<int>(static_cast<int>(cf.depth()), n + 2);
    for (int i = in.hi_index; i >= in.lo_index; --i)
        in.digits.push_back(cf.digit(static_cast<std::size_t>(i)));

    if (br == Branch::L) {
        in.tag = 'l';
        in.x_rel = x / ln;
        in.inv_t = 1 / (BigRat(cf.q[static_cast<std::size_t>(n) + 1]) * ln);
    } else {
        in.tag = 's';
        in.x_rel = (1 - x) / ln1;
        in.inv_t = 1 / (BigRat(cf.q[static_cast<std::size_t>(n)]) * ln1);
    }
    return in;
}

double g_eps_from_ratios(const GEpsInputs& in) {
    const std::uint64_t k = k_of_eps(in.eps);
    const bool is_l = in.tag == 'l';

    auto digit = [&](int i) -> const BigInt& {
        return in.digits[static_cast<std::size_t>(in.hi_index - i)];
    };

    // Continuant of [a_hi', ..., a_lo] as P/Q, hi' = n+1 (l branch, rho =
    // q_n/q_{n+1}) or n (s branch, rho = q_{n-1}/q_n). When the window
    // reaches a_1 this is the exact q-ratio; otherwise Q > 2^((K-2)/2) > k
    // and only the first k successor decisions are consumed, which the deep
    // window pins down.
    const int hi_needed = is_l ? in.n + 1 : in.n;
    BigInt P = 0, Q = 1;
    if (hi_needed >= in.lo_index) {
        BigInt tn = digit(in.lo_index), td = 1;
        for (int i = in.lo_index + 1; i <= hi_needed; ++i) {
            BigInt nn = digit(i) * tn + td; // tail = a_i + 1/tail
            td = tn;
            tn = nn;
        }
        P = td;
        Q = tn;
    }
    const bool window_exact = in.lo_index == 1 || hi_needed < in.lo_index;
    const bool full = window_exact && Q <= BigInt(k + 1);
    if (!window_exact && Q <= BigInt(k + 1))
        throw std::logic_error("digit window too short for requested eps");
    const std::uint64_t qq = full ? static_cast<std::uint64_t>(Q) : 0;

    detail::Kahan acc;
    const double inv_t = rat_to_double(in.inv_t);

    if (is_l) {
        // x-distances ascend from x_0 = x_rel with gaps 1 or 1+lam_ratio
        // (units of lambda^(n)); y_i = x_{i+1} + lam_ratio - 2 x_0 for
        // i <= q-2, and y_{q-1} = (1 - x_0 lambda^(n))/lambda^(n).
        const std::uint64_t kx = full ? qq - 1 : k;
        const std::uint64_t ky = full ? qq - 1 : k - 1;
        const BigRat yshift = in.lam_ratio - 2 * in.x_rel;
        BigRat xcur = in.x_rel;
        BigInt j = 0;
        const std::uint64_t imax = std::max(kx, ky);
        for (std::uint64_t i = 0; i <= imax; ++i) {
            if (i <= kx)
                acc.add(inv_t / rat_to_double(xcur));
            BigRat xnext;
            bool have_next = false;
            if (!full || i + 1 < qq) {
                if (j + P < Q) {
                    xnext = xcur + 1;
                    j += P;
                } else {
                    xnext = xcur + 1 + in.lam_ratio;
                    j += P - Q;
                }
                have_next = true;
            }
            if (i <= ky) {
                const BigRat y = (full && i + 1 == qq)
                                     ? BigRat(Q) * in.inv_t - in.x_rel
                                     : xnext + yshift;
                acc.add(-inv_t / rat_to_double(y));
            }
            if (have_next)
                xcur = xnext;
        }
    } else {
        // y-distances ascend from y_0 = (1-x)/lambda^(n+1) with gaps
        // lambda^(n-1)/lambda^(n+1) or that plus 1/lam_ratio; Eq-(10) shift
        // gives x_i = y_{i+1} - 2 y_0 + 1/lam_ratio for i <= q-2, and
        // x_{q-1} = (1 - y_0 lambda^(n+1))/lambda^(n+1).
        const std::uint64_t ky = full ? qq - 1 : k;
        const std::uint64_t kx = full ? qq - 1 : k - 1;
        const BigRat inv_r = 1 / in.lam_ratio; // lambda^(n)/lambda^(n+1)
        const BigRat gap_small = BigRat(digit(in.n + 1)) * inv_r + 1;
        const BigRat gap_big = gap_small + inv_r;
        const BigRat xshift = inv_r - 2 * in.x_rel;
        BigRat ycur = in.x_rel;
        BigInt j = 0;
        const std::uint64_t imax = std::max(kx, ky);
        for (std::uint64_t i = 0; i <= imax; ++i) {
            if (i <= ky)
                acc.add(-inv_t / rat_to_double(ycur));
            BigRat ynext;
            bool have_next = false;
            if (!full || i + 1 < qq) {
                if (j + P < Q) {
                    ynext = ycur + gap_small;
                    j += P;
                } else {
                    ynext = ycur + gap_big;
                    j += P - Q;
                }
                have_next = true;
            }
            if (i <= kx) {
                const BigRat xv = (full && i + 1 == qq)
                                      ? BigRat(Q) * in.inv_t - in.x_rel
                                      : ynext + xshift;
                acc.add(inv_t / rat_to_double(xv));
            }
            if (have_next)
                ycur = ynext;
        }
    }
    return in.c * acc.value();
}

double g_eps(const CFExpansion& cf, int n, const Rational01& start, double c, double eps) {
    return g_eps_from_ratios(g_eps_inputs(cf, n, start, c, eps));
}

CycleResult make_cycle(const CFExpansion& cf, int n, const Rational01& start,
                       double c, double eps) {
    CycleResult res;
    res.n = n;
    res.start = start.value();
    res.q = cycle_length(cf, n, start);
    auto [xs, ys] = cycle_points(cf, n, start);
    res.xs = std::move(xs);
    res.ys = std::move(ys);
    res.exact_mean = cycle_sum_exact(cf, n, start, c) / static_cast<double>(res.q);
    res.eps = eps;
    res.truncated_mean = g_eps(cf, n, start, c, eps);
    return res;
}

} // namespace rotsum
