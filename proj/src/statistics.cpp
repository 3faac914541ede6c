#include "rotsum/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rotsum/errors.hpp"
#include "rotsum/sums.hpp"

namespace rotsum {

namespace {

// Stream tags keep the per-index engines of different drivers disjoint.
constexpr std::uint64_t kStreamSnn = 0;
constexpr std::uint64_t kStreamRenewal = 1;
constexpr std::uint64_t kStreamPower = 2;

constexpr int kRetryLimit = 64;

std::vector<std::pair<double, double>> percent_quantiles(std::vector<double> v) {
    std::vector<std::pair<double, double>> out;
    if (v.empty())
        return out;
    std::sort(v.begin(), v.end());
    for (int p = 1; p <= 99; ++p) {
        const double pos = p / 100.0 * (static_cast<double>(v.size()) - 1.0);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        const double val = i + 1 < v.size() ? v[i] * (1.0 - frac) + v[i + 1] * frac : v[i];
        out.emplace_back(p / 100.0, val);
    }
    return out;
}

// Runs fn(i) over i in [0, total) on `jobs` contiguous shards. Each fn(i)
// writes only slot i of preallocated output, so the result is independent
// of the shard count.
template <typename Fn>
void parallel_indices(std::uint64_t total, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || total < 2) {
        for (std::uint64_t i = 0; i < total; ++i)
            fn(i);
        return;
    }
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(total));
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        const std::uint64_t lo = t * chunk;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, total);
        if (lo >= hi)
            break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::uint64_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& th : threads)
        th.join();
}

} // namespace

Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         unsigned bins) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lo) {
            ++h.below;
        } else if (v >= hi) {
            ++h.above;
        } else {
            auto idx = static_cast<std::size_t>((v - lo) / width);
            if (idx >= bins)
                idx = bins - 1;
            ++h.counts[idx];
        }
    }
    return h;
}

Histogram merge_histograms(const Histogram& a, const Histogram& b) {
    if (a.lo != b.lo || a.hi != b.hi || a.counts.size() != b.counts.size())
        throw KindMismatch("histogram specs differ");
    Histogram out = a;
    out.below += b.below;
    out.above += b.above;
    for (std::size_t i = 0; i < out.counts.size(); ++i)
        out.counts[i] += b.counts[i];
    return out;
}

EmpiricalDistribution make_distribution(EmpiricalDistribution::Kind kind,
                                        std::vector<double> values,
                                        std::vector<double> values_im,
                                        std::uint64_t seed, DistMeta meta,
                                        unsigned bins) {
    EmpiricalDistribution d;
    d.kind = kind;
    d.samples = values.size();
    d.bins = make_histogram(values, -50.0, 50.0, bins);
    d.quantiles = percent_quantiles(values);
    d.values = std::move(values);
    d.values_im = std::move(values_im);
    d.seed = seed;
    d.meta = std::move(meta);
    return d;
}

EmpiricalDistribution empirical_snn(std::uint64_t N, std::uint64_t samples,
                                    std::uint64_t seed, const FunctionConfig& config,
                                    SnnMode mode, unsigned jobs) {
    std::vector<double> re(samples), im;
    const bool complex_mode = mode == SnnMode::complex_average;
    if (complex_mode)
        im.resize(samples);
    std::vector<std::uint8_t> rejects(samples, 0);

    parallel_indices(samples, jobs, [&](std::uint64_t i) {
        SampleRng rng(seed, kStreamSnn, i);
        for (int attempt = 0; attempt < kRetryLimit; ++attempt) {
            try {
                Rational01 alpha = sample_point(rng);
                Rational01 x = sample_point(rng);
                // Only alpha itself is consumed by the direct evaluators.
                CFExpansion cf = cf_expand(alpha, 1);
                if (complex_mode) {
                    auto z = trig_average(cf, x, N);
                    re[i] = z.real();
                    im[i] = z.imag();
                } else {
                    re[i] = birkhoff_direct(cf, x, N, config) / static_cast<double>(N);
                }
                return;
            } catch (const SingularHit&) {
                ++rejects[i];
            } catch (const InsufficientDepth&) {
                ++rejects[i];
            }
        }
        throw std::runtime_error("sample retry limit exceeded");
    });

    DistMeta meta;
    meta.N = N;
    meta.c = config.c;
    meta.mode = complex_mode ? "complex" : "f1";
    for (auto r : rejects)
        meta.rejected += r;
    return make_distribution(complex_mode ? EmpiricalDistribution::Kind::complex_plane
                                          : EmpiricalDistribution::Kind::scalar,
                             std::move(re), std::move(im), seed, std::move(meta));
}

namespace {

double scalar_ks(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v)
            ++i;
        while (j < sb.size() && sb[j] <= v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Sup over a fixed 20x20 grid on [-50,50]^2 of the cell-frequency gap;
// points outside are clamped to edge cells.
double grid_ks(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
    constexpr int G = 20;
    auto cells = [&](const EmpiricalDistribution& d) {
        std::vector<double> c(G * G, 0.0);
        const double w = 100.0 / G;
        for (std::size_t k = 0; k < d.values.size(); ++k) {
            int ix = static_cast<int>((d.values[k] + 50.0) / w);
            int iy = static_cast<int>((d.values_im[k] + 50.0) / w);
            ix = std::clamp(ix, 0, G - 1);
            iy = std::clamp(iy, 0, G - 1);
            c[static_cast<std::size_t>(iy) * G + static_cast<std::size_t>(ix)] +=
                1.0 / static_cast<double>(d.values.size());
        }
        return c;
    };
    const auto c1 = cells(d1), c2 = cells(d2);
    double d = 0.0;
    for (std::size_t k = 0; k < c1.size(); ++k)
        d = std::max(d, std::abs(c1[k] - c2[k]));
    return d;
}

} // namespace

double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
    if (d1.kind != d2.kind)
        throw KindMismatch("distribution kinds differ");
    if (d1.values.empty() || d2.values.empty())
        throw std::invalid_argument("empty distribution");
    if (d1.kind == EmpiricalDistribution::Kind::scalar)
        return scalar_ks(d1.values, d2.values);
    double d = std::max(scalar_ks(d1.values, d2.values),
                        scalar_ks(d1.values_im, d2.values_im));
    return std::max(d, grid_ks(d1, d2));
}

double ks_vs_uniform(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::clamp(values[i], 0.0, 1.0);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - v));
        d = std::max(d, std::abs(static_cast<double>(i) / n - v));
    }
    return d;
}

RenewalStats renewal_stats(std::uint64_t N, std::uint64_t samples, int M,
                           std::uint64_t seed, unsigned jobs) {
    if (M < 0 || M > 8)
        throw std::invalid_argument("M must be in [0, 8]");
    struct Row {
        double ratio, q_ratio, lam_ratio, inv_s, inv_l;
        std::vector<int> entries;
        std::uint8_t rejected;
    };
    std::vector<Row> rows(samples);

    parallel_indices(samples, jobs, [&](std::uint64_t i) {
        SampleRng rng(seed, kStreamRenewal, i);
        for (int attempt = 0; attempt < kRetryLimit; ++attempt) {
            try {
                Rational01 alpha = sample_point(rng);
                CFExpansion cf = cf_expand(alpha);
                const int n = n_of(N, cf);
                Row& r = rows[i];
                const auto un = static_cast<std::size_t>(n);
                r.ratio = rat_to_double(BigRat(cf.q[un], BigInt(N)));
                r.q_ratio = rat_to_double(BigRat(cf.q[un], cf.q[un + 1]));
                r.lam_ratio = rat_to_double(cf.lam(n + 1) / cf.lam(n));
                r.inv_s = rat_to_double(1 / (BigRat(cf.q[un]) * cf.lam(n + 1)));
                r.inv_l = rat_to_double(1 / (BigRat(cf.q[un + 1]) * cf.lam(n)));
                r.entries.reserve(2 * static_cast<std::size_t>(M) + 1);
                for (int k = -M; k <= M; ++k) {
                    const int idx = n + k;
                    if (idx < 1 || idx > static_cast<int>(cf.depth())) {
                        r.entries.push_back(0);
                    } else {
                        const BigInt& a = cf.digit(static_cast<std::size_t>(idx));
                        r.entries.push_back(a >= kEntryCap ? kEntryCap
                                                           : static_cast<int>(a));
                    }
                }
                return;
            } catch (const InsufficientDepth&) {
                ++rows[i].rejected;
            }
        }
        throw std::runtime_error("sample retry limit exceeded");
    });

    RenewalStats out;
    out.N = N;
    out.samples = samples;
    out.seed = seed;
    out.M = M;
    std::vector<double> ratio(samples), qr(samples), lr(samples), is(samples), il(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Row& r = rows[i];
        ratio[i] = r.ratio;
        qr[i] = r.q_ratio;
        lr[i] = r.lam_ratio;
        is[i] = r.inv_s;
        il[i] = r.inv_l;
        ++out.entry_freqs[r.entries];
        out.rejected += r.rejected;
    }
    DistMeta meta;
    meta.N = N;
    meta.rejected = out.rejected;
    using K = EmpiricalDistribution::Kind;
    meta.mode = "renewal_ratio";
    out.ratio_hist = make_distribution(K::scalar, std::move(ratio), {}, seed, meta);
    meta.mode = "q_ratio";
    out.q_ratio = make_distribution(K::scalar, std::move(qr), {}, seed, meta);
    meta.mode = "lam_ratio";
    out.lam_ratio = make_distribution(K::scalar, std::move(lr), {}, seed, meta);
    meta.mode = "inv_area_s";
    out.inv_area_s = make_distribution(K::scalar, std::move(is), {}, seed, meta);
    meta.mode = "inv_area_l";
    out.inv_area_l = make_distribution(K::scalar, std::move(il), {}, seed, meta);
    return out;
}

double power_bound_rate(std::uint64_t N, std::uint64_t samples, double C,
                        std::uint64_t seed, unsigned jobs) {
    if (!(C > 0))
        throw std::invalid_argument("C must be positive");
    std::vector<std::uint8_t> violated(samples, 0);
    parallel_indices(samples, jobs, [&](std::uint64_t i) {
        SampleRng rng(seed, kStreamPower, i);
        for (int attempt = 0; attempt < kRetryLimit; ++attempt) {
            try {
                Rational01 alpha = sample_point(rng);
                CFExpansion cf = cf_expand(alpha);
                const int n = n_of(N, cf);
                for (int k = 0; k < n; ++k) {
                    const double kk = static_cast<double>(k) + 1.0;
                    const double a = static_cast<double>(cf.digit(static_cast<std::size_t>(n - k)));
                    if (a > C * kk * kk) {
                        violated[i] = 1;
                        break;
                    }
                }
                return;
            } catch (const InsufficientDepth&) {
            }
        }
        throw std::runtime_error("sample retry limit exceeded");
    });
    std::uint64_t bad = 0;
    for (auto v : violated)
        bad += v;
    return static_cast<double>(bad) / static_cast<double>(samples);
}

} // namespace rotsum
