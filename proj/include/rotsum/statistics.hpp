#ifndef ROTSUM_STATISTICS_HPP
#define ROTSUM_STATISTICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rotsum/cf.hpp"
#include "rotsum/sums.hpp"

namespace rotsum {

// Fixed-range histogram with explicit outlier buckets; bin counts plus
// below/above always sum to the sample count.
struct Histogram {
    double lo = -50.0, hi = 50.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t below = 0, above = 0;
};

Histogram make_histogram(const std::vector<double>& values, double lo = -50.0,
                         double hi = 50.0, unsigned bins = 200);
Histogram merge_histograms(const Histogram& a, const Histogram& b);

struct DistMeta {
    std::uint64_t N = 0;
    double c = 1.0;
    unsigned grid_depth = kGridDepth;
    std::uint64_t rejected = 0;
    std::string mode;
};

// Empirical law of a sampled statistic. Full samples are kept (KS distances
// and quantiles come from the exact empirical CDF, not from bins).
struct EmpiricalDistribution {
    enum class Kind { scalar, complex_plane };
    Kind kind = Kind::scalar;
    std::uint64_t samples = 0;
    std::vector<double> values;    // scalar values, or real parts
    std::vector<double> values_im; // imaginary parts (complex kind only)
    Histogram bins;
    std::vector<std::pair<double, double>> quantiles; // (p, value), p = 1%..99%
    std::uint64_t seed = 0;
    DistMeta meta;
};

EmpiricalDistribution make_distribution(EmpiricalDistribution::Kind kind,
                                        std::vector<double> values,
                                        std::vector<double> values_im,
                                        std::uint64_t seed, DistMeta meta,
                                        unsigned bins = 200);

enum class SnnMode { f1, complex_average };

// Law of X_N = S_N/N (mode f1) or of the complex trigonometric average over
// fresh uniform dyadic (alpha, x). Deterministic per seed; independent of
// jobs (contiguous index shards, merged in index order).
EmpiricalDistribution empirical_snn(std::uint64_t N, std::uint64_t samples,
                                    std::uint64_t seed, const FunctionConfig& config,
                                    SnnMode mode, unsigned jobs = 1);

// Kolmogorov-Smirnov distance. Scalar: sup-ECDF distance. Complex: max of
// the two marginal distances and a 20x20 fixed-grid cell-frequency sup.
double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2);

// Sup distance of the ECDF of `values` to the uniform CDF on [0,1).
double ks_vs_uniform(std::vector<double> values);

struct RenewalStats {
    std::uint64_t N = 0, samples = 0, seed = 0, rejected = 0;
    int M = 0;
    EmpiricalDistribution ratio_hist; // q_{n(N)}/N
    // Joint frequencies of (a_{n(N)-M}, ..., a_{n(N)+M}); values capped at
    // the ">= 20" bucket (stored as 20), out-of-range indices stored as 0.
    std::map<std::vector<int>, std::uint64_t> entry_freqs;
    EmpiricalDistribution q_ratio;    // q_n/q_{n+1}
    EmpiricalDistribution lam_ratio;  // lambda^(n+1)/lambda^(n)
    EmpiricalDistribution inv_area_s; // 1/(q_n lambda^(n+1))
    EmpiricalDistribution inv_area_l; // 1/(q_{n+1} lambda^(n))
};

inline constexpr int kEntryCap = 20;

RenewalStats renewal_stats(std::uint64_t N, std::uint64_t samples, int M,
                           std::uint64_t seed, unsigned jobs = 1);

// Fraction of sampled alpha with some digit a_{n(N)-k} > C (k+1)^2 for
// 0 <= k < n(N). Nonincreasing in C.
double power_bound_rate(std::uint64_t N, std::uint64_t samples, double C,
                        std::uint64_t seed, unsigned jobs = 1);

} // namespace rotsum

#endif
