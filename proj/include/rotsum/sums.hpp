#ifndef ROTSUM_SUMS_HPP
#define ROTSUM_SUMS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "rotsum/cf.hpp"

namespace rotsum {

// f(x) = c/x - c/(1-x) + smooth_part(x). The smooth part must be C^1 on
// [0,1]; c = 0 switches the singular part off (smooth-only sums).
struct FunctionConfig {
    double c = 1.0;
    std::function<double(double)> smooth_part; // optional f2
};

// c/x - c/(1-x) on an exact rational argument.
double f1_eval(const Rational01& x, double c);

// S_N = sum_{n=0}^{N-1} f(R^n x): the naive O(N) oracle, exact orbit points,
// compensated accumulation.
double birkhoff_direct(const CFExpansion& cf, const Rational01& x,
                       std::uint64_t N, const FunctionConfig& config);

// (1/N) sum_{n=0}^{N-1} 1/(1 - e^{2 pi i (x + n alpha)}), cross-checked
// against the half-plus-cotangent reduction; asserts agreement to 1e-6.
std::complex<double> trig_average(const CFExpansion& cf, const Rational01& x,
                                  std::uint64_t N);

// Raw partial sums hit Theta(k) spikes whenever k passes a denominator q_m
// (single terms of size ~ q_m/pi), so boundedness only holds for the
// normalized sums |S_k|/k; both maxima are reported.
struct CosecantSegment {
    std::uint64_t k_lo = 0, k_hi = 0; // inclusive range of k
    double max_abs = 0.0;
    std::uint64_t argmax = 0;
    double max_norm = 0.0; // max of |S_k|/k
    std::uint64_t argmax_norm = 0;
};

struct CosecantReport {
    std::uint64_t N = 0;
    double max_abs = 0.0;
    std::uint64_t argmax = 0;
    double max_norm = 0.0;
    std::uint64_t argmax_norm = 0;
    double final_sum = 0.0;
    std::vector<CosecantSegment> segments;
};

// Running maxima of |sum_{n=1}^{k} 1/sin(n pi alpha)| for k <= N, with
// per-segment maxima at the given breakpoints (segment i covers
// [prev_break, break_i], first segment starts at k=1).
CosecantReport cosecant_partial_sums(const CFExpansion& cf, std::uint64_t N,
                                     const std::vector<std::uint64_t>& breakpoints = {});

} // namespace rotsum

#endif
