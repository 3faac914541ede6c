#ifndef ROTSUM_CYCLES_HPP
#define ROTSUM_CYCLES_HPP

#include <utility>
#include <vector>

#include "rotsum/cf.hpp"

namespace rotsum {

// One cycle: the orbit segment of length q_{n+1} (start in Delta^(n)) or q_n
// (start in Delta^(n+1)), with its ordered distances to 0 (xs) and to 1 (ys).
struct CycleResult {
    int n = 0;
    BigRat start;
    BigInt q;
    std::vector<BigRat> xs, ys;
    double exact_mean = 0.0;     // S_q / q
    double truncated_mean = 0.0; // g^eps
    double eps = 0.0;
};

// Truncation depth k(eps) and the digit-window size K(eps): the smallest
// even K with 2^((K-2)/2) > k(eps).
std::uint64_t k_of_eps(double eps);
int K_of_eps(double eps);

// Scale-free inputs of the truncated cycle mean: the relative coordinate of
// the start point, the length ratio, the tower-area reciprocal, and a finite
// window of CF digits (a_hi .. a_lo, descending). g depends on nothing else.
struct GEpsInputs {
    char tag = 'l';    // 'l': start in Delta^(n); 's': start in Delta^(n+1)
    int n = 0;         // level label, used only to index the digit window
    BigRat x_rel;      // x/lambda^(n) for l; (1-x)/lambda^(n+1) for s
    BigRat lam_ratio;  // lambda^(n+1)/lambda^(n)
    BigRat inv_t;      // 1/(q_{n+1} lambda^(n)) for l; 1/(q_n lambda^(n+1)) for s
    std::vector<BigInt> digits; // a_{hi_index} .. a_{lo_index}
    int hi_index = 0;
    int lo_index = 0;
    double c = 1.0;
    double eps = 0.0;
};

// Sorted distances of the cycle through `start` to 0 and to 1.
std::pair<std::vector<BigRat>, std::vector<BigRat>>
cycle_points(const CFExpansion& cf, int n, const Rational01& start);

// Return time of the cycle through `start` (q_{n+1} or q_n by branch).
BigInt cycle_length(const CFExpansion& cf, int n, const Rational01& start);

// c * sum(1/x_i - 1/y_i) by direct orbit summation — the brute-force oracle.
double cycle_sum_exact(const CFExpansion& cf, int n, const Rational01& start, double c);

// Truncated cycle mean: |cycle_sum_exact/q - g_eps| <= eps.
double g_eps(const CFExpansion& cf, int n, const Rational01& start, double c, double eps);

// Captures the scale-free inputs; g_eps(cf,...) == g_eps_from_ratios(capture).
GEpsInputs g_eps_inputs(const CFExpansion& cf, int n, const Rational01& start,
                        double c, double eps);
double g_eps_from_ratios(const GEpsInputs& in);

// Convenience bundle for CLI / tests.
CycleResult make_cycle(const CFExpansion& cf, int n, const Rational01& start,
                       double c, double eps);

} // namespace rotsum

#endif
