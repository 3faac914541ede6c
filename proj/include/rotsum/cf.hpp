#ifndef ROTSUM_CF_HPP
#define ROTSUM_CF_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "rotsum/errors.hpp"
#include "rotsum/rational.hpp"

namespace rotsum {

// Depth of the dyadic sampling grid: sampled points are A / 2^128.
inline constexpr unsigned kGridDepth = 128;

// Continued fraction expansion of a rational alpha in (0,1), with convergents
// p_n/q_n and the fundamental lengths lambda^(n) = |q_n alpha - p_n|.
//
// Index conventions: q_0 = 1, q_1 = a_1, p_0 = 0, p_1 = 1, and
// lambda^(0) = {alpha}. digits[i] is a_{i+1}; q[i], p[i], lambda[i] carry
// index i. For a rational alpha the expansion terminates at some L with
// lambda^(L) = 0 unless truncated earlier by max_terms.
struct CFExpansion {
    Rational01 alpha;
    std::vector<BigInt> digits; // a_1 .. a_L
    std::vector<BigInt> p;      // p_0 .. p_L
    std::vector<BigInt> q;      // q_0 .. q_L
    std::vector<BigRat> lambda; // lambda^(0) .. lambda^(L)
    bool terminated = false;    // true if lambda^(L) == 0 (full expansion)

    std::size_t depth() const { return digits.size(); }

    // lambda^(n) for n >= -1, with lambda^(-1) = 1 by convention.
    BigRat lam(long n) const {
        if (n < -1 || n + 1 > static_cast<long>(lambda.size()))
            throw InsufficientDepth("lambda^(" + std::to_string(n) + ") not available");
        return n == -1 ? BigRat(1) : lambda[static_cast<std::size_t>(n)];
    }

    // a_i with the paper's 1-based indexing.
    const BigInt& digit(std::size_t i) const {
        if (i < 1 || i > digits.size())
            throw InsufficientDepth("digit a_" + std::to_string(i) + " not available");
        return digits[i - 1];
    }
};

// Exact CF expansion of alpha via the Euclidean algorithm, truncated at
// max_terms digits or at termination.
CFExpansion cf_expand(const Rational01& alpha, unsigned max_terms = 200);

// The renewal index n(N, alpha) = min { n even : q_n > N }.
// Throws InsufficientDepth if the (possibly terminating) expansion has no
// such level.
int n_of(std::uint64_t N, const CFExpansion& cf);

// Deterministic sampling state for Monte Carlo drivers. Each sample index
// gets its own engine so parallel sharding cannot change the stream.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : eng_(seed) {}
    SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        std::seed_seq seq{seed, stream, index};
        eng_.seed(seq);
    }
    std::uint64_t next() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// Uniform dyadic point A / 2^128 with A in {1, ..., 2^128 - 1}.
Rational01 sample_point(SampleRng& rng);

} // namespace rotsum

#endif
