#include "rotsum/cf.hpp"

namespace rotsum {

CFExpansion cf_expand(const Rational01& alpha, unsigned max_terms) {
    // Integer Euclid on the lambda numerators: with alpha = A/D,
    // Lambda_{-1} = D, Lambda_0 = A, a_{k+1} = floor(Lambda_{k-1}/Lambda_k),
    // Lambda_{k+1} = Lambda_{k-1} - a_{k+1} Lambda_k, lambda^(k) = Lambda_k/D.
    CFExpansion cf{alpha, {}, {}, {}, {}, false};
    const BigInt D = alpha.denominator();
    BigInt lam_prev = D;              // Lambda_{-1}
    BigInt lam_cur = alpha.numerator(); // Lambda_0

    cf.p = {0};
    cf.q = {1};
    cf.lambda = {BigRat(lam_cur, D)};

    while (cf.digits.size() < max_terms) {
        if (lam_cur == 0) {
            cf.terminated = true;
            break;
        }
        BigInt a = lam_prev / lam_cur;
        BigInt lam_next = lam_prev - a * lam_cur;
        cf.digits.push_back(a);
        const std::size_t k = cf.digits.size(); // just appended a_k
        if (k == 1) {
            cf.p.push_back(1);
            cf.q.push_back(a);
        } else {
            cf.p.push_back(a * cf.p[k - 1] + cf.p[k - 2]);
            cf.q.push_back(a * cf.q[k - 1] + cf.q[k - 2]);
        }
        cf.lambda.push_back(BigRat(lam_next, D));
        lam_prev = lam_cur;
        lam_cur = lam_next;
    }
    if (lam_cur == 0)
        cf.terminated = true;
    return cf;
}

int n_of(std::uint64_t N, const CFExpansion& cf) {
    const BigInt bigN = N;
    for (std::size_t n = 0; n < cf.q.size(); n += 2)
        if (cf.q[n] > bigN)
            return static_cast<int>(n);
    throw InsufficientDepth("no even level with q_n > " + std::to_string(N) +
                            (cf.terminated ? " (expansion terminates)"
                                           : " (expansion truncated; raise max_terms)"));
}

Rational01 sample_point(SampleRng& rng) {
    for (;;) {
        BigInt a = rng.next();
        a <<= 64;
        a |= BigInt(rng.next());
        if (a != 0) {
            BigInt den = BigInt(1) << kGridDepth;
            return Rational01(a, den);
        }
    }
}

} // namespace rotsum
