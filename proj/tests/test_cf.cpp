#include "doctest.h"

#include "rotsum/cf.hpp"
#include "rotsum/errors.hpp"

using namespace rotsum;

TEST_CASE("expansion of 3/7") {
    CFExpansion cf = cf_expand(Rational01::parse("3/7"));
    REQUIRE(cf.depth() == 2);
    CHECK(cf.digits[0] == 2);
    CHECK(cf.digits[1] == 3);
    CHECK(cf.q[0] == 1);
    CHECK(cf.q[1] == 2);
    CHECK(cf.q[2] == 7);
    CHECK(cf.p[0] == 0);
    CHECK(cf.p[1] == 1);
    CHECK(cf.p[2] == 3);
    CHECK(cf.lambda[0] == BigRat(3, 7));
    CHECK(cf.lambda[1] == BigRat(1, 7));
    CHECK(cf.lambda[2] == 0);
    CHECK(cf.terminated);
}

TEST_CASE("Fibonacci ratio digits are all ones") {
    // F_20/F_21 = 6765/10946; the Euclidean tail turns the last two ones
    // into a single 2.
    CFExpansion cf = cf_expand(Rational01::parse("6765/10946"));
    REQUIRE(cf.depth() >= 2);
    for (std::size_t i = 0; i + 1 < cf.depth(); ++i)
        CHECK(cf.digits[i] == 1);
    CHECK(cf.digits.back() == 2);
    CHECK(cf.q.back() == 10946);
    CHECK(cf.terminated);
}

TEST_CASE("lambda conventions") {
    CFExpansion cf = cf_expand(Rational01::parse("3/7"));
    CHECK(cf.lam(-1) == 1);
    CHECK(cf.lam(0) == BigRat(3, 7));
    CHECK_THROWS_AS(cf.lam(5), InsufficientDepth);
    CHECK_THROWS_AS(cf.digit(3), InsufficientDepth);
}

TEST_CASE("renewal index on golden-type alpha") {
    // q: 1, 1, 2, 3, 5, 8, 13, ... so the first even level with q_n > 10
    // is n = 6 and with q_n > 1 is n = 2.
    BigInt a = 1, b = 1;
    for (int i = 2; i <= 61; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    CFExpansion cf = cf_expand(Rational01(a, b));
    CHECK(n_of(10, cf) == 6);
    CHECK(n_of(1, cf) == 2);

    CFExpansion small = cf_expand(Rational01::parse("3/7"));
    CHECK(n_of(1, small) == 2);
    CHECK_THROWS_AS(n_of(100, small), InsufficientDepth);
}

TEST_CASE("exact lattice identities on sampled alphas") {
    SampleRng rng(2024);
    for (int s = 0; s < 50; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        const int top = std::min<int>(static_cast<int>(cf.depth()) - 1, 40);
        for (int n = 0; n + 1 <= top; ++n) {
            const auto un = static_cast<std::size_t>(n);
            // area identity
            CHECK(BigRat(cf.q[un + 1]) * cf.lambda[un] +
                      BigRat(cf.q[un]) * cf.lambda[un + 1] ==
                  1);
            // tower-area bounds
            CHECK(BigRat(cf.q[un + 1]) * cf.lambda[un] >= BigRat(1, 2));
            CHECK(BigRat(cf.q[un + 1]) * cf.lambda[un] <= 1);
            CHECK(BigRat(cf.q[un]) * cf.lambda[un + 1] <= 1);
            // recurrences
            if (n + 2 <= static_cast<int>(cf.depth())) {
                CHECK(cf.lam(n - 1) == cf.digit(un + 1) * cf.lam(n) + cf.lam(n + 1));
                CHECK(cf.q[un + 1] == cf.digit(un + 1) * cf.q[un] +
                                          (un == 0 ? BigInt(0) : cf.q[un - 1]));
            }
            // doubling
            if (n + 2 < static_cast<int>(cf.q.size()))
                CHECK(cf.q[un + 2] >= 2 * cf.q[un]);
        }
    }
}

TEST_CASE("sampling is deterministic per (seed, stream, index)") {
    SampleRng a(7, 0, 11), b(7, 0, 11), c(7, 0, 12);
    Rational01 pa = sample_point(a);
    Rational01 pb = sample_point(b);
    Rational01 pc = sample_point(c);
    CHECK(pa == pb);
    CHECK_FALSE(pa == pc);
    CHECK((BigInt(1) << 128) % pa.denominator() == 0); // dyadic grid point
}
