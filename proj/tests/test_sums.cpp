#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "rotsum/detail/kahan.hpp"
#include "rotsum/errors.hpp"
#include "rotsum/sums.hpp"

using namespace rotsum;

TEST_CASE("f1 point values") {
    CHECK(f1_eval(Rational01::parse("1/4"), 1.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(f1_eval(Rational01::parse("1/2"), 3.5) == 0.0);
    CHECK(f1_eval(Rational01::parse("3/4"), 1.0) == doctest::Approx(-8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("f1 reflection antisymmetry on dyadic points") {
    for (int k = 1; k < 1024; k += 37) {
        Rational01 x(BigInt(k), BigInt(1024));
        Rational01 xr(BigInt(1024 - k), BigInt(1024));
        CHECK(f1_eval(xr, 2.5) == -f1_eval(x, 2.5));
    }
}

TEST_CASE("single-term sums") {
    CFExpansion cf = cf_expand(Rational01::parse("2/7"));
    Rational01 x = Rational01::parse("1/4");
    CHECK(birkhoff_direct(cf, x, 1, FunctionConfig{1.0, nullptr}) ==
          f1_eval(x, 1.0));
    auto z = trig_average(cf, x, 1);
    CHECK(z.real() == 0.5);
    CHECK(z.imag() == doctest::Approx(0.5).epsilon(1e-12));
    auto z2 = trig_average(cf, Rational01::parse("1/2"), 1);
    CHECK(z2.real() == 0.5);
    CHECK(std::abs(z2.imag()) <= 1e-15);
}

TEST_CASE("smooth part averages out") {
    SampleRng rng(101);
    Rational01 alpha = sample_point(rng);
    Rational01 x = sample_point(rng);
    CFExpansion cf = cf_expand(alpha);
    FunctionConfig cfg;
    cfg.c = 0.0; // singular part off
    cfg.smooth_part = [](double t) { return std::cos(2.0 * 3.14159265358979323846 * t); };
    const double avg = birkhoff_direct(cf, x, 100000, cfg) / 1e5;
    CHECK(std::abs(avg) <= 1e-2);
}

TEST_CASE("trig average identity and cross-route agreement") {
    SampleRng rng(103);
    for (int s = 0; s < 50; ++s) {
        Rational01 alpha = sample_point(rng);
        Rational01 x = sample_point(rng);
        CFExpansion cf = cf_expand(alpha);
        auto z = trig_average(cf, x, 1000); // throws if the routes disagree
        CHECK(z.real() == 0.5);
    }
}

TEST_CASE("direct summation is permutation stable") {
    SampleRng rng(107);
    Rational01 alpha = sample_point(rng);
    Rational01 x = sample_point(rng);
    CFExpansion cf = cf_expand(alpha);
    const std::uint64_t N = 20000;
    const double in_order = birkhoff_direct(cf, x, N, FunctionConfig{1.0, nullptr});

    // re-sum over orbit points sorted by position
    std::vector<double> pts;
    BigRat cur = x.value();
    for (std::uint64_t i = 0; i < N; ++i) {
        pts.push_back(rat_to_double(cur));
        cur += alpha.value();
        if (cur >= 1)
            cur -= 1;
    }
    std::sort(pts.begin(), pts.end());
    detail::Kahan acc;
    for (double t : pts)
        acc.add(1.0 / t - 1.0 / (1.0 - t));
    CHECK(std::abs(in_order - acc.value()) <=
          1e-9 * std::max(1.0, std::abs(in_order)));
}

TEST_CASE("cosecant partial sums") {
    Rational01 fib = Rational01::parse("102334155/165580141"); // F_40/F_41
    CFExpansion cf = cf_expand(fib);
    auto rep1 = cosecant_partial_sums(cf, 1);
    const double expected = 1.0 / std::sin(3.14159265358979323846 * fib.to_double());
    CHECK(rep1.max_abs == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rep1.argmax == 1);

    CFExpansion half = cf_expand(Rational01::parse("1/2"));
    CHECK_THROWS_AS(cosecant_partial_sums(half, 10), SingularHit);

    auto rep = cosecant_partial_sums(cf, 50000, {5000});
    REQUIRE(rep.segments.size() == 2);
    CHECK(rep.segments[0].k_hi == 5000);
    CHECK(rep.max_abs >= rep.segments[0].max_abs);
    CHECK(rep.max_abs >= rep.segments[1].max_abs);
    CHECK(rep.max_norm > 0.0);
}
