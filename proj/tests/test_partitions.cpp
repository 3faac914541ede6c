#include "doctest.h"

#include <algorithm>

#include "rotsum/errors.hpp"
#include "rotsum/partitions.hpp"

using namespace rotsum;

TEST_CASE("level 0 of 2/7") {
    // a = [3, 2]: lambda^(0) = 2/7, lambda^(1) = 1/7, q_1 = 3.
    CFExpansion cf = cf_expand(Rational01::parse("2/7"));
    auto lvl = build_level(cf, 0);
    REQUIRE(lvl->intervals.size() == 4);
    CHECK(lvl->q_n == 1);
    CHECK(lvl->q_n1 == 3);
    CHECK(coding_string(*lvl).letters == "llls");
    CHECK(reflected_string(*lvl).letters == "slll");
    CHECK(lvl->intervals[0].left == 0);
    CHECK(lvl->intervals[1].left == BigRat(2, 7));
    CHECK(lvl->intervals[3].left == BigRat(6, 7));
    CHECK(lvl->intervals[3].type == 's');
}

TEST_CASE("levels tile the unit interval exactly") {
    SampleRng rng(555);
    for (int s = 0; s < 10; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        for (int n = 0; n <= 4; n += 2) {
            auto lvl = build_level(cf, n);
            BigInt nl = 0, ns = 0;
            BigRat cursor = 0;
            for (const auto& it : lvl->intervals) {
                CHECK(it.left == cursor);
                if (it.type == 'l') {
                    ++nl;
                    cursor += lvl->lambda_n;
                } else {
                    ++ns;
                    cursor += lvl->lambda_n1;
                }
            }
            CHECK(cursor == 1);
            CHECK(nl == lvl->q_n1);
            CHECK(ns == lvl->q_n);
        }
    }
}

TEST_CASE("interval runs of l between s letters") {
    SampleRng rng(90210);
    for (int s = 0; s < 10; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        const int n = 2;
        auto lvl = build_level(cf, n);
        const std::string& code = coding_string(*lvl).letters;
        const BigInt a = cf.digit(static_cast<std::size_t>(n) + 1);
        std::size_t prev = std::string::npos;
        for (std::size_t i = 0; i < code.size(); ++i) {
            if (code[i] != 's')
                continue;
            if (prev != std::string::npos) {
                const BigInt run = i - prev - 1;
                CHECK((run == a || run == a + 1));
            }
            prev = i;
        }
    }
}

TEST_CASE("middle point translation relations") {
    SampleRng rng(1234);
    for (int s = 0; s < 10; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        for (int n = 0; n <= 2; n += 2) {
            auto lvl = build_level(cf, n);
            auto mp = middle_points(*lvl);
            const BigRat shift = lvl->lambda_n1 - lvl->lambda_n;
            REQUIRE(BigInt(mp.z_l.size()) == lvl->q_n1);
            REQUIRE(BigInt(mp.z_s.size()) == lvl->q_n);
            for (std::size_t i = 0; i + 1 < mp.z_l.size(); ++i)
                CHECK(mp.zp_l[i] == mp.z_l[i + 1] + shift);
            for (std::size_t i = 1; i < mp.z_s.size(); ++i)
                CHECK(mp.zp_s[i] == mp.z_s[i - 1] + shift);
        }
    }
}

TEST_CASE("almost symmetry of the coding string") {
    SampleRng rng(31415);
    for (int s = 0; s < 10; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        for (int n = 0; n <= 4; n += 2) {
            auto sym = almost_symmetry_check(cf, n);
            CHECK(sym.interior_match);
            CHECK(sym.ends_differ);
            // Cross-check against the materialized strings when small.
            auto lvl = build_level(cf, n);
            const std::string code = coding_string(*lvl).letters;
            const std::string refl = reflected_string(*lvl).letters;
            CHECK(std::equal(code.begin() + 1, code.end() - 1, refl.begin() + 1));
            CHECK(code.front() != refl.front());
            CHECK(code.back() != refl.back());
        }
    }
}

TEST_CASE("almost symmetry windows on a deep level") {
    SampleRng rng(777777);
    CFExpansion cf = cf_expand(sample_point(rng));
    int n = 16;
    while (n >= 2 && static_cast<int>(cf.depth()) < n + 2)
        n -= 2;
    auto sym = almost_symmetry_check(cf, n, 1000, 200);
    CHECK(sym.interior_match);
    CHECK(sym.ends_differ);
}

TEST_CASE("argument validation") {
    CFExpansion cf = cf_expand(Rational01::parse("2/7"));
    CHECK_THROWS(build_level(cf, 1));              // odd level
    CHECK_THROWS_AS(build_level(cf, 2), InsufficientDepth); // lambda^(3) missing
}
