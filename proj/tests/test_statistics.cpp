#include "doctest.h"

#include <cmath>

#include "rotsum/statistics.hpp"

using namespace rotsum;

TEST_CASE("histogram accounting and merge") {
    std::vector<double> v{-100.0, -49.9, 0.0, 10.0, 49.9, 60.0, 60.0};
    Histogram h = make_histogram(v);
    std::uint64_t total = h.below + h.above;
    for (auto c : h.counts)
        total += c;
    CHECK(total == v.size());
    CHECK(h.below == 1);
    CHECK(h.above == 2);

    std::vector<double> a(v.begin(), v.begin() + 3), b(v.begin() + 3, v.end());
    Histogram merged = merge_histograms(make_histogram(a), make_histogram(b));
    CHECK(merged.counts == h.counts);
    CHECK(merged.below == h.below);
    CHECK(merged.above == h.above);
}

TEST_CASE("empirical law is deterministic and shard-independent") {
    FunctionConfig fc{1.0, nullptr};
    auto d1 = empirical_snn(128, 300, 77, fc, SnnMode::f1, 1);
    auto d2 = empirical_snn(128, 300, 77, fc, SnnMode::f1, 1);
    auto d3 = empirical_snn(128, 300, 77, fc, SnnMode::f1, 5);
    CHECK(d1.values == d2.values);
    CHECK(d1.values == d3.values);
    CHECK(d1.bins.counts == d3.bins.counts);
    CHECK(d1.quantiles == d3.quantiles);
    auto d4 = empirical_snn(128, 300, 78, fc, SnnMode::f1, 1);
    CHECK_FALSE(d1.values == d4.values);
}

TEST_CASE("quantiles are monotone") {
    FunctionConfig fc{1.0, nullptr};
    auto d = empirical_snn(64, 500, 9, fc, SnnMode::f1, 2);
    for (std::size_t i = 1; i < d.quantiles.size(); ++i) {
        CHECK(d.quantiles[i].first > d.quantiles[i - 1].first);
        CHECK(d.quantiles[i].second >= d.quantiles[i - 1].second);
    }
}

TEST_CASE("complex mode pins the real part") {
    FunctionConfig fc{1.0, nullptr};
    auto d = empirical_snn(100, 200, 5, fc, SnnMode::complex_average, 2);
    REQUIRE(d.values.size() == d.values_im.size());
    double mean = 0;
    for (double r : d.values)
        mean += r;
    mean /= static_cast<double>(d.values.size());
    CHECK(std::abs(mean - 0.5) <= 1e-9);
}

TEST_CASE("ks distance basics") {
    FunctionConfig fc{1.0, nullptr};
    auto d = empirical_snn(64, 200, 3, fc, SnnMode::f1, 1);
    CHECK(ks_distance(d, d) == 0.0);

    auto zero = make_distribution(EmpiricalDistribution::Kind::scalar,
                                  std::vector<double>(50, 0.0), {}, 0, DistMeta{});
    auto one = make_distribution(EmpiricalDistribution::Kind::scalar,
                                 std::vector<double>(50, 1.0), {}, 0, DistMeta{});
    CHECK(ks_distance(zero, one) == 1.0);

    auto cx = empirical_snn(64, 100, 3, fc, SnnMode::complex_average, 1);
    CHECK_THROWS_AS(ks_distance(d, cx), KindMismatch);

    auto da = empirical_snn(200, 2000, 11, fc, SnnMode::f1, 2);
    auto db = empirical_snn(200, 2000, 12, fc, SnnMode::f1, 2);
    CHECK(ks_distance(da, db) <= 0.06); // two-sample KS, well above critical value
}

TEST_CASE("ks versus uniform") {
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i)
        grid.push_back((i + 0.5) / 1000.0);
    CHECK(ks_vs_uniform(grid) <= 1e-3 + 1e-12);
    std::vector<double> clumped(100, 0.25);
    CHECK(ks_vs_uniform(clumped) >= 0.7);
}

TEST_CASE("renewal statistics ranges") {
    auto rs = renewal_stats(500, 400, 2, 21, 2);
    CHECK(rs.ratio_hist.values.size() == 400);
    std::uint64_t freq_total = 0;
    for (const auto& [key, cnt] : rs.entry_freqs) {
        CHECK(key.size() == 5);
        for (int e : key)
            CHECK((e >= 0 && e <= kEntryCap));
        freq_total += cnt;
    }
    CHECK(freq_total == 400);
    for (std::size_t i = 0; i < rs.ratio_hist.values.size(); ++i) {
        CHECK(rs.ratio_hist.values[i] > 1.0);
        CHECK(rs.q_ratio.values[i] > 0.0);
        CHECK(rs.q_ratio.values[i] < 1.0);
        CHECK(rs.lam_ratio.values[i] > 0.0);
        CHECK(rs.lam_ratio.values[i] < 1.0);
        CHECK(rs.inv_area_s.values[i] >= 1.0 - 1e-12);
        CHECK(rs.inv_area_l.values[i] >= 1.0 - 1e-12);
        CHECK(rs.inv_area_l.values[i] <= 2.0 + 1e-12);
    }
    auto rs2 = renewal_stats(500, 400, 2, 21, 5);
    CHECK(rs2.ratio_hist.values == rs.ratio_hist.values);
    CHECK(rs2.entry_freqs == rs.entry_freqs);
}

TEST_CASE("power bound rate is monotone in C") {
    const double r10 = power_bound_rate(1000, 500, 10.0, 33, 2);
    const double r100 = power_bound_rate(1000, 500, 100.0, 33, 2);
    const double r1000 = power_bound_rate(1000, 500, 1000.0, 33, 2);
    CHECK(r10 >= r100);
    CHECK(r100 >= r1000);
    CHECK(r1000 <= 0.05);
    const double tight = power_bound_rate(1000, 500, 0.99, 33, 2);
    CHECK(tight > 0.3);
}
