#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rotsum/cf.hpp"
#include "rotsum/cycles.hpp"
#include "rotsum/decomposition.hpp"
#include "rotsum/errors.hpp"
#include "rotsum/partitions.hpp"
#include "rotsum/statistics.hpp"
#include "rotsum/sums.hpp"

using json = nlohmann::ordered_json;
using namespace rotsum;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string rat_str(const BigRat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

Rational01 parse_alpha(const std::string& s) {
    if (s == "golden") {
        // F_60 / F_61
        BigInt a = 1, b = 1;
        for (int i = 2; i <= 61; ++i) {
            BigInt c = a + b;
            a = b;
            b = c;
        }
        return Rational01(a, b);
    }
    return Rational01::parse(s);
}

unsigned default_jobs() {
    if (const char* env = std::getenv("ROTSUM_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024)
            return static_cast<unsigned>(v);
    }
    return 1;
}

json make_manifest(const std::string& cmdline, std::uint64_t seed,
                   const json& params, bool with_timestamp) {
    json m;
    m["command_line"] = cmdline;
    m["seed"] = seed;
    m["grid_depth"] = kGridDepth;
    m["version"] = kVersion;
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now();
        m["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
                .count();
    }
    m["parameters"] = params;
    return m;
}

// Artifact manifests must be byte-stable across worker counts, so the
// --jobs option (which cannot affect results) is stripped from the echo.
std::string strip_jobs(const std::string& cmdline) {
    std::istringstream in(cmdline);
    std::string tok, out;
    bool skip_next = false;
    while (in >> tok) {
        if (skip_next) {
            skip_next = false;
            continue;
        }
        if (tok == "--jobs") {
            skip_next = true;
            continue;
        }
        if (tok.rfind("--jobs=", 0) == 0)
            continue;
        if (!out.empty())
            out += ' ';
        out += tok;
    }
    return out;
}

std::string join_argv(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i)
            s += ' ';
        s += argv[i];
    }
    return s;
}

json dist_to_json(const EmpiricalDistribution& d) {
    json j;
    j["kind"] = d.kind == EmpiricalDistribution::Kind::scalar ? "scalar" : "complex";
    j["samples"] = d.samples;
    json bins;
    bins["lo"] = d.bins.lo;
    bins["hi"] = d.bins.hi;
    bins["counts"] = d.bins.counts;
    bins["below"] = d.bins.below;
    bins["above"] = d.bins.above;
    j["bins"] = bins;
    json quant = json::array();
    for (const auto& [p, v] : d.quantiles)
        quant.push_back({{"p", p}, {"value", fmt17(v)}});
    j["quantiles"] = quant;
    j["seed"] = d.seed;
    json meta;
    meta["N"] = d.meta.N;
    meta["c"] = fmt17(d.meta.c);
    meta["grid_depth"] = d.meta.grid_depth;
    meta["rejected"] = d.meta.rejected;
    meta["mode"] = d.meta.mode;
    j["meta"] = meta;
    json vals = json::array();
    for (double v : d.values)
        vals.push_back(fmt17(v));
    j["values"] = std::move(vals);
    if (!d.values_im.empty()) {
        json ivals = json::array();
        for (double v : d.values_im)
            ivals.push_back(fmt17(v));
        j["values_im"] = std::move(ivals);
    }
    return j;
}

void dist_to_csv(std::ostream& os, const EmpiricalDistribution& d, const json& manifest) {
    os << "# manifest " << manifest.dump() << "\n";
    os << "bin_lower,bin_upper,count\n";
    const double w = (d.bins.hi - d.bins.lo) / static_cast<double>(d.bins.counts.size());
    os << "-inf," << fmt17(d.bins.lo) << "," << d.bins.below << "\n";
    for (std::size_t i = 0; i < d.bins.counts.size(); ++i)
        os << fmt17(d.bins.lo + w * static_cast<double>(i)) << ","
           << fmt17(d.bins.lo + w * static_cast<double>(i + 1)) << ","
           << d.bins.counts[i] << "\n";
    os << fmt17(d.bins.hi) << ",+inf," << d.bins.above << "\n";
    os << "quantile_p,value\n";
    for (const auto& [p, v] : d.quantiles)
        os << fmt17(p) << "," << fmt17(v) << "\n";
}

// ---- verify: fast cross-module invariant sweep ----------------------------

struct VerifyState {
    int failures = 0;
    void check(bool ok, const std::string& name) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok)
            ++failures;
    }
};

int run_verify(bool quick) {
    VerifyState vs;
    const std::uint64_t n_alpha = quick ? 25 : 200;
    const std::uint64_t n_orbits = quick ? 10 : 60;
    SampleRng rng(20260823);

    // CF identities across sampled alphas.
    bool cf_ok = true;
    for (std::uint64_t s = 0; s < n_alpha && cf_ok; ++s) {
        CFExpansion cf = cf_expand(sample_point(rng));
        const int top = std::min<int>(static_cast<int>(cf.depth()) - 1, 40);
        for (int n = 0; n + 1 <= top; ++n) {
            const auto un = static_cast<std::size_t>(n);
            if (BigRat(cf.q[un + 1]) * cf.lambda[un] + BigRat(cf.q[un]) * cf.lambda[un + 1] != 1)
                cf_ok = false;
            if (BigRat(cf.q[un + 1]) * cf.lambda[un] < BigRat(1, 2) ||
                BigRat(cf.q[un + 1]) * cf.lambda[un] > 1)
                cf_ok = false;
            if (BigRat(cf.q[un]) * cf.lambda[un + 1] > 1)
                cf_ok = false;
            if (n + 2 <= static_cast<int>(cf.depth()) &&
                cf.lam(n - 1) != cf.digit(un + 1) * cf.lam(n) + cf.lam(n + 1))
                cf_ok = false;
        }
    }
    vs.check(cf_ok, "cf: exact lattice identities and bounds");

    // Partition structure at a small even level.
    bool part_ok = true;
    SampleRng prng(777);
    for (std::uint64_t s = 0; s < (quick ? 5u : 20u) && part_ok; ++s) {
        CFExpansion cf = cf_expand(sample_point(prng));
        const int n = 2;
        auto lvl = build_level(cf, n);
        if (BigInt(lvl->intervals.size()) != lvl->q_n + lvl->q_n1)
            part_ok = false;
        auto code = coding_string(*lvl);
        auto refl = reflected_string(*lvl);
        std::string rev(code.letters.rbegin(), code.letters.rend());
        if (refl.letters != rev)
            part_ok = false;
    }
    vs.check(part_ok, "partition: interval count and reflection");

    // Cycle shift equations, exactly.
    bool cyc_ok = true;
    SampleRng crng(31337);
    for (std::uint64_t s = 0; s < (quick ? 5u : 20u) && cyc_ok; ++s) {
        CFExpansion cf = cf_expand(sample_point(crng));
        const int n = 2;
        const BigRat lam_n = cf.lam(n), lam_n1 = cf.lam(n + 1);
        Rational01 start(lam_n * BigRat(1, 3));
        auto [xs, ys] = cycle_points(cf, n, start);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (ys[i] - xs[i + 1] != lam_n1 - 2 * xs[0])
                cyc_ok = false;
        Rational01 s_start(1 - lam_n1 * BigRat(1, 3));
        auto [sxs, sys] = cycle_points(cf, n, s_start);
        for (std::size_t i = 1; i < sxs.size(); ++i)
            if (sys[i] - sxs[i - 1] != 2 * sys[0] - lam_n)
                cyc_ok = false;
        const double em = cycle_sum_exact(cf, n, start, 1.0) /
                          static_cast<double>(cycle_length(cf, n, start));
        const double g = g_eps(cf, n, start, 1.0, 0.5);
        if (std::abs(em - g) > 0.5)
            cyc_ok = false;
    }
    vs.check(cyc_ok, "cycles: shift identity and truncation bound");

    // Decomposition coverage and cross-oracle Birkhoff sums.
    bool dec_ok = true;
    SampleRng drng(424242);
    for (std::uint64_t s = 0; s < n_orbits && dec_ok; ++s) {
        try {
            Rational01 alpha = sample_point(drng);
            Rational01 x = sample_point(drng);
            CFExpansion cf = cf_expand(alpha);
            const std::uint64_t N = 100 + (drng.next() % 1900);
            auto dec = decompose(cf, x, N);
            BigInt covered = BigInt(dec.boundary.size());
            for (const auto& inv : dec.orders)
                for (const auto& cyc : inv.cycles)
                    covered += cyc.r;
            if (covered != BigInt(N))
                dec_ok = false;
            const double a = birkhoff_direct(cf, x, N, FunctionConfig{1.0, nullptr});
            const double b = birkhoff_via_cycles(cf, x, N, 1.0);
            if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
                dec_ok = false;
        } catch (const SingularHit&) {
        }
    }
    vs.check(dec_ok, "decomposition: exact coverage and oracle agreement");

    // Statistics determinism, jobs-independence.
    {
        FunctionConfig fc{1.0, nullptr};
        auto d1 = empirical_snn(64, quick ? 100 : 400, 99, fc, SnnMode::f1, 1);
        auto d2 = empirical_snn(64, quick ? 100 : 400, 99, fc, SnnMode::f1, 4);
        vs.check(d1.values == d2.values && d1.bins.counts == d2.bins.counts,
                 "statistics: deterministic and jobs-independent");
    }

    // Renewal ratio definition.
    {
        auto rs = renewal_stats(1000, quick ? 200 : 1000, 2, 5, 2);
        bool ok = true;
        for (double v : rs.ratio_hist.values)
            if (!(v > 1.0))
                ok = false;
        vs.check(ok, "renewal: q_n(N)/N > 1 for every sample");
    }

    std::cout << (vs.failures == 0 ? "verify: all checks passed"
                                   : "verify: FAILURES detected")
              << "\n";
    return vs.failures == 0 ? 0 : 1;
}

void emit(const std::string& out_path, const json& doc) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << doc.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birkhoff sums of functions with a 1/x singularity over circle rotations"};
    app.require_subcommand(1);
    const std::string cmdline = join_argv(argc, argv);

    std::string alpha_s, x_s, method = "direct", out_path;
    std::uint64_t N = 0, samples = 0, seed = 0, terms = 64;
    int level = 0, M = 4;
    unsigned bins = 200, jobs = default_jobs();
    double c = 1.0, eps = 0.1;
    bool complex_mode = false, quick = false;
    std::uint64_t split = 0;

    auto* cf_cmd = app.add_subcommand("cf", "continued fraction table");
    cf_cmd->add_option("--alpha", alpha_s, "rotation number num/den or 'golden'")->required();
    cf_cmd->add_option("--terms", terms, "maximum number of digits");

    auto* part_cmd = app.add_subcommand("partition", "dynamical partition at an even level");
    part_cmd->add_option("--alpha", alpha_s)->required();
    part_cmd->add_option("--level", level, "even level n")->required();

    auto* sum_cmd = app.add_subcommand("sum", "Birkhoff sum evaluators");
    sum_cmd->add_option("--alpha", alpha_s)->required();
    sum_cmd->add_option("--x", x_s, "starting point num/den")->required();
    sum_cmd->add_option("--N", N, "number of terms")->required();
    sum_cmd->add_option("--method", method)->check(CLI::IsMember({"direct", "cycles", "truncated"}));
    sum_cmd->add_option("--eps", eps, "truncation accuracy (method=truncated)");
    sum_cmd->add_option("--c", c, "singularity coefficient");

    auto* dec_cmd = app.add_subcommand("decompose", "orbit decomposition into cycles");
    dec_cmd->add_option("--alpha", alpha_s)->required();
    dec_cmd->add_option("--x", x_s)->required();
    dec_cmd->add_option("--N", N)->required();

    auto* dist_cmd = app.add_subcommand("dist", "empirical law of S_N/N or the complex average");
    dist_cmd->add_option("--N", N)->required();
    dist_cmd->add_option("--samples", samples)->required();
    dist_cmd->add_option("--seed", seed)->required();
    dist_cmd->add_flag("--complex", complex_mode, "complex trigonometric average");
    dist_cmd->add_option("--bins", bins, "histogram bin count");
    dist_cmd->add_option("--c", c);
    dist_cmd->add_option("--jobs", jobs);
    dist_cmd->add_option("--out", out_path, "output file (.json or .csv)");

    auto* ren_cmd = app.add_subcommand("renewal", "renewal-time statistics");
    ren_cmd->add_option("--N", N)->required();
    ren_cmd->add_option("--samples", samples)->required();
    ren_cmd->add_option("--M", M, "entry window half-width");
    ren_cmd->add_option("--seed", seed)->required();
    ren_cmd->add_option("--jobs", jobs);
    ren_cmd->add_option("--out", out_path);

    auto* cos_cmd = app.add_subcommand("cosecant", "running maxima of cosecant partial sums");
    cos_cmd->add_option("--alpha", alpha_s, "'golden' (F_60/F_61) or num/den")->required();
    cos_cmd->add_option("--N", N)->required();
    cos_cmd->add_option("--split", split, "also report maxima below/above this k");

    auto* ver_cmd = app.add_subcommand("verify", "run the invariant suite");
    ver_cmd->add_flag("--quick", quick);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cf_cmd->parsed()) {
            Rational01 alpha = parse_alpha(alpha_s);
            CFExpansion cf = cf_expand(alpha, static_cast<unsigned>(terms));
            json params{{"alpha", alpha.str()}, {"terms", terms}};
            json j;
            j["manifest"] = make_manifest(cmdline, 0, params, true);
            j["alpha"] = alpha.str();
            j["terminated"] = cf.terminated;
            json rows = json::array();
            for (std::size_t i = 0; i < cf.depth(); ++i) {
                json row;
                row["i"] = i + 1;
                row["a"] = cf.digits[i].str();
                row["p"] = cf.p[i + 1].str();
                row["q"] = cf.q[i + 1].str();
                row["lambda"] = rat_str(cf.lambda[i + 1]);
                rows.push_back(row);
            }
            j["lambda_0"] = rat_str(cf.lambda[0]);
            j["table"] = rows;
            emit(out_path, j);
            return 0;
        }

        if (part_cmd->parsed()) {
            Rational01 alpha = parse_alpha(alpha_s);
            CFExpansion cf = cf_expand(alpha);
            auto lvl = build_level(cf, level);
            json params{{"alpha", alpha.str()}, {"level", level}};
            json j;
            j["manifest"] = make_manifest(cmdline, 0, params, true);
            j["n"] = lvl->n;
            j["lambda_n"] = rat_str(lvl->lambda_n);
            j["lambda_n1"] = rat_str(lvl->lambda_n1);
            j["q_n"] = lvl->q_n.str();
            j["q_n1"] = lvl->q_n1.str();
            j["intervals_total"] = lvl->intervals.size();
            if (lvl->intervals.size() <= 10000) {
                json iv = json::array();
                for (const auto& it : lvl->intervals)
                    iv.push_back({{"left", rat_str(it.left)},
                                  {"type", std::string(1, it.type)},
                                  {"j", it.j.str()}});
                j["intervals"] = iv;
                j["coding"] = coding_string(*lvl).letters;
                j["coding_reflected"] = reflected_string(*lvl).letters;
            }
            emit(out_path, j);
            return 0;
        }

        if (sum_cmd->parsed()) {
            Rational01 alpha = parse_alpha(alpha_s);
            Rational01 x = Rational01::parse(x_s);
            CFExpansion cf = cf_expand(alpha);
            json params{{"alpha", alpha.str()}, {"x", x.str()},     {"N", N},
                        {"method", method},    {"c", fmt17(c)},     {"eps", fmt17(eps)}};
            double value;
            std::string estimates;
            if (method == "direct") {
                value = birkhoff_direct(cf, x, N, FunctionConfig{c, nullptr});
                estimates = "S_N";
            } else if (method == "cycles") {
                value = birkhoff_via_cycles(cf, x, N, c);
                estimates = "S_N";
            } else {
                value = G_eps_delta(cf, x, N, c, eps, 0.05, kDefaultMOrders);
                estimates = "S_N_over_N";
            }
            json j;
            j["manifest"] = make_manifest(cmdline, 0, params, true);
            j["method"] = method;
            j["estimates"] = estimates;
            j["value"] = fmt17(value);
            emit(out_path, j);
            return 0;
        }

        if (dec_cmd->parsed()) {
            Rational01 alpha = parse_alpha(alpha_s);
            Rational01 x = Rational01::parse(x_s);
            CFExpansion cf = cf_expand(alpha);
            auto dec = decompose(cf, x, N);
            json params{{"alpha", alpha.str()}, {"x", x.str()}, {"N", N}};
            json j;
            j["manifest"] = make_manifest(cmdline, 0, params, true);
            j["N"] = dec.N;
            j["n"] = dec.n;
            j["first_hit"] = dec.first_hit.str();
            json orders = json::array();
            for (const auto& inv : dec.orders) {
                json o;
                o["m"] = inv.m;
                o["forward_count"] = inv.cbar;
                o["backward_count"] = inv.cunder;
                json cycles = json::array();
                for (const auto& cyc : inv.cycles)
                    cycles.push_back({{"index", cyc.idx.str()},
                                      {"length", cyc.r.str()},
                                      {"start", rat_str(cyc.start)},
                                      {"forward", cyc.forward}});
                o["cycles"] = cycles;
                orders.push_back(o);
            }
            j["orders"] = orders;
            j["boundary"] = dec.boundary;
            emit(out_path, j);
            return 0;
        }

        if (dist_cmd->parsed()) {
            FunctionConfig fc{complex_mode ? 1.0 : c, nullptr};
            auto d = empirical_snn(N, samples, seed, fc,
                                   complex_mode ? SnnMode::complex_average : SnnMode::f1,
                                   jobs);
            if (bins != 200)
                d.bins = make_histogram(d.values, -50.0, 50.0, bins);
            json params{{"N", N},        {"samples", samples}, {"seed", seed},
                        {"complex", complex_mode}, {"bins", bins}, {"c", fmt17(fc.c)}};
            // Artifacts must be byte-stable across reruns and job counts, so
            // the file manifest carries no timestamp (stdout still does).
            json file_manifest = make_manifest(strip_jobs(cmdline), seed, params, false);
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                if (out_path.size() > 5 && out_path.substr(out_path.size() - 5) == ".json") {
                    json j = dist_to_json(d);
                    j["manifest"] = file_manifest;
                    f << j.dump(2) << "\n";
                } else {
                    dist_to_csv(f, d, file_manifest);
                }
            }
            json summary;
            summary["manifest"] = make_manifest(cmdline, seed, params, true);
            summary["samples"] = d.samples;
            summary["rejected"] = d.meta.rejected;
            if (!d.quantiles.empty()) {
                summary["median"] = fmt17(d.quantiles[49].second);
                summary["q01"] = fmt17(d.quantiles[0].second);
                summary["q99"] = fmt17(d.quantiles[98].second);
            }
            std::cout << summary.dump(2) << "\n";
            return 0;
        }

        if (ren_cmd->parsed()) {
            auto rs = renewal_stats(N, samples, M, seed, jobs);
            json params{{"N", N}, {"samples", samples}, {"M", M}, {"seed", seed}};
            json j;
            j["manifest"] = out_path.empty()
                                ? make_manifest(cmdline, seed, params, true)
                                : make_manifest(strip_jobs(cmdline), seed, params, false);
            j["N"] = rs.N;
            j["samples"] = rs.samples;
            j["M"] = rs.M;
            j["rejected"] = rs.rejected;
            j["ratio_hist"] = dist_to_json(rs.ratio_hist);
            j["q_ratio"] = dist_to_json(rs.q_ratio);
            j["lam_ratio"] = dist_to_json(rs.lam_ratio);
            j["inv_area_s"] = dist_to_json(rs.inv_area_s);
            j["inv_area_l"] = dist_to_json(rs.inv_area_l);
            json freqs = json::array();
            for (const auto& [key, count] : rs.entry_freqs) {
                json row;
                row["entries"] = key;
                row["count"] = count;
                freqs.push_back(row);
            }
            j["entry_freqs"] = freqs;
            emit(out_path, j);
            return 0;
        }

        if (cos_cmd->parsed()) {
            Rational01 alpha = parse_alpha(alpha_s);
            CFExpansion cf = cf_expand(alpha);
            std::vector<std::uint64_t> breaks;
            if (split > 0 && split < N)
                breaks.push_back(split);
            auto rep = cosecant_partial_sums(cf, N, breaks);
            json params{{"alpha", alpha.str()}, {"N", N}, {"split", split}};
            json j;
            j["manifest"] = make_manifest(cmdline, 0, params, true);
            j["N"] = rep.N;
            j["max_abs"] = fmt17(rep.max_abs);
            j["argmax"] = rep.argmax;
            j["max_norm"] = fmt17(rep.max_norm);
            j["argmax_norm"] = rep.argmax_norm;
            j["final_sum"] = fmt17(rep.final_sum);
            json segs = json::array();
            for (const auto& s : rep.segments)
                segs.push_back({{"k_lo", s.k_lo},
                                {"k_hi", s.k_hi},
                                {"max_abs", fmt17(s.max_abs)},
                                {"argmax", s.argmax},
                                {"max_norm", fmt17(s.max_norm)},
                                {"argmax_norm", s.argmax_norm}});
            j["segments"] = segs;
            emit(out_path, j);
            return 0;
        }

        if (ver_cmd->parsed())
            return run_verify(quick);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientDepth& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
