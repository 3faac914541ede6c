#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = ROTSUM_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args) {
    const std::string out = "/tmp/rotsum_cli_test_out.txt";
    const std::string cmd = kCli + " " + args + " >" + out + " 2>&1";
    std::system(cmd.c_str());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("exit codes") {
    CHECK(run("cf --alpha 3/7") == 0);
    CHECK(run("cf") == 2);                   // missing required option
    CHECK(run("cf --alpha 7/3") == 2);       // alpha outside (0,1)
    CHECK(run("cf --alpha nonsense") == 2);  // malformed rational
    CHECK(run("frobnicate") == 2);           // unknown subcommand
    CHECK(run("sum --alpha 2/7 --x 1/4 --N 10 --method bogus") == 2);
    CHECK(run("cosecant --alpha 1/2 --N 10") == 1); // singular orbit
    CHECK(run("partition --alpha 2/7 --level 3") == 2); // odd level
}

TEST_CASE("sum methods agree") {
    const std::string d =
        run_capture("sum --alpha 610/987 --x 1/11 --N 300 --method direct");
    const std::string c =
        run_capture("sum --alpha 610/987 --x 1/11 --N 300 --method cycles");
    auto value_of = [](const std::string& s) {
        auto pos = s.find("\"value\"");
        REQUIRE(pos != std::string::npos);
        auto q1 = s.find('"', pos + 8);
        auto q2 = s.find('"', q1 + 1);
        return std::stod(s.substr(q1 + 1, q2 - q1 - 1));
    };
    const double vd = value_of(d), vc = value_of(c);
    CHECK(std::abs(vd - vc) <= 1e-9 * std::max(1.0, std::abs(vd)));
}

TEST_CASE("dist artifacts are byte-identical across job counts") {
    const std::string p = "/tmp/rotsum_dist_test.csv";
    REQUIRE(run("dist --N 200 --samples 120 --seed 31 --jobs 1 --out " + p) == 0);
    const std::string first = slurp(p);
    std::remove(p.c_str());
    REQUIRE(run("dist --N 200 --samples 120 --seed 31 --jobs 8 --out " + p) == 0);
    const std::string second = slurp(p);
    CHECK(first == second);
    CHECK(first.find("manifest") != std::string::npos);
    CHECK(first.find("quantile_p") != std::string::npos);
    std::remove(p.c_str());
}

TEST_CASE("json artifact round trip") {
    const std::string p = "/tmp/rotsum_dist_test.json";
    REQUIRE(run("dist --N 100 --samples 60 --seed 5 --out " + p) == 0);
    const std::string doc = slurp(p);
    CHECK(doc.find("\"kind\": \"scalar\"") != std::string::npos);
    CHECK(doc.find("\"seed\": 5") != std::string::npos);
    CHECK(doc.find("timestamp") == std::string::npos); // determinism contract
    std::remove(p.c_str());
}

TEST_CASE("verify quick passes") {
    CHECK(run("verify --quick") == 0);
}

TEST_CASE("golden alpha sugar") {
    const std::string out = run_capture("cosecant --alpha golden --N 100");
    CHECK(out.find("\"max_abs\"") != std::string::npos);
}
