#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "radcap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = radcap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> v;
    std::istringstream is(line);
    for (std::string f; std::getline(is, f, ',');) v.push_back(std::strtod(f.c_str(), nullptr));  // text -> 0
    return v;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("radcap_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("measure on the plane") {
    const Run r = run({"--weight", "constant", "--n", "2", "measure", "--grid", "1e-6:1e6:49"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 50);
    CHECK(ls[0] == "r,f,fprime,flags");
    bool found = false;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto f = fields(ls[i]);
        CHECK(f[1] == doctest::Approx(std::numbers::pi * f[0] * f[0]).epsilon(1e-12));
        if (std::fabs(f[0] - 1) < 1e-12) {
            found = true;
            CHECK(std::fabs(f[1] - std::numbers::pi) < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("measure on ladder radii and on the Cantor staircase") {
    const Run r = run({"--weight", "ex1", "measure", "--grid-ladder", "6"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).size() == 15);
    const Run c = run({"--weight", "cantor", "measure", "--grid", "0.3333333333333333:1:2"});
    REQUIRE(c.code == 0);
    const auto f = fields(lines(c.out)[1]);
    CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("capacity rows") {
    const Run a = run({"--weight", "constant", "--n", "2", "--p", "2", "capacity", "--r", "1", "--R", "2"});
    REQUIRE(a.code == 0);
    CHECK(fields(lines(a.out)[1])[2] == doctest::Approx(2 * std::numbers::pi / std::numbers::ln2).epsilon(1e-12));
    const Run b = run({"--weight", "constant", "--n", "3", "--p", "2", "capacity", "--r", "1", "--R", "inf"});
    REQUIRE(b.code == 0);
    CHECK(fields(lines(b.out)[1])[2] == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("exponents and check emit JSON") {
    const Run e = run({"--weight", "abcd", "--n", "2", "--a", "1.5", "--b", "2", "--c", "2.5", "--d", "3", "exponents"});
    REQUIRE(e.code == 0);
    const auto j = nlohmann::json::parse(e.out);
    REQUIRE(j.contains("report"));
    const auto& sets = j["report"]["sets"];
    REQUIRE(sets.size() == 8);
    for (const auto& s : sets)
        for (const char* key : {"set", "endpoint", "attained", "evidence_slope", "r_range"}) CHECK(s.contains(key));
    CHECK(sets[0]["r_range"].size() == 2);
    CHECK(j["report"]["bracket_zero"].contains("loq"));
    CHECK(j["report"]["bracket_zero"].contains("uq"));
    const Run c = run({"--weight", "constant", "--n", "3", "--p", "2", "check"});
    REQUIRE(c.code == 0);
    const auto k = nlohmann::json::parse(c.out);
    CHECK(k.dump().find("consistent") != std::string::npos);
    // p = 1: no exact capacity, bounds are compared pairwise
    const Run one = run({"--weight", "constant", "--n", "2", "--p", "1", "check"});
    REQUIRE(one.code == 0);
    const auto pairs = nlohmann::json::parse(one.out);
    REQUIRE(pairs.size() > 0);
    for (const auto& x : pairs) CHECK(x["consistent"].get<bool>());
}

TEST_CASE("exit codes") {
    CHECK(run({"--weight", "nope", "measure"}).code == 2);
    CHECK(run({"--weight", "constant", "--n", "2", "--p", "2", "capacity", "--r", "2", "--R", "1"}).code == 2);
    CHECK(run({"--weight", "constant", "--n", "2", "--p", "2", "check", "--bound", "UB-NOPE"}).code == 2);
    CHECK(run({"--bogus-flag"}).code == 2);
    CHECK(run({"--weight", "cantor", "--p", "2", "capacity", "--r", "0.1", "--R", "0.5"}).code == 2);  // unsupported
    // audit-less check of a bound whose hypothesis fails
    CHECK(run({"--weight", "ex1", "--p", "3", "check", "--bound", "LB-INT-lQ"}).code == 2);
    // mu(B_r) diverges for rho^-3 in the plane
    CHECK(run({"--weight", "power", "--n", "2", "--alpha", "-3", "measure", "--grid", "0.1:1:3"}).code == 3);
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args = {"--weight", "ex1", "--p", "2", "check"};
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("configuration files") {
    const fs::path d = scratch("config");
    {
        std::ofstream f(d / "ok.toml");
        f << "weight = \"constant\"\nn = 3\np = 2.0\n";
    }
    const Run a = run({"--config", (d / "ok.toml").string(), "capacity", "--r", "1", "--R", "inf"});
    REQUIRE(a.code == 0);
    CHECK(fields(lines(a.out)[1])[2] == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
    // command-line flags override the file
    const Run b = run({"--config", (d / "ok.toml").string(), "--n", "2", "capacity", "--r", "1", "--R", "2"});
    REQUIRE(b.code == 0);
    CHECK(fields(lines(b.out)[1])[2] == doctest::Approx(2 * std::numbers::pi / std::numbers::ln2).epsilon(1e-12));
    {
        std::ofstream f(d / "bad.toml");
        f << "weight = \"constant\"\ncolour = 3\n";
    }
    CHECK(run({"--config", (d / "bad.toml").string(), "measure"}).code == 2);
    // dump-config output reads back as a config
    const Run dump = run({"--weight", "constant", "--n", "3", "--p", "2", "--dump-config"});
    REQUIRE(dump.code == 0);
    {
        std::ofstream f(d / "dumped.toml");
        f << dump.out;
    }
    const Run c = run({"--config", (d / "dumped.toml").string(), "capacity", "--r", "1", "--R", "inf"});
    CHECK(c.code == 0);
    CHECK(c.out == a.out);
    fs::remove_all(d);
}

TEST_CASE("gallery writes a manifest and one report per item") {
    const fs::path d = scratch("gallery");
    const Run g = run({"--out", (d / "g").string(), "gallery"});
    CHECK(g.code == 0);
    REQUIRE(fs::exists(d / "g" / "manifest.json"));
    std::ifstream mf(d / "g" / "manifest.json");
    const auto m = nlohmann::json::parse(mf);
    CHECK(m.dump().find("cantor") != std::string::npos);
    CHECK(fs::exists(d / "g" / "ex1.json"));
    CHECK(fs::exists(d / "g" / "ex1_scans.csv"));
    const Run one = run({"--out", (d / "h").string(), "gallery", "--only", "abcd"});
    CHECK(one.code == 0);
    CHECK(fs::exists(d / "h" / "abcd.json"));
    CHECK_FALSE(fs::exists(d / "h" / "ex1.json"));
    CHECK(run({"--out", (d / "h").string(), "gallery", "--only", "nope"}).code == 2);
    fs::remove_all(d);
}
