#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qsearch/cli.hpp"
#include "support.hpp"

using namespace qsearch;
using namespace qsearch::cli;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cmd_dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string temp_path(const std::string& name) {
    const char* dir = std::getenv("TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/qsearch_test_" + name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse_omega grammar") {
    const auto half = parse_omega("pi/2");
    CHECK(half.value() == 1.5707963267948966);
    REQUIRE(half.rational());
    CHECK(half.rational()->c == 1);
    CHECK(half.rational()->d == 4);
    CHECK(parse_omega("2pi/3").value() == 2.0943951023931953);
    CHECK(parse_omega("pi").value() == kPi);
    CHECK(parse_omega("-pi/2").value() == -kPi / 2);
    CHECK(parse_omega("1.0").value() == 1.0);
    CHECK_FALSE(parse_omega("1.0").rational());
    CHECK(parse_omega("0.5pi").value() == 0.5 * kPi);
    CHECK(parse_omega("1e-3").value() == 1e-3);
    CHECK(parse_angle("3pi/2") == 1.5 * kPi);
    CHECK_THROWS_AS(parse_omega("0"), domain_error);
    CHECK_THROWS_AS(parse_omega("3pi/2"), domain_error);
    CHECK_THROWS_AS(parse_omega("-pi"), domain_error);
    try {
        parse_omega("2pi/x");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 4);
    }
    try {
        parse_omega("abc");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 0);
    }
    CHECK_THROWS_AS(parse_omega(""), parse_error);
    CHECK_THROWS_AS(parse_omega("pi/0"), parse_error);
}

TEST_CASE("table single cell") {
    const auto r = run({"table", "--n", "10", "--omega", "pi/2"});
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "n,omega_label,algorithm,iterations,success_probability,error_rate,error");
    const auto f = split(ls[1]);
    REQUIRE(f.size() == 7);
    CHECK(f[1] == "pi/2");
    CHECK(f[3] == "36");
    CHECK(std::stod(f[5]) == doctest::Approx(0.2227).epsilon(1e-3));

    const auto p = run({"table", "--n", "10", "--omega", "pi/2", "--paper-format"});
    CHECK(lines(p.out).at(1) == "10,pi/2,separable,36,2.2e-01");
}

TEST_CASE("table grid shapes") {
    const auto g = run({"table", "--grover-only"});
    CHECK(g.code == 0);
    CHECK(lines(g.out).size() == 5);
    const auto full = run({"table", "--threads", "2"});
    CHECK(full.code == 0);
    CHECK(lines(full.out).size() == 25);
    const auto with = run({"table", "--n", "10,12", "--omega", "1.0", "--grover"});
    CHECK(lines(with.out).size() == 5);
}

TEST_CASE("table failures mark the error column and exit 1") {
    const auto r = run({"table", "--n", "200", "--omega", "pi/2"});
    CHECK(r.code == 1);
    const auto f = split(lines(r.out).at(1));
    CHECK_FALSE(f.back().empty());
}

TEST_CASE("table json envelope") {
    const auto r = run({"table", "--n", "10", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["command"] == "table");
    CHECK(j["rows"].size() == 6);
    CHECK(j.contains("params"));
    CHECK(j["version"] == kVersion);
}

TEST_CASE("phi samples") {
    auto collect = [](int n) {
        const auto r = run({"phi", "--n", std::to_string(n), "--samples", "512"});
        REQUIRE(r.code == 0);
        std::vector<std::pair<double, double>> pts;
        const auto ls = lines(r.out);
        CHECK(ls[0] == "omega,phi,error");
        for (std::size_t i = 1; i < ls.size(); ++i) {
            const auto f = split(ls[i]);
            pts.emplace_back(std::stod(f[0]), std::stod(f[1]));
        }
        return pts;
    };
    const auto p10 = collect(10);
    REQUIRE(p10.size() == 512);
    double max10 = 0.0;
    for (std::size_t i = 0; i < p10.size(); ++i) {
        CHECK(std::abs(p10[i].second) < 0.2 * kPi);
        CHECK(p10[i].first == -p10[p10.size() - 1 - i].first);
        CHECK(p10[i].second == -p10[p10.size() - 1 - i].second);
        max10 = std::max(max10, std::abs(p10[i].second));
    }
    double max40 = 0.0;
    for (const auto& [w, p] : collect(40)) max40 = std::max(max40, std::abs(p));
    CHECK(max40 < max10);

    // an odd sample count puts the middle sample on omega = 0
    const auto odd = run({"phi", "--n", "10", "--samples", "3"});
    CHECK(odd.code == 1);
    CHECK(lines(odd.out).size() == 4);
}

TEST_CASE("simulate engines agree") {
    auto prob = [](const std::vector<std::string>& extra) {
        std::vector<std::string> args{"simulate", "--n", "12", "--omega", "2pi/3"};
        args.insert(args.end(), extra.begin(), extra.end());
        const auto r = run(args);
        REQUIRE(r.code == 0);
        return std::stod(split(lines(r.out).at(1)).at(7));
    };
    const double full = prob({"--engine", "full", "--j", "5"});
    const double reduced = prob({"--engine", "reduced"});
    CHECK(std::abs(full - reduced) < 1e-10);
    const double kick = prob({"--engine", "full", "--j", "5", "--oracle", "kickback"});
    CHECK(std::abs(kick - full) < 1e-12);

    const double two_full = prob({"--engine", "full", "--solutions", "2", "--j", "5", "--j2", "1000"});
    const double two_red = prob({"--engine", "reduced", "--solutions", "2", "--j", "5", "--j2", "1000"});
    CHECK(std::abs(two_full - two_red) < 1e-10);

    CHECK(run({"simulate", "--n", "12", "--omega", "pi/2", "--solutions", "2"}).code == 1);
    CHECK(run({"simulate", "--n", "4", "--omega", "pi/2", "--j", "16"}).code == 1);
    CHECK(run({"simulate", "--n", "30", "--omega", "pi/2", "--engine", "full"}).code == 1);
}

TEST_CASE("spectrum json has n+1 eigenpairs") {
    const auto r = run({"spectrum", "--n", "20", "--omega", "pi/2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["report"]["eigenpairs"].size() == 21);
    CHECK(j["report"]["secular_residuals"]["eigenvalue"].get<double>() < 1e-8);
}

TEST_CASE("lemma, aqc, evolve and cost reports") {
    const auto l = run({"lemma", "--n", "64,256"});
    REQUIRE(l.code == 0);
    const auto lj = json::parse(l.out);
    CHECK(lj["report"]["mean"].size() == 2);
    CHECK(lj["report"]["cot"].size() == 3);

    const auto a = run({"aqc", "--n", "10"});
    REQUIRE(a.code == 0);
    const auto aj = json::parse(a.out);
    CHECK(aj["report"]["rows"][0]["roland"]["mu_star"].get<double>() == doctest::Approx(0.5));

    const auto e = run({"evolve", "--n", "6", "--T", "50", "--checkpoints", "0.5"});
    REQUIRE(e.code == 0);
    const auto ej = json::parse(e.out);
    CHECK(ej["report"]["runs"][0]["checkpoints"].size() == 2);

    CHECK(run({"lemma", "--format", "csv"}).code == 1);
}

TEST_CASE("cost model") {
    // equal per-step cost: the time ratio is the iteration ratio
    const auto eq = cost_report(20, parse_omega("pi"), CostModel{1.0, 20.0, 1.0, false});
    CHECK(eq.circuit_iterations == 804);
    CHECK(eq.grover_iterations == 804);
    CHECK(eq.ratio == doctest::Approx(1.0));
    const auto half = cost_report(20, parse_omega("pi/2"), CostModel{1.0, 20.0, 3.0, false});
    CHECK(half.ratio == doctest::Approx(1137.0 / 804.0));
    const auto par = cost_report(20, parse_omega("4pi/5"), CostModel{1.0, 50.0, 1.0, true});
    CHECK(par.t_new < par.t_grover);
    CHECK(par.break_even_t_multi == doctest::Approx(par.t_new / 804 - 1.0));
    CHECK_THROWS_AS(cost_report(20, parse_omega("pi"), CostModel{0.0, 1.0, 1.0, false}), domain_error);

    const auto r = run({"cost", "--n", "20", "--omega", "4pi/5", "--t-multi", "50", "--parallel"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["report"]["t_new"].get<double>() < j["report"]["t_grover"].get<double>());
}

TEST_CASE("exit codes and error json") {
    CHECK(run({"table", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const auto bad = run({"simulate", "--n", "10", "--omega", "0", "--error-json"});
    CHECK(bad.code == 1);
    const auto j = json::parse(bad.err);
    CHECK(j["error"]["kind"] == "domain_error");
    CHECK(j["exit_code"] == 1);
    const auto parse = run({"spectrum", "--n", "10", "--omega", "2pi/", "--error-json"});
    CHECK(json::parse(parse.err)["error"]["kind"] == "parse_error");
}

TEST_CASE("config file supplies defaults, flags win") {
    const std::string path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"n": [10], "omega": "pi/2", "paper-format": true})";
    }
    const auto a = run({"table", "--config", path});
    CHECK(a.code == 0);
    CHECK(lines(a.out).at(1) == "10,pi/2,separable,36,2.2e-01");
    const auto b = run({"table", "--config", path, "--n", "20"});
    CHECK(lines(b.out).at(1).rfind("20,pi/2,separable,1137,", 0) == 0);
    CHECK(run({"table", "--config", temp_path("missing.json")}).code == 2);
    std::remove(path.c_str());
}

TEST_CASE("thread count does not change output") {
    const auto one = run({"table", "--n", "10,20", "--threads", "1"});
    setenv("QSEARCH_THREADS", "3", 1);
    const auto env = run({"table", "--n", "10,20"});
    unsetenv("QSEARCH_THREADS");
    CHECK(one.out == env.out);
}

TEST_CASE("binary: reruns are byte-identical and honor the exit-code contract") {
    const std::string tool = QSEARCH_TOOL;
    const std::string a = temp_path("run_a.csv"), b = temp_path("run_b.csv");
    const auto ra = qsearch::testing::run_command(tool + " table --n 10,20 --output " + a);
    const auto rb = qsearch::testing::run_command(tool + " table --n 10,20 --output " + b);
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    const std::string fa = qsearch::testing::read_file(a);
    CHECK(fa == qsearch::testing::read_file(b));
    CHECK(fa.find('\r') == std::string::npos);
    std::remove(a.c_str());
    std::remove(b.c_str());

    CHECK(qsearch::testing::run_command(tool + " table --nope 2>/dev/null").exit_code == 2);
    CHECK(qsearch::testing::run_command(tool + " phi --n 0 2>/dev/null").exit_code == 1);
    const auto ej = qsearch::testing::run_command(tool + " phi --n 10 --samples 1 --error-json 2>&1 >/dev/null");
    CHECK(ej.exit_code == 1);
    CHECK(json::parse(ej.out)["error"]["kind"] == "domain_error");
}

}
