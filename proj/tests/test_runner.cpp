#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtm/engine.hpp"
#include "dtm/runner.hpp"

using namespace dtm;

namespace {

struct Captured {
    int code = -1;
    std::string out;
    std::string err;
};

Captured run_cfg(const RunConfig& cfg) {
    std::ostringstream out, err;
    Captured c;
    c.code = run(cfg, out, err);
    c.out = out.str();
    c.err = err.str();
    return c;
}

RunConfig example_cfg(int n) {
    RunConfig cfg;
    cfg.example = n;
    return cfg;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream f(path);
    f << text;
    return path;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

TEST_CASE("identical configuration produces byte-identical reports") {
    for (OutputFormat f : {OutputFormat::Markdown, OutputFormat::Csv, OutputFormat::Json}) {
        RunConfig cfg = example_cfg(1);
        cfg.orders = {12};
        cfg.format = f;
        auto a = run_cfg(cfg);
        auto b = run_cfg(cfg);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("markdown report quotes the published digits") {
    RunConfig cfg = example_cfg(1);
    cfg.orders = {20};
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    // w1 at v = 0.2, ten significant digits
    CHECK(c.out.find("0.1823215568") != std::string::npos);
    CHECK(c.out.find("### w1") != std::string::npos);
    CHECK(c.out.find("## Maximum absolute error") != std::string::npos);
    // reference diverges at 1.0 for w2, stays finite for w1
    CHECK(c.out.find("| 1 |") != std::string::npos);
    // timings live on the diagnostic stream, not in the report
    CHECK(c.out.find("ms") == std::string::npos);
    CHECK(c.err.find("ms") != std::string::npos);
}

TEST_CASE("explicit grids are used verbatim without extension rows") {
    RunConfig cfg = example_cfg(1);
    cfg.orders = {10};
    cfg.grid_start = 0.2;
    cfg.grid_stop = 0.4;
    cfg.grid_step = 0.1;
    cfg.custom_grid = true;
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("| 0.2 |") != std::string::npos);
    CHECK(c.out.find("| 0.5 |") == std::string::npos);
    CHECK(c.out.find("| 1 |") == std::string::npos);
}

TEST_CASE("csv cells round-trip to the doubles that produced them") {
    RunConfig cfg = example_cfg(2);
    cfg.orders = {15};
    cfg.format = OutputFormat::Csv;
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    auto lines = split(c.out, '\n');
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "kind,order,variable,v,exact,approx,abs_err,rel_err");
    int numeric_cells = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto cells = split(lines[i], ',');
        REQUIRE(cells.size() == 8);
        for (std::size_t k = 3; k < cells.size(); ++k) {
            if (cells[k].empty()) continue;
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.17g", std::strtod(cells[k].c_str(), nullptr));
            CHECK(cells[k] == buf);
            ++numeric_cells;
        }
    }
    CHECK(numeric_cells > 100);
}

TEST_CASE("json report carries the published error magnitude") {
    RunConfig cfg = example_cfg(2);
    cfg.orders = {15};
    cfg.format = OutputFormat::Json;
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    auto j = nlohmann::json::parse(c.out);
    CHECK(j["alpha"] == "1/1");
    bool found = false;
    for (const auto& vj : j["runs"][0]["variables"])
        if (vj["id"] == "w") {
            CHECK(vj["max_error"].get<double>() <= 1e-10);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("order lists run in sequence into one report") {
    RunConfig cfg = example_cfg(3);
    cfg.orders = {5, 10, 12};
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("## Order N = 5") != std::string::npos);
    CHECK(c.out.find("## Order N = 10") != std::string::npos);
    CHECK(c.out.find("## Order N = 12") != std::string::npos);
}

TEST_CASE("fractional override reports values only") {
    RunConfig cfg = example_cfg(5);
    cfg.orders = {10};
    cfg.alpha = "9/10";
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("| v | approx |") != std::string::npos);
    CHECK(c.out.find("exact") == std::string::npos);
    // value on the fractional grid at v = 0.5
    CHECK(c.out.find("1.604900128") != std::string::npos);
}

TEST_CASE("constraint check is reported when asked") {
    RunConfig cfg = example_cfg(2);
    cfg.orders = {15};
    cfg.check_constraints = true;
    auto c = run_cfg(cfg);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("Max constraint residual") != std::string::npos);

    cfg.format = OutputFormat::Json;
    auto cj = run_cfg(cfg);
    auto j = nlohmann::json::parse(cj.out);
    CHECK(j["runs"][0]["constraint_residual"].get<double>() < 1e-10);
}

TEST_CASE("output path writes the same bytes as the stream") {
    RunConfig cfg = example_cfg(4);
    cfg.orders = {8};
    auto direct = run_cfg(cfg);
    REQUIRE(direct.code == 0);

    cfg.out_path = "/tmp/dtm_runner_out.md";
    auto filed = run_cfg(cfg);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(cfg.out_path);
    std::stringstream body;
    body << f.rdbuf();
    CHECK(body.str() == direct.out);
    std::remove(cfg.out_path.c_str());
}

TEST_CASE("configuration mistakes exit with code 2") {
    CHECK(run_cfg(RunConfig{}).code == 2);  // no source

    RunConfig both = example_cfg(1);
    both.problem_path = "/tmp/nope.json";
    CHECK(run_cfg(both).code == 2);

    RunConfig bad_order = example_cfg(1);
    bad_order.orders = {0};
    CHECK(run_cfg(bad_order).code == 2);

    RunConfig bad_grid = example_cfg(1);
    bad_grid.grid_step = -0.1;
    CHECK(run_cfg(bad_grid).code == 2);

    RunConfig lam = example_cfg(1);
    lam.lambda_set = true;
    lam.lambda = 7.0;
    CHECK(run_cfg(lam).code == 2);

    RunConfig al = example_cfg(2);
    al.alpha = "9/10";
    CHECK(run_cfg(al).code == 2);

    RunConfig badal = example_cfg(5);
    badal.alpha = "3/2";
    CHECK(run_cfg(badal).code == 2);

    RunConfig missing;
    missing.problem_path = "/tmp/definitely_not_here.json";
    CHECK(run_cfg(missing).code == 2);
}

TEST_CASE("malformed problem files exit with code 3") {
    RunConfig cfg;
    cfg.problem_path = write_temp("dtm_bad.json", "{ not json");
    CHECK(run_cfg(cfg).code == 3);

    cfg.problem_path = write_temp("dtm_badfield.json", R"({"name": 3})");
    CHECK(run_cfg(cfg).code == 3);
}

TEST_CASE("unschedulable systems exit with code 4") {
    ProblemSpec s;
    s.name = "detached-constraint";
    s.order = 6;
    s.vars = {{"w1", false, 1, false, {1.0}}, {"a", true, 1, false, {}}};
    s.eqs = {{"w1", "w1"}};
    s.constraints = {"w1 - 1"};
    RunConfig cfg;
    cfg.problem_path = write_temp("dtm_plan.json", to_json(s).dump());
    auto c = run_cfg(cfg);
    CHECK(c.code == 4);
    CHECK_FALSE(c.err.empty());
}

TEST_CASE("numerical breakdowns exit with code 5") {
    ProblemSpec s;
    s.name = "division-by-zero-start";
    s.order = 6;
    s.vars = {{"w1", false, 1, false, {0.0}}};
    s.eqs = {{"w1", "1/w1"}};
    RunConfig cfg;
    cfg.problem_path = write_temp("dtm_numeric.json", to_json(s).dump());
    CHECK(run_cfg(cfg).code == 5);
}
