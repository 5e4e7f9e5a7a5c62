#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtm/engine.hpp"
#include "dtm/problems.hpp"
#include "dtm/runner.hpp"

namespace {

bool parse_grid(const std::string& text, dtm::RunConfig& cfg) {
    double a, b, h;
    char tail;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &h, &tail) != 3) return false;
    cfg.grid_start = a;
    cfg.grid_stop = b;
    cfg.grid_step = h;
    cfg.custom_grid = true;
    return true;
}

int export_example(int n, const std::string& out_path) {
    try {
        auto j = dtm::to_json(dtm::get_example(n).spec);
        if (out_path.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream f(out_path);
            if (!f) {
                std::cerr << "configuration error: cannot open " << out_path << "\n";
                return 2;
            }
            f << j.dump(2) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential transform solver for differential-algebraic systems"};
    app.require_subcommand(1);

    dtm::RunConfig cfg;
    std::vector<int> orders;
    std::string grid_text;
    std::string format = "md";

    auto* solve = app.add_subcommand("solve", "Solve a problem and print value/error tables");
    auto* opt_example = solve->add_option("--example", cfg.example, "Built-in example number (1..5)");
    auto* opt_spec = solve->add_option("--spec", cfg.problem_path, "Path to a problem description JSON");
    opt_example->excludes(opt_spec);
    opt_spec->excludes(opt_example);
    solve->add_option("--order", orders, "Truncation order(s), comma separated")->delimiter(',');
    solve->add_option("--grid", grid_text, "Evaluation grid as start:stop:step");
    solve->add_option("--alpha", cfg.alpha, "Fractional derivative order p/q");
    auto* opt_lambda = solve->add_option("--lambda", cfg.lambda, "Coupling parameter (example 3 only)");
    solve->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    solve->add_option("--out", cfg.out_path, "Write the report to a file instead of stdout");
    solve->add_flag("--check-constraints", cfg.check_constraints,
                    "Report the largest constraint residual on the grid");

    int export_n = 0;
    std::string export_out;
    auto* exp = app.add_subcommand("export", "Write a built-in example as problem JSON");
    exp->add_option("--example", export_n, "Built-in example number (1..5)")->required();
    exp->add_option("--out", export_out, "Destination path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (exp->parsed()) return export_example(export_n, export_out);

    cfg.orders = orders;
    cfg.lambda_set = opt_lambda->count() > 0;
    if (!grid_text.empty() && !parse_grid(grid_text, cfg)) {
        std::cerr << "configuration error: --grid expects start:stop:step\n";
        return 2;
    }
    if (format == "csv")
        cfg.format = dtm::OutputFormat::Csv;
    else if (format == "json")
        cfg.format = dtm::OutputFormat::Json;

    return dtm::run(cfg, std::cout, std::cerr);
}
