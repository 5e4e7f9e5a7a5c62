#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dtm {

enum class OutputFormat { Markdown, Csv, Json };

/// One reproduction run: which problem, at which orders, reported how.
struct RunConfig {
    int example = 0;           ///< built-in case 1..5; 0 when problem_path is set
    std::string problem_path;  ///< JSON problem description file

    std::vector<int> orders;  ///< empty: the problem's declared order

    double grid_start = 0.1;
    double grid_stop = 0.9;
    double grid_step = 0.1;
    bool custom_grid = false;  ///< suppresses the v = 1.0 extension rows

    std::string alpha;  ///< derivative-order override, "p/q" or decimal text
    double lambda = 15.0;
    bool lambda_set = false;

    OutputFormat format = OutputFormat::Markdown;
    std::string out_path;  ///< empty: write to the stream run() is given
    bool check_constraints = false;
};

/// Solves and emits the report to out (or cfg.out_path). Diagnostics and
/// wall times go to err so the report itself stays deterministic.
/// Returns a process exit code: 0 success, 2 configuration, 3 problem
/// description, 4 scheduling, 5 numerics.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace dtm
