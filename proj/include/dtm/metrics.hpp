#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtm/series.hpp"

namespace dtm {

/// Closed-form reference solution evaluated pointwise.
using ExactFn = std::function<double(double)>;

/// |exact(v) - approx(v)|.
double absolute_error(const ExactFn& exact, const TruncSeries& approx, double v);

/// Absolute error divided by |exact(v)|; empty when exact(v) == 0,
/// in which case only the absolute error is meaningful.
std::optional<double> relative_error(const ExactFn& exact, const TruncSeries& approx, double v);

/// Maximum absolute error over an explicit, non-empty grid.
/// Throws ConfigError on an empty grid.
double max_error(const ExactFn& exact, const TruncSeries& approx, std::span<const double> grid);

/// The default comparison grid 0.1, 0.2, ..., 0.9.
std::vector<double> default_grid();

/// One tabulated comparison point.
struct ErrorRow {
    double v = 0.0;
    double exact = 0.0;
    double approx = 0.0;
    double abs_err = 0.0;
    std::optional<double> rel_err;
};

/// Per-variable error table plus the grid maximum.
/// max_abs ranges over the base grid only; rows may additionally
/// include v = 1.0 when the reference solution is finite there.
struct VariableErrors {
    std::string id;
    std::vector<ErrorRow> rows;
    double max_abs = 0.0;
};

struct ErrorReport {
    std::vector<double> grid;
    std::vector<VariableErrors> vars;
};

/// Tabulates errors for every listed variable that has both a computed
/// series and a reference solution, in the listed order. extend_to_one
/// turns the v = 1.0 row on (subject to the finiteness rule above).
ErrorReport build_error_report(const std::vector<std::string>& var_order,
                               const std::map<std::string, ExactFn>& exact,
                               const std::map<std::string, TruncSeries>& series,
                               std::span<const double> base_grid,
                               bool extend_to_one = true);

/// Grid maxima for a sequence of runs of increasing order, e.g. to
/// confirm that refinement does not make things worse.
std::vector<double> convergence_trend(const ExactFn& exact,
                                      const std::vector<TruncSeries>& runs,
                                      std::span<const double> grid);

} // namespace dtm
