#include "dtm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dtm/errors.hpp"

namespace dtm {

double absolute_error(const ExactFn& exact, const TruncSeries& approx, double v) {
    return std::fabs(exact(v) - evaluate(approx, v));
}

std::optional<double> relative_error(const ExactFn& exact, const TruncSeries& approx, double v) {
    const double w = exact(v);
    if (w == 0.0) return std::nullopt;
    return std::fabs(w - evaluate(approx, v)) / std::fabs(w);
}

double max_error(const ExactFn& exact, const TruncSeries& approx, std::span<const double> grid) {
    if (grid.empty()) throw ConfigError("max_error needs a non-empty grid");
    const std::vector<double> vals = evaluate_grid(approx, grid);
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        m = std::max(m, std::fabs(exact(grid[i]) - vals[i]));
    return m;
}

std::vector<double> default_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

namespace {

bool finite_at(const ExactFn& exact, double v) {
    try {
        return std::isfinite(exact(v));
    } catch (...) {
        return false;
    }
}

ErrorRow make_row(const ExactFn& exact, const TruncSeries& s, double v) {
    ErrorRow r;
    r.v = v;
    r.exact = exact(v);
    r.approx = evaluate(s, v);
    r.abs_err = std::fabs(r.exact - r.approx);
    if (r.exact != 0.0) r.rel_err = r.abs_err / std::fabs(r.exact);
    return r;
}

} // namespace

ErrorReport build_error_report(const std::vector<std::string>& var_order,
                               const std::map<std::string, ExactFn>& exact,
                               const std::map<std::string, TruncSeries>& series,
                               std::span<const double> base_grid,
                               bool extend_to_one) {
    if (base_grid.empty()) throw ConfigError("error report needs a non-empty grid");
    ErrorReport rep;
    rep.grid.assign(base_grid.begin(), base_grid.end());
    for (const std::string& id : var_order) {
        auto ef = exact.find(id);
        auto sf = series.find(id);
        if (ef == exact.end() || sf == series.end()) continue;
        VariableErrors ve;
        ve.id = id;
        for (double v : base_grid) ve.rows.push_back(make_row(ef->second, sf->second, v));
        for (const ErrorRow& r : ve.rows) ve.max_abs = std::max(ve.max_abs, r.abs_err);
        const bool has_one =
            std::any_of(base_grid.begin(), base_grid.end(), [](double v) { return v == 1.0; });
        if (extend_to_one && !has_one && finite_at(ef->second, 1.0))
            ve.rows.push_back(make_row(ef->second, sf->second, 1.0));
        rep.vars.push_back(std::move(ve));
    }
    return rep;
}

std::vector<double> convergence_trend(const ExactFn& exact,
                                      const std::vector<TruncSeries>& runs,
                                      std::span<const double> grid) {
    std::vector<double> out;
    out.reserve(runs.size());
    for (const TruncSeries& s : runs) out.push_back(max_error(exact, s, grid));
    return out;
}

} // namespace dtm
