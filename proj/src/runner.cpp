#include "dtm/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtm/engine.hpp"
#include "dtm/errors.hpp"
#include "dtm/metrics.hpp"
#include "dtm/problems.hpp"

namespace dtm {

namespace {

std::string fmt_sig(double x, int sig) {
    char b[48];
    std::snprintf(b, sizeof b, "%.*g", sig, x);
    return b;
}

std::string fmt_err(double e) {
    if (e == 0.0) return "0";
    char b[32];
    std::snprintf(b, sizeof b, "%.1E", e);
    return b;
}

struct RunData {
    int order = 0;
    SolveReport rep;
    ErrorReport errors;  // only for variables with a reference solution
    double residual = 0.0;
    bool has_residual = false;
};

struct Prepared {
    ProblemSpec base;
    std::map<std::string, ExactFn> exact;
    std::vector<double> grid;
    std::vector<RunData> runs;
};

void validate(const RunConfig& cfg) {
    if ((cfg.example != 0) == !cfg.problem_path.empty())
        throw ConfigError("pick exactly one problem source: a built-in example or a file");
    if (cfg.example != 0 && (cfg.example < 1 || cfg.example > 5))
        throw ConfigError("example number must be 1..5");
    for (int n : cfg.orders)
        if (n < 1) throw ConfigError("orders must be at least 1");
    if (!(cfg.grid_step > 0.0)) throw ConfigError("grid step must be positive");
    if (cfg.grid_stop < cfg.grid_start) throw ConfigError("grid stop must not precede start");
    if (cfg.lambda_set && cfg.example != 3)
        throw ConfigError("--lambda only applies to example 3");
}

std::vector<double> make_grid(const RunConfig& cfg) {
    const int count =
        static_cast<int>(std::floor((cfg.grid_stop - cfg.grid_start) / cfg.grid_step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = cfg.grid_start + i * cfg.grid_step;
    return g;
}

Prepared prepare(const RunConfig& cfg, std::ostream& err) {
    Prepared p;
    if (cfg.example != 0) {
        ExampleCase c = get_example(cfg.example, cfg.lambda);
        p.base = c.spec;
        p.exact = c.exact;
    } else {
        p.base = load_problem_file(cfg.problem_path);
    }

    if (!cfg.alpha.empty()) {
        bool fractional = false;
        for (const Variable& v : p.base.vars) fractional = fractional || v.fractional;
        if (!fractional)
            throw ConfigError("--alpha needs a problem with a fractional-order variable");
        Rational a;
        try {
            a = parse_alpha(cfg.alpha);
        } catch (const SchemaError& e) {
            throw ConfigError(e.what());
        }
        p.base.alpha = a;
        // the stored closed forms describe the classical order only
        if (a.p != a.q) p.exact.clear();
    }

    p.grid = make_grid(cfg);
    std::vector<int> orders = cfg.orders.empty() ? std::vector<int>{p.base.order} : cfg.orders;

    for (int n : orders) {
        RunData rd;
        rd.order = n;
        p.base.order = n;
        rd.rep = solve(p.base);
        char line[96];
        std::snprintf(line, sizeof line, "order %d solved in %.3f ms\n", n,
                      rd.rep.wall_seconds * 1e3);
        err << line;
        if (!p.exact.empty())
            rd.errors = build_error_report(rd.rep.var_order, p.exact, rd.rep.series, p.grid,
                                           !cfg.custom_grid);
        if (cfg.check_constraints) {
            rd.residual = verify_constraints(p.base, rd.rep.series, p.grid);
            rd.has_residual = true;
        }
        p.runs.push_back(std::move(rd));
    }
    return p;
}

const VariableErrors* find_errors(const RunData& rd, const std::string& id) {
    for (const VariableErrors& ve : rd.errors.vars)
        if (ve.id == id) return &ve;
    return nullptr;
}

void emit_markdown(std::ostream& out, const Prepared& p) {
    out << "# " << p.base.name << "\n";
    for (const RunData& rd : p.runs) {
        out << "\n## Order N = " << rd.order << "\n";
        for (const std::string& id : rd.rep.var_order) {
            out << "\n### " << id << "\n\n";
            if (const VariableErrors* ve = find_errors(rd, id)) {
                out << "| v | exact | approx | abs err | rel err |\n";
                out << "|---|---|---|---|---|\n";
                for (const ErrorRow& r : ve->rows) {
                    out << "| " << fmt_sig(r.v, 10) << " | " << fmt_sig(r.exact, 10) << " | "
                        << fmt_sig(r.approx, 10) << " | " << fmt_err(r.abs_err) << " | "
                        << (r.rel_err ? fmt_err(*r.rel_err) : "-") << " |\n";
                }
            } else {
                out << "| v | approx |\n";
                out << "|---|---|\n";
                const auto vals = evaluate_grid(rd.rep.series.at(id), p.grid);
                for (std::size_t i = 0; i < p.grid.size(); ++i)
                    out << "| " << fmt_sig(p.grid[i], 10) << " | " << fmt_sig(vals[i], 10)
                        << " |\n";
            }
        }
        if (rd.has_residual)
            out << "\nMax constraint residual on the grid: " << fmt_err(rd.residual) << "\n";
    }
    if (!p.runs.empty() && !p.runs.front().errors.vars.empty()) {
        out << "\n## Maximum absolute error\n\n| N |";
        for (const VariableErrors& ve : p.runs.front().errors.vars) out << " " << ve.id << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < p.runs.front().errors.vars.size(); ++i) out << "---|";
        out << "\n";
        for (const RunData& rd : p.runs) {
            out << "| " << rd.order << " |";
            for (const VariableErrors& ve : rd.errors.vars) out << " " << fmt_err(ve.max_abs) << " |";
            out << "\n";
        }
    }
}

void emit_csv(std::ostream& out, const Prepared& p) {
    out << "kind,order,variable,v,exact,approx,abs_err,rel_err\n";
    for (const RunData& rd : p.runs) {
        for (const std::string& id : rd.rep.var_order) {
            if (const VariableErrors* ve = find_errors(rd, id)) {
                for (const ErrorRow& r : ve->rows) {
                    out << "point," << rd.order << "," << id << "," << fmt_sig(r.v, 17) << ","
                        << fmt_sig(r.exact, 17) << "," << fmt_sig(r.approx, 17) << ","
                        << fmt_sig(r.abs_err, 17) << ","
                        << (r.rel_err ? fmt_sig(*r.rel_err, 17) : "") << "\n";
                }
                out << "max_error," << rd.order << "," << id << ",,,,"
                    << fmt_sig(ve->max_abs, 17) << ",\n";
            } else {
                const auto vals = evaluate_grid(rd.rep.series.at(id), p.grid);
                for (std::size_t i = 0; i < p.grid.size(); ++i)
                    out << "point," << rd.order << "," << id << "," << fmt_sig(p.grid[i], 17)
                        << ",," << fmt_sig(vals[i], 17) << ",,\n";
            }
        }
        if (rd.has_residual)
            out << "constraint_residual," << rd.order << ",,,,," << fmt_sig(rd.residual, 17)
                << ",\n";
    }
}

void emit_json(std::ostream& out, const Prepared& p) {
    nlohmann::json j;
    j["problem"] = p.base.name;
    j["alpha"] = std::to_string(p.base.alpha.p) + "/" + std::to_string(p.base.alpha.q);
    j["grid"] = p.grid;
    j["runs"] = nlohmann::json::array();
    for (const RunData& rd : p.runs) {
        nlohmann::json rj;
        rj["order"] = rd.order;
        rj["variables"] = nlohmann::json::array();
        for (const std::string& id : rd.rep.var_order) {
            nlohmann::json vj;
            vj["id"] = id;
            vj["points"] = nlohmann::json::array();
            if (const VariableErrors* ve = find_errors(rd, id)) {
                for (const ErrorRow& r : ve->rows) {
                    nlohmann::json pt{{"v", r.v},
                                      {"exact", r.exact},
                                      {"approx", r.approx},
                                      {"abs_err", r.abs_err}};
                    if (r.rel_err) pt["rel_err"] = *r.rel_err;
                    vj["points"].push_back(std::move(pt));
                }
                vj["max_error"] = ve->max_abs;
            } else {
                const auto vals = evaluate_grid(rd.rep.series.at(id), p.grid);
                for (std::size_t i = 0; i < p.grid.size(); ++i)
                    vj["points"].push_back({{"v", p.grid[i]}, {"approx", vals[i]}});
            }
            rj["variables"].push_back(std::move(vj));
        }
        if (rd.has_residual) rj["constraint_residual"] = rd.residual;
        j["runs"].push_back(std::move(rj));
    }
    out << j.dump(2) << "\n";
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        Prepared p = prepare(cfg, err);

        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path);
            if (!file) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
            sink = &file;
        }
        switch (cfg.format) {
            case OutputFormat::Markdown: emit_markdown(*sink, p); break;
            case OutputFormat::Csv: emit_csv(*sink, p); break;
            case OutputFormat::Json: emit_json(*sink, p); break;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        err << "problem description error: " << e.what() << "\n";
        return 3;
    } catch (const PlanningError& e) {
        err << "scheduling error: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 5;
    }
}

} // namespace dtm
