#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtm/series.hpp"

namespace dtm {

/// Fractional order p/q in lowest terms, 0 < p/q <= 1, q <= 10.
struct Rational {
    int p = 1;
    int q = 1;
};

/// Parses "p/q" or a decimal that matches one (denominator at most 10).
Rational parse_alpha(const std::string& text);
Rational parse_alpha(double value);

/// A state variable of the system. Differential variables carry a derivative
/// order (classical m >= 1, or the shared fractional alpha) plus one initial
/// series coefficient per classical order; algebraic variables carry at most
/// one entry, used as the corrector's starting guess.
struct Variable {
    std::string id;
    bool algebraic = false;
    int order = 1;
    bool fractional = false;
    std::vector<double> initial;
};

/// lhs_var's derivative (of the variable's declared order) equals rhs.
struct Equation {
    std::string lhs_var;
    std::string rhs;
};

/// Textual problem description; expressions are parsed and validated when a
/// solver is built, so the struct itself round-trips through JSON unchanged.
struct ProblemSpec {
    std::string name;
    std::string indep = "v";
    double origin = 0.0;
    int order = 10;
    Rational alpha{1, 1};
    std::vector<Variable> vars;
    std::vector<Equation> eqs;
    std::vector<std::string> constraints;
};

/// One algebraic variable tied to the constraint whose order-(k + shift)
/// residual first responds to that variable's coefficient k.
struct Binding {
    int constraint = -1;
    std::string alg_id;
    int shift = 0;
};

struct RecurrencePlan {
    std::vector<Binding> bindings;
    int max_shift = 0;
    std::vector<std::string> trace;
};

struct SolveOptions {
    int order = 0; ///< overrides ProblemSpec::order when positive
};

struct SolveReport {
    std::vector<std::string> var_order;
    std::map<std::string, TruncSeries> series;
    int order = 0;
    Rational alpha{1, 1};
    RecurrencePlan plan;
    std::vector<int> newton_iters;
    double max_newton_residual = 0.0;
    double wall_seconds = 0.0;
};

/// Probes constraint shifts without running the sweep.
RecurrencePlan plan(const ProblemSpec& spec);

/// Runs the order-by-order recurrence sweep and returns every variable's
/// truncated series on the problem grid.
SolveReport solve(const ProblemSpec& spec, const SolveOptions& opt = {});

/// Largest pointwise absolute constraint residual over the sample points
/// (0 when pts is empty).
double verify_constraints(const ProblemSpec& spec,
                          const std::map<std::string, TruncSeries>& series,
                          std::span<const double> pts);

ProblemSpec load_problem(const nlohmann::json& j);
ProblemSpec load_problem_file(const std::string& path);
nlohmann::json to_json(const ProblemSpec& spec);

} // namespace dtm
