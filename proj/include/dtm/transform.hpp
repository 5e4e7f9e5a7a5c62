#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dtm/bell.hpp"
#include "dtm/expr.hpp"
#include "dtm/series.hpp"

namespace dtm {

/// Expansion point and power grid shared by every series in one solve:
/// coefficients multiply (v - origin)^(k/denom).
struct GridContext {
    double origin = 0.0;
    int denom = 1;
};

/// Coefficients F(l) of the outer function expanded at center g0, l = 0..order:
///   exp: e^g0 / l!          ln:  ln g0, then (-1)^(l+1) / (l g0^l)
///   sin/cos: quarter-turn cycle / l!
///   powr r (and sqrt): binom(r, l) g0^(r-l), needs g0 > 0
/// Throws when the center violates the function domain or a coefficient
/// overflows.
std::vector<double> outer_coeffs(FnKind fn, double r, double g0, int order);

/// Series expansion of a state-free expression on the given grid.
TruncSeries expand_pure(const Expr& e, const GridContext& grid, int order);

/// Read-only window onto per-variable coefficient storage. coeffs is indexed
/// by state id position; avail[i] counts the entries of coeffs[i] that may be
/// read.
struct EnvView {
    const std::vector<std::vector<double>>* coeffs = nullptr;
    const std::vector<int>* avail = nullptr;
};

/// Compiled transformed-coefficient evaluator for one expression.
///
/// Compilation folds constants, expands state-free subtrees into cached
/// series once, rewrites integer powers into balanced Cauchy-product chains,
/// and tags every node with its valuation (index of the first structurally
/// nonzero coefficient). Valuations sharpen product demands: v^2 * w reads w
/// only up to k-2 when computing order k, which is exactly what makes
/// shifted-constraint systems schedulable.
///
/// Coefficients computed within one epoch are cached; bump the epoch whenever
/// the environment changes. Bell tables attached to function nodes survive
/// epochs and re-sync against the inner coefficients by prefix comparison, so
/// they extend incrementally as orders grow and roll back automatically when
/// an iteration revises a trailing coefficient.
class TransformEvaluator {
public:
    TransformEvaluator(ExprPtr e, std::vector<std::string> state_ids,
                       GridContext grid, int max_order);

    int max_order() const { return cap_; }
    const std::vector<std::string>& state_ids() const { return ids_; }

    /// Highest coefficient index of each state variable read when computing
    /// order k; -1 when the variable is not read at all.
    std::vector<int> demands(int k) const;

    double coeff(int k, const EnvView& env, std::uint64_t epoch);

private:
    struct Node {
        enum class Kind { Pure, State, Add, Sub, Neg, Mul, Div, Func } kind;
        int a = -1, b = -1;
        int var = -1;
        FnKind fn = FnKind::Exp;
        double fr = 0.0;
        int val = 0;
        TruncSeries pure;

        std::vector<double> c;
        int have = 0;

        BellTable bell;
        std::vector<double> inner_seen;
        std::vector<double> outer;
        double outer_g0 = 0.0;
        bool outer_set = false;
    };

    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<std::string> ids_;
    GridContext grid_;
    int cap_ = 0;
    std::uint64_t epoch_ = ~0ull;

    int compile(const ExprPtr& e);
    int compile_pow(int base, int n);
    void ensure(int idx, int upto, const EnvView& env);
};

/// One transformed coefficient of e at order k against a full-series
/// environment. Convenience wrapper over TransformEvaluator.
double transform_expr(const Expr& e, const std::map<std::string, TruncSeries>& env,
                      int k, GridContext grid = {});

/// Upper bound on the coefficient indices of each referenced variable that
/// transform_expr(e, ., k) reads.
std::map<std::string, int> dependency_profile(const Expr& e, int k, GridContext grid = {});

} // namespace dtm
