#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace dtm {

enum class FnKind { Exp, Ln, Sin, Cos, Sqrt, Powr };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree over the independent variable, state references and the
/// closed-form function set. IntPow is a non-negative integer power; Powr
/// carries an arbitrary real exponent and requires a positive base.
struct Expr {
    enum class Kind { Const, IndepVar, StateRef, Add, Sub, Mul, Div, Neg, IntPow, Func };

    Kind kind;
    double value = 0.0;       // Const
    std::string name;         // StateRef
    ExprPtr a, b;             // children
    int ipow = 0;             // IntPow exponent
    FnKind fn = FnKind::Exp;  // Func
    double fr = 0.0;          // Powr exponent
};

ExprPtr make_const(double v);
ExprPtr make_indep();
ExprPtr make_state(std::string id);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_ipow(ExprPtr a, int n);
ExprPtr make_func(FnKind fn, ExprPtr a, double r = 0.0);

/// Structural equality (exact constant comparison).
bool equal(const Expr& x, const Expr& y);

/// Identifier resolution for parsing. With known_states unset any identifier
/// becomes a StateRef; when set, unknown identifiers are rejected.
struct ParseSymbols {
    std::string indep = "v";
    const std::set<std::string>* known_states = nullptr;
};

/// Recursive-descent parse. Throws ParseError with the byte offset of the
/// offending token. Precedence: ^ binds tighter than unary minus, which binds
/// tighter than * and /, which bind tighter than + and -.
ExprPtr parse_expr(std::string_view text, const ParseSymbols& sym = {});

/// Minimal-parenthesis rendering; parse_expr(to_string(e)) is structurally
/// equal to e.
std::string to_string(const Expr& e, const std::string& indep = "v");

/// Constant folding: arithmetic on literal operands, dropping zero products
/// and neutral elements. Pruning 0*e removes dead state references, which the
/// scheduler relies on when a parameter choice zeroes a coupling term.
ExprPtr fold_constants(const ExprPtr& e);

/// True when the expression references no state variable.
bool is_pure(const Expr& e);

void collect_states(const Expr& e, std::set<std::string>& out);

/// Pointwise evaluation with state values supplied by callback.
double eval_point(const Expr& e, double v,
                  const std::function<double(const std::string&)>& state);

/// Complex-plane evaluation of a pure expression (used by quadrature oracles).
std::complex<double> eval_point_complex(const Expr& e, std::complex<double> v);

} // namespace dtm
