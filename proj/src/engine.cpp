#include "dtm/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "dtm/errors.hpp"
#include "dtm/expr.hpp"
#include "dtm/gammafn.hpp"
#include "dtm/transform.hpp"

namespace dtm {

namespace {

const std::set<std::string> kReserved{"exp", "ln", "sin", "cos", "sqrt", "powr"};

bool valid_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Gaussian elimination with partial pivoting; solves J x = b for tiny n.
std::vector<double> solve_linear(std::vector<double> J, std::vector<double> b, int n,
                                 int order_for_msg) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(J[static_cast<std::size_t>(r) * n + col]) >
                std::fabs(J[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (std::fabs(J[static_cast<std::size_t>(piv) * n + col]) < 1e-300)
            throw NumericError("constraint corrector Jacobian is singular at order " +
                               std::to_string(order_for_msg));
        if (piv != col) {
            for (int c2 = 0; c2 < n; ++c2)
                std::swap(J[static_cast<std::size_t>(piv) * n + c2],
                          J[static_cast<std::size_t>(col) * n + c2]);
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = J[static_cast<std::size_t>(r) * n + col] /
                       J[static_cast<std::size_t>(col) * n + col];
            for (int c2 = col; c2 < n; ++c2)
                J[static_cast<std::size_t>(r) * n + c2] -=
                    f * J[static_cast<std::size_t>(col) * n + c2];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[static_cast<std::size_t>(r)];
        for (int c2 = r + 1; c2 < n; ++c2)
            acc -= J[static_cast<std::size_t>(r) * n + c2] * x[static_cast<std::size_t>(c2)];
        x[static_cast<std::size_t>(r)] = acc / J[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

struct CompiledVar {
    bool algebraic = false;
    bool fractional = false;
    int d = 0;       // grid-index shift of the lhs derivative (m*q, or p)
    int e = -1;      // integer derivative order when exact, else -1
    int eq = -1;     // equation index for differential variables
    int binding = -1;
    int shift = 0;
    double guess = 0.0;
};

class Solver {
public:
    Solver(const ProblemSpec& spec, int order_override) : spec_(spec) {
        N_ = order_override > 0 ? order_override : spec_.order;
        compile();
    }

    RecurrencePlan plan_only() {
        init_state();
        probe();
        return plan_;
    }

    SolveReport run();

private:
    const ProblemSpec& spec_;
    int N_ = 0;
    int p_ = 1, q_ = 1;
    GridContext grid_;
    int total_ = 0;
    int s_cap_ = 0;
    int alloc_ = 0;
    std::vector<std::string> ids_;
    std::vector<CompiledVar> cv_;
    std::vector<TransformEvaluator> eq_ev_;
    std::vector<TransformEvaluator> con_ev_;
    std::vector<std::vector<double>> coef_;
    std::vector<int> avail_;
    std::vector<int> committed_;
    EnvView env_{&coef_, &avail_};
    std::uint64_t epoch_ = 0;
    bool probing_ = false;
    RecurrencePlan plan_;
    std::vector<int> iters_;
    double max_resid_ = 0.0;

    void compile();
    void init_state();
    double factor(const CompiledVar& v, int j) const;
    void materialize(std::size_t vi, int t);
    void reset_avail() {
        for (std::size_t i = 0; i < avail_.size(); ++i) avail_[i] = committed_[i];
    }
    void commit_avail() {
        for (std::size_t i = 0; i < avail_.size(); ++i) committed_[i] = avail_[i];
    }
    void materialize_demands(int c, int k) {
        auto need = con_ev_[static_cast<std::size_t>(c)].demands(k);
        for (std::size_t u = 0; u < need.size(); ++u)
            if (need[u] >= 0) materialize(u, need[u]);
    }
    double probe_residual(int c, int k, std::size_t vi, double delta);
    void probe();
    double committed_eval(int c, int k);
    struct Active {
        int c;
        std::size_t vi;
        int idx;
    };
    void newton_solve(int k, const std::vector<Active>& act);
};

void Solver::compile() {
    if (N_ < 1) throw SchemaError("series order must be at least 1");
    p_ = spec_.alpha.p;
    q_ = spec_.alpha.q;
    if (p_ < 1 || q_ < 1) throw SchemaError("alpha must be positive");
    int g = std::gcd(p_, q_);
    p_ /= g;
    q_ /= g;
    if (p_ > q_) throw SchemaError("alpha must lie in (0, 1]");
    if (q_ > 10) throw SchemaError("alpha denominator must not exceed 10");
    if (!valid_ident(spec_.indep) || kReserved.count(spec_.indep))
        throw SchemaError("invalid independent variable name '" + spec_.indep + "'");
    if (spec_.vars.empty()) throw SchemaError("problem declares no variables");

    grid_ = {spec_.origin, q_};
    total_ = N_ * q_;

    std::set<std::string> seen;
    int n_diff = 0, n_alg = 0, max_m = 1, max_d = 0;
    for (const Variable& v : spec_.vars) {
        if (!valid_ident(v.id) || kReserved.count(v.id) || v.id == spec_.indep)
            throw SchemaError("invalid variable name '" + v.id + "'");
        if (!seen.insert(v.id).second)
            throw SchemaError("duplicate variable name '" + v.id + "'");
        CompiledVar c;
        c.algebraic = v.algebraic;
        c.fractional = v.fractional;
        if (v.algebraic) {
            if (v.fractional)
                throw SchemaError("algebraic variable '" + v.id + "' cannot be fractional");
            if (v.initial.size() > 1)
                throw SchemaError("algebraic variable '" + v.id + "' takes at most one guess");
            c.guess = v.initial.empty() ? 0.0 : v.initial[0];
            ++n_alg;
        } else if (v.fractional) {
            if (v.initial.size() != 1)
                throw SchemaError("fractional variable '" + v.id + "' needs exactly one initial value");
            c.d = p_;
            c.e = p_ % q_ == 0 ? p_ / q_ : -1;
            ++n_diff;
        } else {
            if (v.order < 1)
                throw SchemaError("variable '" + v.id + "' has derivative order below 1");
            if (static_cast<int>(v.initial.size()) != v.order)
                throw SchemaError("variable '" + v.id + "' needs " + std::to_string(v.order) +
                                  " initial values");
            c.d = v.order * q_;
            c.e = v.order;
            max_m = std::max(max_m, v.order);
            ++n_diff;
        }
        max_d = std::max(max_d, c.d);
        ids_.push_back(v.id);
        cv_.push_back(c);
    }

    if (static_cast<int>(spec_.eqs.size()) != n_diff)
        throw SchemaError("need exactly one equation per differential variable");
    if (static_cast<int>(spec_.constraints.size()) != n_alg)
        throw SchemaError("need exactly one constraint per algebraic variable");

    s_cap_ = (2 * max_m + 2) * q_;
    alloc_ = total_ + s_cap_ + max_d + 2;

    std::set<std::string> known(ids_.begin(), ids_.end());
    ParseSymbols sym{spec_.indep, &known};

    std::vector<int> eq_of(ids_.size(), -1);
    for (std::size_t e = 0; e < spec_.eqs.size(); ++e) {
        const Equation& eq = spec_.eqs[e];
        auto it = std::find(ids_.begin(), ids_.end(), eq.lhs_var);
        if (it == ids_.end())
            throw SchemaError("equation for unknown variable '" + eq.lhs_var + "'");
        std::size_t vi = static_cast<std::size_t>(it - ids_.begin());
        if (cv_[vi].algebraic)
            throw SchemaError("algebraic variable '" + eq.lhs_var + "' cannot own an equation");
        if (eq_of[vi] >= 0)
            throw SchemaError("variable '" + eq.lhs_var + "' has two equations");
        eq_of[vi] = static_cast<int>(e);
        cv_[vi].eq = static_cast<int>(e);
        eq_ev_.emplace_back(parse_expr(eq.rhs, sym), ids_, grid_, alloc_ - 1);
    }
    for (const std::string& text : spec_.constraints)
        con_ev_.emplace_back(parse_expr(text, sym), ids_, grid_, alloc_ - 1);
}

void Solver::init_state() {
    coef_.assign(ids_.size(), std::vector<double>(static_cast<std::size_t>(alloc_), 0.0));
    committed_.assign(ids_.size(), 0);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const CompiledVar& c = cv_[i];
        if (c.algebraic) continue;
        const Variable& v = spec_.vars[i];
        if (c.fractional) {
            coef_[i][0] = v.initial[0];
        } else {
            for (int t = 0; t < v.order; ++t)
                coef_[i][static_cast<std::size_t>(t) * q_] = v.initial[static_cast<std::size_t>(t)];
        }
        committed_[i] = c.d;
    }
    avail_ = committed_;
    epoch_ = 0;
    plan_ = {};
    iters_.clear();
    max_resid_ = 0.0;
}

double Solver::factor(const CompiledVar& v, int j) const {
    if (v.e >= 0) {
        double f = 1.0;
        for (int t = 1; t <= v.e; ++t) f *= static_cast<double>(j + t * q_) / q_;
        return 1.0 / f;
    }
    return lanczos_gamma(1.0 + j / static_cast<double>(q_)) /
           lanczos_gamma(1.0 + (j + v.d) / static_cast<double>(q_));
}

void Solver::materialize(std::size_t vi, int t) {
    if (avail_[vi] > t) return;
    const CompiledVar& V = cv_[vi];
    if (V.algebraic) {
        if (probing_) return;
        throw PlanningError("coefficient " + ids_[vi] + "[" + std::to_string(t) +
                            "] is not determined by any constraint yet");
    }
    if (t >= alloc_)
        throw PlanningError("coefficient " + ids_[vi] + "[" + std::to_string(t) +
                            "] exceeds the planned storage");
    TransformEvaluator& ev = eq_ev_[static_cast<std::size_t>(V.eq)];
    for (int idx = avail_[vi]; idx <= t; ++idx) {
        const int j = idx - V.d;
        auto need = ev.demands(j);
        for (std::size_t u = 0; u < need.size(); ++u)
            if (need[u] >= 0) materialize(u, need[u]);
        coef_[vi][static_cast<std::size_t>(idx)] = ev.coeff(j, env_, epoch_) * factor(V, j);
        avail_[vi] = idx + 1;
    }
}

double Solver::probe_residual(int c, int k, std::size_t vi, double delta) {
    ++epoch_;
    reset_avail();
    for (std::size_t b = 0; b < ids_.size(); ++b) {
        if (!cv_[b].algebraic) continue;
        std::fill(coef_[b].begin(), coef_[b].end(), 0.0);
        coef_[b][0] = cv_[b].guess + (b == vi ? delta : 0.0);
        avail_[b] = alloc_;
    }
    materialize_demands(c, k);
    return con_ev_[static_cast<std::size_t>(c)].coeff(k, env_, epoch_);
}

void Solver::probe() {
    probing_ = true;
    std::vector<bool> bound_con(con_ev_.size(), false);
    for (std::size_t vi = 0; vi < ids_.size(); ++vi) {
        if (!cv_[vi].algebraic) continue;
        bool bound = false;
        for (int s_try = 0; s_try <= s_cap_ && !bound; ++s_try) {
            for (std::size_t c = 0; c < con_ev_.size() && !bound; ++c) {
                if (bound_con[c]) continue;
                const double base = probe_residual(static_cast<int>(c), s_try, vi, 0.0);
                const double bump = probe_residual(static_cast<int>(c), s_try, vi, 1.0);
                if (std::fabs(bump - base) > 1e-9 * (1.0 + std::fabs(base))) {
                    cv_[vi].binding = static_cast<int>(c);
                    cv_[vi].shift = s_try;
                    bound_con[c] = true;
                    plan_.bindings.push_back({static_cast<int>(c), ids_[vi], s_try});
                    plan_.trace.push_back("bind " + ids_[vi] + " <- constraint " +
                                          std::to_string(c) + " with shift " +
                                          std::to_string(s_try));
                    plan_.max_shift = std::max(plan_.max_shift, s_try);
                    bound = true;
                }
            }
        }
        if (!bound)
            throw PlanningError("no finite shift found for algebraic variable '" + ids_[vi] +
                                "' within " + std::to_string(s_cap_) + " orders");
    }
    probing_ = false;
    reset_avail();
    for (std::size_t b = 0; b < ids_.size(); ++b)
        if (cv_[b].algebraic) std::fill(coef_[b].begin(), coef_[b].end(), 0.0);
}

double Solver::committed_eval(int c, int k) {
    ++epoch_;
    reset_avail();
    materialize_demands(c, k);
    const double r = con_ev_[static_cast<std::size_t>(c)].coeff(k, env_, epoch_);
    commit_avail();
    return r;
}

void Solver::newton_solve(int k, const std::vector<Active>& act) {
    const int n = static_cast<int>(act.size());
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Active& a = act[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(i)] =
            a.idx == 0 ? cv_[a.vi].guess : coef_[a.vi][static_cast<std::size_t>(a.idx) - 1];
    }
    auto residual = [&](const std::vector<double>& xv, std::vector<double>& r) {
        ++epoch_;
        reset_avail();
        for (int i = 0; i < n; ++i) {
            const Active& a = act[static_cast<std::size_t>(i)];
            coef_[a.vi][static_cast<std::size_t>(a.idx)] = xv[static_cast<std::size_t>(i)];
            avail_[a.vi] = a.idx + 1;
        }
        for (int i = 0; i < n; ++i) {
            materialize_demands(act[static_cast<std::size_t>(i)].c, k);
            r[static_cast<std::size_t>(i)] =
                con_ev_[static_cast<std::size_t>(act[static_cast<std::size_t>(i)].c)].coeff(
                    k, env_, epoch_);
        }
    };
    auto tol = [&](const std::vector<double>& xv) { return 1e-14 * std::max(1.0, inf_norm(xv)); };

    std::vector<double> r(static_cast<std::size_t>(n)), rt(static_cast<std::size_t>(n)),
        xt(static_cast<std::size_t>(n));
    residual(x, r);
    double rn = inf_norm(r);
    int it = 0;
    while (rn > tol(x) && it < 50) {
        ++it;
        std::vector<double> J(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::fabs(x[static_cast<std::size_t>(j)]));
            xt = x;
            xt[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + h;
            residual(xt, rt);
            std::vector<double> rp = rt;
            xt[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - h;
            residual(xt, rt);
            for (int i = 0; i < n; ++i)
                J[static_cast<std::size_t>(i) * n + j] =
                    (rp[static_cast<std::size_t>(i)] - rt[static_cast<std::size_t>(i)]) / (2 * h);
        }
        std::vector<double> step = solve_linear(J, r, n, k);
        double lam = 1.0;
        bool accepted = false;
        for (int half = 0; half <= 30; ++half) {
            for (int i = 0; i < n; ++i)
                xt[static_cast<std::size_t>(i)] =
                    x[static_cast<std::size_t>(i)] - lam * step[static_cast<std::size_t>(i)];
            residual(xt, rt);
            const double rtn = inf_norm(rt);
            if (rtn < rn || rtn <= tol(xt)) {
                x = xt;
                r = rt;
                rn = rtn;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) break;
    }
    if (rn > tol(x))
        throw NumericError("constraint corrector failed to converge at order " +
                           std::to_string(k) + " (residual " + fmt_g(rn) + ")");
    commit_avail();
    if (k < static_cast<int>(iters_.size())) iters_[static_cast<std::size_t>(k)] = it;
    max_resid_ = std::max(max_resid_, rn);
}

SolveReport Solver::run() {
    const auto t0 = std::chrono::steady_clock::now();
    init_state();
    probe();

    const int kmax = total_ + plan_.max_shift;
    iters_.assign(static_cast<std::size_t>(kmax) + 1, 0);
    for (int k = 0; k <= kmax; ++k) {
        std::vector<Active> act;
        for (std::size_t vi = 0; vi < ids_.size(); ++vi) {
            const CompiledVar& V = cv_[vi];
            if (!V.algebraic) continue;
            const int idx = k - V.shift;
            if (idx >= 0 && idx <= total_) act.push_back({V.binding, vi, idx});
        }
        if (!act.empty()) newton_solve(k, act);
        for (std::size_t vi = 0; vi < ids_.size(); ++vi) {
            const CompiledVar& V = cv_[vi];
            if (!V.algebraic || k >= V.shift) continue;
            const double r = committed_eval(V.binding, k);
            if (std::fabs(r) > 1e-8)
                throw NumericError("initial data violate constraint " +
                                   std::to_string(V.binding) + " at order " + std::to_string(k) +
                                   " (residual " + fmt_g(r) + ")");
        }
    }

    ++epoch_;
    reset_avail();
    for (std::size_t vi = 0; vi < ids_.size(); ++vi)
        if (!cv_[vi].algebraic) materialize(vi, total_);
    commit_avail();

    SolveReport rep;
    rep.var_order = ids_;
    rep.order = N_;
    rep.alpha = {p_, q_};
    rep.plan = plan_;
    rep.newton_iters = iters_;
    rep.max_newton_residual = max_resid_;
    for (std::size_t vi = 0; vi < ids_.size(); ++vi) {
        std::vector<double> c(coef_[vi].begin(), coef_[vi].begin() + total_ + 1);
        rep.series.emplace(ids_[vi], TruncSeries(std::move(c), grid_.origin, grid_.denom));
    }
    const auto t1 = std::chrono::steady_clock::now();
    rep.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

} // namespace

Rational parse_alpha(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        int p = 0, q = 0;
        try {
            std::size_t used = 0;
            p = std::stoi(text.substr(0, slash), &used);
            if (used != slash) throw SchemaError("bad alpha numerator in '" + text + "'");
            const std::string den = text.substr(slash + 1);
            q = std::stoi(den, &used);
            if (used != den.size()) throw SchemaError("bad alpha denominator in '" + text + "'");
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception&) {
            throw SchemaError("alpha '" + text + "' is not a fraction p/q");
        }
        if (p < 1 || q < 1) throw SchemaError("alpha must be positive");
        const int g = std::gcd(p, q);
        p /= g;
        q /= g;
        if (p > q) throw SchemaError("alpha must lie in (0, 1]");
        if (q > 10) throw SchemaError("alpha denominator must not exceed 10");
        return {p, q};
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw SchemaError("alpha '" + text + "' is not a number");
        return parse_alpha(v);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError("alpha '" + text + "' is not a number");
    }
}

Rational parse_alpha(double value) {
    for (int q = 1; q <= 10; ++q) {
        const int p = static_cast<int>(std::llround(value * q));
        if (p >= 1 && std::fabs(value - static_cast<double>(p) / q) <= 1e-9) {
            if (p > q) throw SchemaError("alpha must lie in (0, 1]");
            const int g = std::gcd(p, q);
            return {p / g, q / g};
        }
    }
    throw SchemaError("alpha " + fmt_g(value) + " is not a fraction p/q with q <= 10");
}

RecurrencePlan plan(const ProblemSpec& spec) { return Solver(spec, 0).plan_only(); }

SolveReport solve(const ProblemSpec& spec, const SolveOptions& opt) {
    return Solver(spec, opt.order).run();
}

double verify_constraints(const ProblemSpec& spec,
                          const std::map<std::string, TruncSeries>& series,
                          std::span<const double> pts) {
    if (pts.empty()) return 0.0;
    std::set<std::string> known;
    for (const Variable& v : spec.vars) known.insert(v.id);
    ParseSymbols sym{spec.indep, &known};
    double worst = 0.0;
    for (const std::string& text : spec.constraints) {
        ExprPtr c = parse_expr(text, sym);
        for (double v : pts) {
            const double r = eval_point(*c, v, [&](const std::string& id) {
                auto it = series.find(id);
                if (it == series.end())
                    throw ConfigError("no series supplied for variable '" + id + "'");
                return evaluate(it->second, v);
            });
            worst = std::max(worst, std::fabs(r));
        }
    }
    return worst;
}

ProblemSpec load_problem(const nlohmann::json& j) {
    ProblemSpec s;
    try {
        s.name = j.value("name", "");
        s.indep = j.value("indep_var", "v");
        s.origin = j.value("expansion_point", 0.0);
        s.order = j.value("order", 10);
        if (j.contains("alpha")) {
            const auto& a = j.at("alpha");
            if (a.is_string())
                s.alpha = parse_alpha(a.get<std::string>());
            else if (a.is_number())
                s.alpha = parse_alpha(a.get<double>());
            else
                throw SchemaError("alpha must be a string \"p/q\" or a number");
        }
        if (!j.contains("variables")) throw SchemaError("problem lacks a variables array");
        for (const auto& vj : j.at("variables")) {
            Variable v;
            v.id = vj.at("id").get<std::string>();
            const std::string kind = vj.at("kind").get<std::string>();
            if (kind == "algebraic")
                v.algebraic = true;
            else if (kind != "differential")
                throw SchemaError("variable '" + v.id +
                                  "' kind must be differential or algebraic");
            if (vj.contains("deriv_order")) {
                const auto& d = vj.at("deriv_order");
                if (d.is_string()) {
                    if (d.get<std::string>() != "alpha")
                        throw SchemaError("deriv_order must be an integer or \"alpha\"");
                    v.fractional = true;
                } else {
                    v.order = d.get<int>();
                }
            }
            if (vj.contains("initial")) v.initial = vj.at("initial").get<std::vector<double>>();
            s.vars.push_back(std::move(v));
        }
        for (const auto& ej : j.value("equations", nlohmann::json::array()))
            s.eqs.push_back({ej.at("var").get<std::string>(), ej.at("rhs").get<std::string>()});
        if (j.contains("constraints"))
            s.constraints = j.at("constraints").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("malformed problem description: ") + ex.what());
    }
    return s;
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open problem file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw SchemaError(std::string("invalid JSON in '") + path + "': " + ex.what());
    }
    return load_problem(j);
}

nlohmann::json to_json(const ProblemSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["indep_var"] = spec.indep;
    j["expansion_point"] = spec.origin;
    j["order"] = spec.order;
    j["alpha"] = std::to_string(spec.alpha.p) + "/" + std::to_string(spec.alpha.q);
    j["variables"] = nlohmann::json::array();
    for (const Variable& v : spec.vars) {
        nlohmann::json vj;
        vj["id"] = v.id;
        vj["kind"] = v.algebraic ? "algebraic" : "differential";
        if (v.fractional)
            vj["deriv_order"] = "alpha";
        else if (!v.algebraic)
            vj["deriv_order"] = v.order;
        vj["initial"] = v.initial;
        j["variables"].push_back(std::move(vj));
    }
    j["equations"] = nlohmann::json::array();
    for (const Equation& e : spec.eqs) j["equations"].push_back({{"var", e.lhs_var}, {"rhs", e.rhs}});
    j["constraints"] = spec.constraints;
    return j;
}

} // namespace dtm
