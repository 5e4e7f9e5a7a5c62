#include "dtm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>

#include "dtm/errors.hpp"

namespace dtm {

namespace {

void check_finite(const std::vector<double>& f, const char* what) {
    for (double x : f)
        if (!std::isfinite(x)) throw NumericError(std::string(what) + " coefficient overflowed");
}

TruncSeries series_ipow(const TruncSeries& s, int n, const GridContext& grid, int order) {
    std::vector<double> one(static_cast<std::size_t>(order) + 1, 0.0);
    one[0] = 1.0;
    TruncSeries res(std::move(one), grid.origin, grid.denom);
    if (n == 0) return res;
    TruncSeries base = s;
    while (n > 0) {
        if (n & 1) res = cauchy_product(res, base);
        n >>= 1;
        if (n > 0) base = cauchy_product(base, base);
    }
    return res;
}

} // namespace

std::vector<double> outer_coeffs(FnKind fn, double r, double g0, int order) {
    if (order < 0) throw ConfigError("outer expansion order must be non-negative");
    std::vector<double> f(static_cast<std::size_t>(order) + 1, 0.0);
    switch (fn) {
    case FnKind::Exp:
        f[0] = std::exp(g0);
        for (int l = 1; l <= order; ++l) f[l] = f[l - 1] / l;
        break;
    case FnKind::Ln: {
        if (g0 <= 0.0) throw NumericError("ln expanded at a non-positive center");
        f[0] = std::log(g0);
        double p = 1.0, sign = 1.0;
        for (int l = 1; l <= order; ++l) {
            p *= g0;
            f[l] = sign / (l * p);
            sign = -sign;
        }
        break;
    }
    case FnKind::Sin:
    case FnKind::Cos: {
        const double s = std::sin(g0), c = std::cos(g0);
        // l-th derivative cycles through a quarter-turn pattern
        const double cyc[4] = {fn == FnKind::Sin ? s : c, fn == FnKind::Sin ? c : -s,
                               fn == FnKind::Sin ? -s : -c, fn == FnKind::Sin ? -c : s};
        double invfact = 1.0;
        f[0] = cyc[0];
        for (int l = 1; l <= order; ++l) {
            invfact /= l;
            f[l] = cyc[l % 4] * invfact;
        }
        break;
    }
    case FnKind::Sqrt:
        r = 0.5;
        [[fallthrough]];
    case FnKind::Powr:
        if (g0 <= 0.0) throw NumericError("real power expanded at a non-positive center");
        f[0] = std::pow(g0, r);
        for (int l = 1; l <= order; ++l) f[l] = f[l - 1] * (r - l + 1) / (l * g0);
        break;
    }
    check_finite(f, "outer expansion");
    return f;
}

TruncSeries expand_pure(const Expr& e, const GridContext& grid, int order) {
    if (order < 0) throw ConfigError("expansion order must be non-negative");
    auto rec = [&](const ExprPtr& c) { return expand_pure(*c, grid, order); };
    switch (e.kind) {
    case Expr::Kind::Const: {
        std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
        v[0] = e.value;
        return TruncSeries(std::move(v), grid.origin, grid.denom);
    }
    case Expr::Kind::IndepVar: {
        std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
        v[0] = grid.origin;
        if (grid.denom <= order) v[grid.denom] += 1.0;
        return TruncSeries(std::move(v), grid.origin, grid.denom);
    }
    case Expr::Kind::StateRef:
        throw PlanningError("cannot expand an expression referencing state '" + e.name + "'");
    case Expr::Kind::Add:
        return add(rec(e.a), rec(e.b));
    case Expr::Kind::Sub:
        return sub(rec(e.a), rec(e.b));
    case Expr::Kind::Mul:
        return cauchy_product(rec(e.a), rec(e.b));
    case Expr::Kind::Div:
        return divide(rec(e.a), rec(e.b));
    case Expr::Kind::Neg:
        return scale(rec(e.a), -1.0);
    case Expr::Kind::IntPow:
        return series_ipow(rec(e.a), e.ipow, grid, order);
    case Expr::Kind::Func: {
        TruncSeries inner = rec(e.a);
        std::vector<double> fc = outer_coeffs(e.fn, e.fr, inner[0], order);
        return compose(TruncSeries(std::move(fc), grid.origin, grid.denom), inner);
    }
    }
    throw ConfigError("unreachable expression kind");
}

TransformEvaluator::TransformEvaluator(ExprPtr e, std::vector<std::string> state_ids,
                                       GridContext grid, int max_order)
    : ids_(std::move(state_ids)), grid_(grid), cap_(max_order) {
    if (!e) throw ConfigError("transform evaluator needs an expression");
    if (cap_ < 0) throw ConfigError("transform order cap must be non-negative");
    if (grid_.denom < 1) throw ConfigError("grid denominator must be at least 1");
    root_ = compile(fold_constants(e));
}

int TransformEvaluator::compile(const ExprPtr& e) {
    const std::size_t width = static_cast<std::size_t>(cap_) + 1;
    if (is_pure(*e)) {
        Node n;
        n.kind = Node::Kind::Pure;
        n.pure = expand_pure(*e, grid_, cap_);
        n.c = n.pure.coeffs();
        n.have = cap_ + 1;
        n.val = cap_ + 1;
        for (int k = 0; k <= cap_; ++k)
            if (n.c[static_cast<std::size_t>(k)] != 0.0) {
                n.val = k;
                break;
            }
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    switch (e->kind) {
    case Expr::Kind::StateRef: {
        auto it = std::find(ids_.begin(), ids_.end(), e->name);
        if (it == ids_.end())
            throw PlanningError("expression references unknown state '" + e->name + "'");
        Node n;
        n.kind = Node::Kind::State;
        n.var = static_cast<int>(it - ids_.begin());
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
        int a = compile(e->a), b = compile(e->b);
        Node n;
        n.kind = e->kind == Expr::Kind::Add ? Node::Kind::Add : Node::Kind::Sub;
        n.a = a;
        n.b = b;
        n.val = std::min(nodes_[a].val, nodes_[b].val);
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    case Expr::Kind::Neg: {
        int a = compile(e->a);
        Node n;
        n.kind = Node::Kind::Neg;
        n.a = a;
        n.val = nodes_[a].val;
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    case Expr::Kind::Mul: {
        int a = compile(e->a), b = compile(e->b);
        Node n;
        n.kind = Node::Kind::Mul;
        n.a = a;
        n.b = b;
        n.val = std::min(cap_ + 1, nodes_[a].val + nodes_[b].val);
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    case Expr::Kind::Div: {
        int a = compile(e->a), b = compile(e->b);
        if (nodes_[b].val > 0)
            throw NumericError("division by a series with zero leading coefficient");
        Node n;
        n.kind = Node::Kind::Div;
        n.a = a;
        n.b = b;
        n.val = nodes_[a].val;
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    case Expr::Kind::IntPow:
        return compile_pow(compile(e->a), e->ipow);
    case Expr::Kind::Func: {
        int a = compile(e->a);
        Node n;
        n.kind = Node::Kind::Func;
        n.a = a;
        n.fn = e->fn == FnKind::Sqrt ? FnKind::Powr : e->fn;
        n.fr = e->fn == FnKind::Sqrt ? 0.5 : e->fr;
        n.c.resize(width, 0.0);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    default:
        throw ConfigError("unreachable expression kind");
    }
}

int TransformEvaluator::compile_pow(int base, int n) {
    if (n < 0) throw SchemaError("integer power exponent must be non-negative");
    if (n == 1) return base;
    auto mul = [&](int a, int b) {
        Node m;
        m.kind = Node::Kind::Mul;
        m.a = a;
        m.b = b;
        m.val = std::min(cap_ + 1, nodes_[a].val + nodes_[b].val);
        m.c.resize(static_cast<std::size_t>(cap_) + 1, 0.0);
        nodes_.push_back(std::move(m));
        return static_cast<int>(nodes_.size()) - 1;
    };
    if (n == 0) {
        // folded upstream; keep a safe fallback
        Node n1;
        n1.kind = Node::Kind::Pure;
        n1.pure = expand_pure(*make_const(1.0), grid_, cap_);
        n1.c = n1.pure.coeffs();
        n1.have = cap_ + 1;
        n1.val = 0;
        nodes_.push_back(std::move(n1));
        return static_cast<int>(nodes_.size()) - 1;
    }
    // balanced square-and-multiply chain; shared subnodes keep it O(log n)
    int half = compile_pow(base, n / 2);
    int sq = mul(half, half);
    return n % 2 ? mul(sq, base) : sq;
}

std::vector<int> TransformEvaluator::demands(int k) const {
    if (k < 0 || k > cap_)
        throw PlanningError("transform order " + std::to_string(k) + " outside evaluator range");
    std::vector<int> out(ids_.size(), -1);
    std::vector<int> target(nodes_.size(), -1);
    target[static_cast<std::size_t>(root_)] = k;
    auto prop = [&](int child, int t) {
        if (t >= 0 && child >= 0)
            target[static_cast<std::size_t>(child)] =
                std::max(target[static_cast<std::size_t>(child)], t);
    };
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
        const int t = target[static_cast<std::size_t>(i)];
        if (t < 0) continue;
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        switch (n.kind) {
        case Node::Kind::Pure:
            break;
        case Node::Kind::State:
            out[static_cast<std::size_t>(n.var)] = std::max(out[static_cast<std::size_t>(n.var)], t);
            break;
        case Node::Kind::Add:
        case Node::Kind::Sub:
        case Node::Kind::Div:
            prop(n.a, t);
            prop(n.b, t);
            break;
        case Node::Kind::Neg:
        case Node::Kind::Func:
            prop(n.a, t);
            break;
        case Node::Kind::Mul:
            prop(n.a, t - nodes_[static_cast<std::size_t>(n.b)].val);
            prop(n.b, t - nodes_[static_cast<std::size_t>(n.a)].val);
            break;
        }
    }
    return out;
}

double TransformEvaluator::coeff(int k, const EnvView& env, std::uint64_t epoch) {
    if (k < 0 || k > cap_)
        throw PlanningError("transform order " + std::to_string(k) + " outside evaluator range");
    if (epoch != epoch_) {
        for (Node& n : nodes_)
            if (n.kind != Node::Kind::Pure) n.have = 0;
        epoch_ = epoch;
    }
    ensure(root_, k, env);
    return nodes_[static_cast<std::size_t>(root_)].c[static_cast<std::size_t>(k)];
}

void TransformEvaluator::ensure(int idx, int upto, const EnvView& env) {
    Node& n = nodes_[static_cast<std::size_t>(idx)];
    while (n.have <= upto) {
        const int j = n.have;
        double v = 0.0;
        switch (n.kind) {
        case Node::Kind::Pure:
            v = n.c[static_cast<std::size_t>(j)];
            break;
        case Node::Kind::State: {
            if (!env.coeffs || !env.avail)
                throw PlanningError("coefficient environment not provided");
            if (j >= (*env.avail)[static_cast<std::size_t>(n.var)])
                throw PlanningError("coefficient " + ids_[static_cast<std::size_t>(n.var)] + "[" +
                                    std::to_string(j) + "] requested before it is available");
            v = (*env.coeffs)[static_cast<std::size_t>(n.var)][static_cast<std::size_t>(j)];
            break;
        }
        case Node::Kind::Add:
            ensure(n.a, j, env);
            ensure(n.b, j, env);
            v = nodes_[static_cast<std::size_t>(n.a)].c[static_cast<std::size_t>(j)] +
                nodes_[static_cast<std::size_t>(n.b)].c[static_cast<std::size_t>(j)];
            break;
        case Node::Kind::Sub:
            ensure(n.a, j, env);
            ensure(n.b, j, env);
            v = nodes_[static_cast<std::size_t>(n.a)].c[static_cast<std::size_t>(j)] -
                nodes_[static_cast<std::size_t>(n.b)].c[static_cast<std::size_t>(j)];
            break;
        case Node::Kind::Neg:
            ensure(n.a, j, env);
            v = -nodes_[static_cast<std::size_t>(n.a)].c[static_cast<std::size_t>(j)];
            break;
        case Node::Kind::Mul: {
            const Node& na = nodes_[static_cast<std::size_t>(n.a)];
            const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
            const int lo = na.val, hi = j - nb.val;
            if (hi >= lo) {
                ensure(n.a, hi, env);
                ensure(n.b, j - lo, env);
                const auto& ca = nodes_[static_cast<std::size_t>(n.a)].c;
                const auto& cb = nodes_[static_cast<std::size_t>(n.b)].c;
                for (int i = lo; i <= hi; ++i)
                    v += ca[static_cast<std::size_t>(i)] * cb[static_cast<std::size_t>(j - i)];
            }
            break;
        }
        case Node::Kind::Div: {
            ensure(n.a, j, env);
            ensure(n.b, j, env);
            const auto& ca = nodes_[static_cast<std::size_t>(n.a)].c;
            const auto& cb = nodes_[static_cast<std::size_t>(n.b)].c;
            if (cb[0] == 0.0)
                throw NumericError("division by a series with zero leading coefficient");
            v = ca[static_cast<std::size_t>(j)];
            for (int i = 1; i <= j; ++i)
                v -= cb[static_cast<std::size_t>(i)] * n.c[static_cast<std::size_t>(j - i)];
            v /= cb[0];
            break;
        }
        case Node::Kind::Func: {
            ensure(n.a, j, env);
            const auto& ca = nodes_[static_cast<std::size_t>(n.a)].c;
            const double g0 = ca[0];
            if (!n.outer_set || g0 != n.outer_g0) {
                n.outer = outer_coeffs(n.fn, n.fr, g0, cap_);
                n.outer_g0 = g0;
                n.outer_set = true;
            }
            // re-sync the incremental table against the current inner prefix
            int keep = static_cast<int>(n.inner_seen.size());
            const int have_inner = std::min(keep, j);
            for (int t = 0; t < have_inner; ++t)
                if (n.inner_seen[static_cast<std::size_t>(t)] != ca[static_cast<std::size_t>(t) + 1]) {
                    keep = t;
                    break;
                }
            if (keep < static_cast<int>(n.inner_seen.size())) {
                n.bell.truncate(keep);
                n.inner_seen.resize(static_cast<std::size_t>(keep));
            }
            while (static_cast<int>(n.inner_seen.size()) < j) {
                const double x = ca[n.inner_seen.size() + 1];
                n.bell.append(x);
                n.inner_seen.push_back(x);
            }
            if (j == 0) {
                v = n.outer[0];
            } else {
                for (int l = 1; l <= j; ++l)
                    v += n.outer[static_cast<std::size_t>(l)] * n.bell(j, l);
            }
            break;
        }
        }
        if (!std::isfinite(v))
            throw NumericError("transformed coefficient became non-finite at order " +
                               std::to_string(j));
        n.c[static_cast<std::size_t>(j)] = v;
        n.have = j + 1;
    }
}

double transform_expr(const Expr& e, const std::map<std::string, TruncSeries>& env, int k,
                      GridContext grid) {
    std::vector<std::string> ids;
    ids.reserve(env.size());
    for (const auto& [id, s] : env) {
        if (s.origin() != grid.origin || s.denom() != grid.denom)
            throw ConfigError("environment series for '" + id + "' is on a different grid");
        ids.push_back(id);
    }
    std::vector<std::vector<double>> coeffs;
    std::vector<int> avail;
    coeffs.reserve(env.size());
    avail.reserve(env.size());
    for (const auto& [id, s] : env) {
        coeffs.push_back(s.coeffs());
        avail.push_back(s.order() + 1);
    }
    TransformEvaluator ev(std::make_shared<const Expr>(e), ids, grid, k);
    EnvView view{&coeffs, &avail};
    return ev.coeff(k, view, 0);
}

std::map<std::string, int> dependency_profile(const Expr& e, int k, GridContext grid) {
    std::set<std::string> states;
    collect_states(e, states);
    std::vector<std::string> ids(states.begin(), states.end());
    TransformEvaluator ev(std::make_shared<const Expr>(e), ids, grid, k);
    std::vector<int> d = ev.demands(k);
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (d[i] >= 0) out[ids[i]] = d[i];
    return out;
}

} // namespace dtm
