#include "dtm/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dtm/errors.hpp"

namespace dtm {

namespace {

void require_compatible(const TruncSeries& a, const TruncSeries& b) {
    if (a.origin() != b.origin())
        throw NumericError("incompatible series: origins differ");
    if (a.denom() != b.denom())
        throw NumericError("incompatible series: grid denominators differ");
}

int common_order(const TruncSeries& a, const TruncSeries& b) {
    return std::min(a.order(), b.order());
}

} // namespace

TruncSeries::TruncSeries(std::vector<double> coeffs, double origin, int denom)
    : c_(std::move(coeffs)), origin_(origin), denom_(denom) {
    if (c_.empty()) throw NumericError("series needs at least one coefficient");
    if (denom_ < 1) throw NumericError("grid denominator must be >= 1");
    if (!std::isfinite(origin_)) throw NumericError("series origin must be finite");
    for (double v : c_)
        if (!std::isfinite(v)) throw NumericError("non-finite series coefficient");
}

TruncSeries TruncSeries::zeros(int order, double origin, int denom) {
    if (order < 0) throw NumericError("series order must be >= 0");
    return TruncSeries(std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0),
                       origin, denom);
}

double TruncSeries::operator[](int k) const {
    if (k < 0 || k > order())
        throw std::out_of_range("series coefficient index " + std::to_string(k) +
                                " outside 0.." + std::to_string(order()));
    return c_[static_cast<std::size_t>(k)];
}

TruncSeries dt_derivative(const TruncSeries& s, int n) {
    if (s.denom() != 1)
        throw NumericError("dt_derivative requires an integer grid");
    if (n < 1)
        throw NumericError("dt_derivative order must be >= 1");
    if (n > s.order())
        throw NumericError("truncation underflow: derivative order " + std::to_string(n) +
                           " exceeds series order " + std::to_string(s.order()));
    std::vector<double> out(static_cast<std::size_t>(s.order() - n) + 1);
    for (int k = 0; k + n <= s.order(); ++k) {
        double f = 1.0;
        for (int i = 1; i <= n; ++i) f *= k + i;
        out[static_cast<std::size_t>(k)] = f * s[k + n];
    }
    return TruncSeries(std::move(out), s.origin(), s.denom());
}

TruncSeries dt_monomial(int n, int order, double origin, int denom) {
    if (n < 0 || n > order)
        throw NumericError("monomial index " + std::to_string(n) +
                           " outside truncation order " + std::to_string(order));
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    out[static_cast<std::size_t>(n)] = 1.0;
    return TruncSeries(std::move(out), origin, denom);
}

TruncSeries dt_exp_forcing(double alpha, int order) {
    if (order < 0) throw NumericError("series order must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    out[0] = 1.0;
    for (int k = 1; k <= order; ++k)
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k - 1)] * alpha / k;
    return TruncSeries(std::move(out));
}

TruncSeries add(const TruncSeries& a, const TruncSeries& b) {
    require_compatible(a, b);
    int n = common_order(a, b);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = a[k] + b[k];
    return TruncSeries(std::move(out), a.origin(), a.denom());
}

TruncSeries sub(const TruncSeries& a, const TruncSeries& b) {
    require_compatible(a, b);
    int n = common_order(a, b);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = a[k] - b[k];
    return TruncSeries(std::move(out), a.origin(), a.denom());
}

TruncSeries scale(const TruncSeries& s, double c) {
    std::vector<double> out(s.coeffs());
    for (auto& v : out) v *= c;
    return TruncSeries(std::move(out), s.origin(), s.denom());
}

TruncSeries cauchy_product(const TruncSeries& a, const TruncSeries& b) {
    require_compatible(a, b);
    int n = common_order(a, b);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
        out[static_cast<std::size_t>(k)] = acc;
    }
    return TruncSeries(std::move(out), a.origin(), a.denom());
}

TruncSeries divide(const TruncSeries& a, const TruncSeries& b) {
    require_compatible(a, b);
    if (b[0] == 0.0)
        throw NumericError("division by a series with zero leading coefficient");
    int n = common_order(a, b);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = a[k];
        for (int i = 1; i <= k; ++i) acc -= b[i] * out[static_cast<std::size_t>(k - i)];
        out[static_cast<std::size_t>(k)] = acc / b[0];
    }
    return TruncSeries(std::move(out), a.origin(), a.denom());
}

namespace {

double eval_point(const TruncSeries& s, double v) {
    double u = v - s.origin();
    if (s.denom() > 1) {
        if (u < 0.0)
            throw NumericError("fractional-grid series evaluated left of its origin");
        u = std::pow(u, 1.0 / s.denom());
    }
    const auto& c = s.coeffs();
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
    return acc;
}

} // namespace

double evaluate(const TruncSeries& s, double v) { return eval_point(s, v); }

std::vector<double> evaluate_grid(const TruncSeries& s, std::span<const double> vs,
                                  EvalExec exec) {
    std::vector<double> out(vs.size());
    bool parallel = exec == EvalExec::Parallel ||
                    (exec == EvalExec::Auto && vs.size() >= 2048);
    if (s.denom() > 1) {
        // Domain check up front so no exception crosses the parallel region.
        for (double v : vs)
            if (v < s.origin())
                throw NumericError("fractional-grid series evaluated left of its origin");
    }
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(vs.size()); ++i)
            out[static_cast<std::size_t>(i)] = eval_point(s, vs[static_cast<std::size_t>(i)]);
    } else {
        for (std::size_t i = 0; i < vs.size(); ++i) out[i] = eval_point(s, vs[i]);
    }
    return out;
}

} // namespace dtm
