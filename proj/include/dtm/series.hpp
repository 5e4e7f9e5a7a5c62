#pragma once

#include <span>
#include <vector>

namespace dtm {

enum class EvalExec { Auto, Serial, Parallel };

/// Truncated power series in u = (v - origin)^(1/denom).
/// Coefficient k multiplies u^k; order = number of coefficients - 1.
/// denom > 1 carries the fractional-power grid; classical series use denom = 1.
class TruncSeries {
public:
    TruncSeries() : c_{0.0} {}
    explicit TruncSeries(std::vector<double> coeffs, double origin = 0.0, int denom = 1);

    static TruncSeries zeros(int order, double origin = 0.0, int denom = 1);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double origin() const { return origin_; }
    int denom() const { return denom_; }

    /// Coefficient access, bounds-checked (0 <= k <= order).
    double operator[](int k) const;

    const std::vector<double>& coeffs() const { return c_; }

private:
    std::vector<double> c_;
    double origin_ = 0.0;
    int denom_ = 1;
};

/// Transformed n-th derivative: result[k] = (k+1)(k+2)...(k+n) * s[k+n].
/// Requires 1 <= n <= s.order() and an integer grid (denom 1).
TruncSeries dt_derivative(const TruncSeries& s, int n);

/// Transformed monomial (v - origin)^n: a 1 at index n, zeros elsewhere.
TruncSeries dt_monomial(int n, int order, double origin = 0.0, int denom = 1);

/// Transformed exponential forcing e^(alpha*v) about 0: coefficient alpha^k / k!.
TruncSeries dt_exp_forcing(double alpha, int order);

/// Pointwise sum/difference; operands must share origin and denom,
/// result is clamped to the shorter order.
TruncSeries add(const TruncSeries& a, const TruncSeries& b);
TruncSeries sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries scale(const TruncSeries& s, double c);

/// Cauchy product: result[k] = sum_i a[i] * b[k-i], clamped to the shorter order.
TruncSeries cauchy_product(const TruncSeries& a, const TruncSeries& b);

/// Series quotient q with cauchy_product(q, b) == a up to truncation.
/// Requires b[0] != 0.
TruncSeries divide(const TruncSeries& a, const TruncSeries& b);

/// Horner evaluation in u = (v - origin)^(1/denom).
/// For denom > 1, v must not lie left of the origin.
double evaluate(const TruncSeries& s, double v);

/// Batch evaluation over many points; the parallel path must agree
/// bit-for-bit with the serial one (same per-point arithmetic).
std::vector<double> evaluate_grid(const TruncSeries& s, std::span<const double> vs,
                                  EvalExec exec = EvalExec::Auto);

} // namespace dtm
