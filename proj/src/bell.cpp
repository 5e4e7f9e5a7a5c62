#include "dtm/bell.hpp"

#include <string>

#include "dtm/errors.hpp"

namespace dtm {

namespace {

// Rows shorter than this are not worth a parallel region.
constexpr int kParallelRowThreshold = 48;

double row_entry(const std::vector<std::vector<double>>& b, const std::vector<double>& x,
                 int k, int l) {
    // Bhat_{k,l} = sum_{i=1..k-l+1} (i*l/k) * x_i * Bhat_{k-i,l-1}
    double acc = 0.0;
    for (int i = 1; i <= k - l + 1; ++i) {
        double w = static_cast<double>(i) * static_cast<double>(l) / static_cast<double>(k);
        acc += w * x[static_cast<std::size_t>(i - 1)] *
               b[static_cast<std::size_t>(k - i)][static_cast<std::size_t>(l - 1)];
    }
    return acc;
}

} // namespace

BellTable::BellTable() : b_{{1.0}} {}

BellTable BellTable::build(std::span<const double> xhat, BellExec exec) {
    BellTable t;
    for (double v : xhat) t.append(v, exec);
    return t;
}

void BellTable::append(double x_next, BellExec exec) {
    x_.push_back(x_next);
    int k = rows() + 1;
    b_.emplace_back(static_cast<std::size_t>(k) + 1, 0.0);
    fill_row(k, exec);
}

void BellTable::fill_row(int k, BellExec exec) {
    auto& row = b_[static_cast<std::size_t>(k)];
    row[0] = 0.0;
    bool parallel = exec == BellExec::Parallel ||
                    (exec == BellExec::Auto && k >= kParallelRowThreshold);
    if (parallel) {
        // Entries within a row only read rows below it, so they are independent.
#pragma omp parallel for schedule(static)
        for (int l = 1; l <= k; ++l)
            row[static_cast<std::size_t>(l)] = row_entry(b_, x_, k, l);
    } else {
        for (int l = 1; l <= k; ++l)
            row[static_cast<std::size_t>(l)] = row_entry(b_, x_, k, l);
    }
}

void BellTable::truncate(int max_row) {
    if (max_row < 0) throw NumericError("bell table cannot drop row 0");
    if (max_row >= rows()) return;
    b_.resize(static_cast<std::size_t>(max_row) + 1);
    x_.resize(static_cast<std::size_t>(max_row));
}

double BellTable::operator()(int k, int l) const {
    if (k < 0 || k > rows() || l < 0 || l > k)
        throw NumericError("bell table index (" + std::to_string(k) + "," +
                           std::to_string(l) + ") outside the filled triangle");
    return b_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner, BellExec exec) {
    if (outer.order() < inner.order())
        throw NumericError("compose needs outer coefficients up to the inner order");
    int n = inner.order();
    BellTable t;
    for (int i = 1; i <= n; ++i) t.append(inner[i], exec);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    out[0] = outer[0];
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int l = 1; l <= k; ++l) acc += outer[l] * t(k, l);
        out[static_cast<std::size_t>(k)] = acc;
    }
    return TruncSeries(std::move(out), inner.origin(), inner.denom());
}

} // namespace dtm
