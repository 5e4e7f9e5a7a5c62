#pragma once

#include <span>
#include <vector>

#include "dtm/series.hpp"

namespace dtm {

enum class BellExec { Auto, Serial, Parallel };

/// Triangular table of partial ordinary Bell polynomial values
/// Bhat_{k,l} over a coefficient sequence x1, x2, ...:
/// the t^k coefficient of (sum_m xm t^m)^l.
///
/// Rows obey the backward recurrence
///   Bhat_{k,l} = sum_{i=1..k-l+1} (i*l/k) * xi * Bhat_{k-i,l-1}
/// with Bhat_{0,0} = 1 and Bhat_{k,0} = 0 for k >= 1, so row k is filled
/// from rows below it and the table extends incrementally as new sequence
/// entries arrive, without recomputing earlier rows.
class BellTable {
public:
    BellTable();

    static BellTable build(std::span<const double> xhat, BellExec exec = BellExec::Auto);

    /// Adds x_{k+1} to the sequence and fills row k+1.
    void append(double x_next, BellExec exec = BellExec::Auto);

    /// Drops rows above max_row (and the matching sequence entries).
    void truncate(int max_row);

    /// Highest filled row index.
    int rows() const { return static_cast<int>(b_.size()) - 1; }

    double operator()(int k, int l) const;

    /// Sequence entries x1..x_rows seen so far.
    std::span<const double> xhat() const { return x_; }

private:
    std::vector<std::vector<double>> b_;
    std::vector<double> x_;

    void fill_row(int k, BellExec exec);
};

/// Series composition H = F o G through the Bell table:
///   H(0) = F(0),  H(k) = sum_{l=1..k} F(l) * Bhat_{k,l}(G(1)..G(k-l+1)).
/// outer holds the coefficients F(l) of the outer function expanded at G(0);
/// requires outer.order() >= inner.order(). The result inherits the inner
/// series' origin and grid.
TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner,
                    BellExec exec = BellExec::Auto);

} // namespace dtm
