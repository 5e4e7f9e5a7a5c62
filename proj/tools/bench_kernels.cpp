// Timing comparison of the serial and OpenMP kernel paths.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dtm/bell.hpp"
#include "dtm/series.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double bench_bell(int n, dtm::BellExec exec, int reps) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> xhat(n);
    for (double& x : xhat) x = u(rng);
    volatile double sink = 0.0;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) {
        auto table = dtm::BellTable::build(xhat, exec);
        sink = sink + table(n - 1, 1 + (n - 1) / 2);
    }
    (void)sink;
    return ms_since(t0) / reps;
}

double bench_grid(int terms, int points, dtm::EvalExec exec, int reps) {
    std::vector<double> coeffs(terms);
    for (int k = 0; k < terms; ++k) coeffs[k] = 1.0 / (1.0 + k * k);
    dtm::TruncSeries s(coeffs);
    std::vector<double> vs(points);
    for (int i = 0; i < points; ++i) vs[i] = 0.9 * i / (points - 1);
    volatile double sink = 0.0;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) {
        auto ys = dtm::evaluate_grid(s, vs, exec);
        sink = sink + ys[points / 2];
    }
    (void)sink;
    return ms_since(t0) / reps;
}

} // namespace

int main() {
    std::printf("Bell table build (rows x columns in one triangular table)\n");
    std::printf("%8s %12s %12s %8s\n", "n", "serial ms", "parallel ms", "speedup");
    for (int n : {64, 128, 256, 512}) {
        int reps = n <= 128 ? 20 : 5;
        double ts = bench_bell(n, dtm::BellExec::Serial, reps);
        double tp = bench_bell(n, dtm::BellExec::Parallel, reps);
        std::printf("%8d %12.3f %12.3f %8.2f\n", n, ts, tp, ts / tp);
    }

    std::printf("\nGrid evaluation (30-term series)\n");
    std::printf("%8s %12s %12s %8s\n", "points", "serial ms", "parallel ms", "speedup");
    for (int pts : {10000, 100000, 1000000}) {
        int reps = pts <= 100000 ? 20 : 5;
        double ts = bench_grid(30, pts, dtm::EvalExec::Serial, reps);
        double tp = bench_grid(30, pts, dtm::EvalExec::Parallel, reps);
        std::printf("%8d %12.3f %12.3f %8.2f\n", pts, ts, tp, ts / tp);
    }
    return 0;
}
