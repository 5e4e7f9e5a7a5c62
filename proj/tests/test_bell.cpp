#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dtm/bell.hpp"
#include "dtm/errors.hpp"
#include "dtm/series.hpp"
#include "oracles.hpp"

using dtm::BellTable;
using dtm::TruncSeries;

namespace {

std::vector<double> random_seq(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = u(rng);
    return x;
}

} // namespace

TEST_CASE("oracle sanity on closed forms") {
    std::vector<double> x{1.5, -0.5, 2.0, 0.25};
    CHECK(oracle::bell_value(x, 0, 0) == 1.0);
    CHECK(oracle::bell_value(x, 3, 0) == 0.0);
    // l = 1 just reads the sequence.
    for (int k = 1; k <= 4; ++k)
        CHECK(oracle::bell_value(x, k, 1) == x[static_cast<std::size_t>(k - 1)]);
    // t^3 coefficient of (x1 t + x2 t^2 + ...)^2 is 2 x1 x2.
    CHECK(oracle::bell_value(x, 3, 2) == doctest::Approx(2.0 * x[0] * x[1]));
    // t^2 of the square is x1^2.
    CHECK(oracle::bell_value(x, 2, 2) == doctest::Approx(x[0] * x[0]));
}

TEST_CASE("first rows match the closed forms") {
    std::vector<double> x{1.5, -0.5, 2.0};
    auto t = BellTable::build(x);
    CHECK(t(0, 0) == 1.0);
    CHECK(t(1, 0) == 0.0);
    CHECK(t(1, 1) == doctest::Approx(x[0]));
    CHECK(t(2, 1) == doctest::Approx(x[1]));
    CHECK(t(2, 2) == doctest::Approx(x[0] * x[0]));
    CHECK(t(3, 2) == doctest::Approx(2.0 * x[0] * x[1]));
}

TEST_CASE("recurrence agrees with the power-expansion oracle") {
    std::mt19937 rng(20240812);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_seq(rng, 12);
        auto t = BellTable::build(x);
        REQUIRE(t.rows() == 12);
        for (int k = 0; k <= 12; ++k) {
            for (int l = 0; l <= k; ++l) {
                double want = oracle::bell_value(x, k, l);
                CHECK(oracle::close_rel(t(k, l), want, 1e-10, 1e-12));
            }
        }
    }
}

TEST_CASE("diagonal is the first entry's power") {
    std::mt19937 rng(5);
    auto x = random_seq(rng, 10);
    auto t = BellTable::build(x);
    double pw = 1.0;
    for (int k = 0; k <= 10; ++k) {
        CHECK(t(k, k) == doctest::Approx(pw).epsilon(1e-13));
        pw *= x[0];
    }
}

TEST_CASE("incremental append equals a full build") {
    std::mt19937 rng(31);
    auto x = random_seq(rng, 16);
    auto full = BellTable::build(x);
    BellTable inc;
    for (double v : x) inc.append(v);
    REQUIRE(inc.rows() == full.rows());
    for (int k = 0; k <= full.rows(); ++k)
        for (int l = 0; l <= k; ++l)
            CHECK(inc(k, l) == full(k, l));
}

TEST_CASE("truncate then re-append rebuilds the same rows") {
    std::mt19937 rng(77);
    auto x = random_seq(rng, 12);
    auto full = BellTable::build(x);
    auto t = BellTable::build(x);
    t.truncate(7);
    CHECK(t.rows() == 7);
    for (int k = 8; k <= 12; ++k) t.append(x[static_cast<std::size_t>(k - 1)]);
    for (int k = 0; k <= 12; ++k)
        for (int l = 0; l <= k; ++l)
            CHECK(t(k, l) == full(k, l));
}

TEST_CASE("parallel row fill is bit-identical to serial") {
    std::mt19937 rng(123);
    auto x = random_seq(rng, 200);
    auto ser = BellTable::build(x, dtm::BellExec::Serial);
    auto par = BellTable::build(x, dtm::BellExec::Parallel);
    auto aut = BellTable::build(x);
    for (int k = 0; k <= 200; ++k)
        for (int l = 0; l <= k; ++l) {
            CHECK(ser(k, l) == par(k, l));
            CHECK(ser(k, l) == aut(k, l));
        }
}

TEST_CASE("compose recovers exp after ln") {
    // Outer: exp expanded at ln coefficients' center 0 -> 1/l!.
    // Inner: ln(1+v). Composition must give back 1 + v.
    int n = 10;
    std::vector<double> outer_c(static_cast<std::size_t>(n) + 1);
    double fact = 1.0;
    for (int l = 0; l <= n; ++l) {
        if (l > 0) fact *= l;
        outer_c[static_cast<std::size_t>(l)] = 1.0 / fact;
    }
    std::vector<double> inner_c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        inner_c[static_cast<std::size_t>(k)] = (k % 2 ? 1.0 : -1.0) / k;
    auto h = compose(TruncSeries(outer_c), TruncSeries(inner_c));
    REQUIRE(h.order() == n);
    CHECK(h[0] == doctest::Approx(1.0));
    CHECK(h[1] == doctest::Approx(1.0));
    for (int k = 2; k <= n; ++k) CHECK(std::fabs(h[k]) < 1e-12);
}

TEST_CASE("compose with the identity inner returns the outer coefficients") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> f(9), g(9, 0.0);
    for (auto& v : f) v = u(rng);
    g[1] = 1.0;
    auto h = compose(TruncSeries(f), TruncSeries(g));
    for (int k = 0; k <= 8; ++k) CHECK(h[k] == doctest::Approx(f[static_cast<std::size_t>(k)]));
}

TEST_CASE("compose of exp over random cubics matches direct exponentiation") {
    std::mt19937 rng(20240813);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 9;
        std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
        double g0 = u(rng);
        g[0] = g0;
        for (int k = 1; k <= 3; ++k) g[static_cast<std::size_t>(k)] = u(rng);

        std::vector<double> outer(static_cast<std::size_t>(n) + 1);
        double fact = 1.0;
        for (int l = 0; l <= n; ++l) {
            if (l > 0) fact *= l;
            outer[static_cast<std::size_t>(l)] = std::exp(g0) / fact;
        }
        auto h = compose(TruncSeries(outer), TruncSeries(g));

        // Oracle route: exp(g) = e^{g0} * sum_l (g - g0)^l / l! by raw convolution.
        std::vector<double> tail(g.begin(), g.end());
        tail[0] = 0.0;
        std::vector<double> acc(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<double> pw(static_cast<std::size_t>(n) + 1, 0.0);
        pw[0] = 1.0;
        acc[0] = 1.0;
        fact = 1.0;
        for (int l = 1; l <= n; ++l) {
            pw = oracle::conv(pw, tail, static_cast<std::size_t>(n) + 1);
            fact *= l;
            for (int k = 0; k <= n; ++k) acc[static_cast<std::size_t>(k)] += pw[static_cast<std::size_t>(k)] / fact;
        }
        for (int k = 0; k <= n; ++k) {
            double want = std::exp(g0) * acc[static_cast<std::size_t>(k)];
            CHECK(oracle::close_rel(h[k], want, 1e-10, 1e-12));
        }
    }
}

TEST_CASE("compose enforces the outer-order precondition") {
    TruncSeries shortf({1.0, 1.0});
    TruncSeries inner({0.0, 1.0, 0.5, 0.25});
    CHECK_THROWS_AS(compose(shortf, inner), dtm::NumericError);
}
