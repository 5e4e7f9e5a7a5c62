#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtm/engine.hpp"
#include "dtm/metrics.hpp"

namespace dtm {

/// Published comparison data for one example, used as regression anchors.
/// Values and errors are quoted at the case's default order.
struct RefValue {
    std::string var;
    double v = 0.0;
    double value = 0.0;
};

struct RefError {
    std::string var;
    double v = 0.0;
    double rel_err = 0.0;
};

/// Grid maximum of the absolute error at a given truncation order,
/// taken over ref_grid.
struct RefMax {
    std::string var;
    int order = 0;
    double max_abs = 0.0;
};

/// Published solution value for a non-classical derivative order.
struct RefFractional {
    std::string var;
    std::string alpha;
    double v = 0.0;
    double value = 0.0;
};

/// A built-in problem: the declarative system, its closed-form solution,
/// and the published rows the regression suite compares against.
struct ExampleCase {
    ProblemSpec spec;
    std::map<std::string, ExactFn> exact;
    int default_order = 10;
    std::vector<double> ref_grid;
    std::vector<RefValue> values;
    std::vector<RefError> errors;
    std::vector<RefMax> maxima;
    std::vector<RefFractional> fractional;
};

/// The five built-in cases. n is 1-based; lambda only affects case 3,
/// whose solution is independent of it. Each returned case has passed
/// self_check at load. Throws ConfigError for n outside 1..5.
ExampleCase get_example(int n, double lambda = 15.0);

/// Substitutes the closed forms into every equation and constraint,
/// differentiating by Richardson-extrapolated central differences, and
/// returns the largest residual over v in [0, 0.9]. Classical orders only.
double self_check(const ExampleCase& c);

} // namespace dtm
