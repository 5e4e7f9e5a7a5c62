#include "dtm/gammafn.hpp"

#include <cmath>

#include "dtm/errors.hpp"

namespace dtm {

// Lanczos approximation, g = 7 with 9 coefficients (Godfrey's set).
double lanczos_gamma(double x) {
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (!std::isfinite(x)) throw NumericError("gamma of a non-finite argument");
    if (x < 0.5) {
        // Reflection keeps the series usable near and below zero.
        if (x == std::floor(x))
            throw NumericError("gamma pole at non-positive integer");
        return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
    }
    double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    double t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

} // namespace dtm
