#pragma once

#include <cmath>

namespace hardyp {

// Signed power: spow(x, a) = sign(x) |x|^a, with spow(0, a) = 0 for a > 0.
// Every p-Laplacian formula is written in terms of this helper so that the
// sign convention lives in exactly one place.
inline double spow(double x, double a) {
    if (x > 0.0) return std::pow(x, a);
    if (x < 0.0) return -std::pow(-x, a);
    return 0.0;
}

inline double sq(double x) { return x * x; }

} // namespace hardyp
