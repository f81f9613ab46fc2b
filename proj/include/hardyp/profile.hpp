#pragma once

#include <vector>

namespace hardyp {

// Sampled radial solution: strictly increasing radii, u > 0 for positive
// solutions, flux q(r) = r^{N-1} |u'|^{p-2} u' (the quantity whose radial
// derivative the equation controls).
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du_dr;
    std::vector<double> flux;
};

} // namespace hardyp
