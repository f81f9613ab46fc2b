#pragma once

// Independent finite-difference eigensolver for the radial Laplacian
// eigenvalue problem -(r^{N-1} u')' = lambda r^{N-1} u on (0, 1), u(1) = 0,
// used as the oracle for the shooting-based first_eigenvalue.  Cell-centered
// grid so the origin carries the natural zero-flux condition; generalized
// problem symmetrized and the smallest eigenvalue located by Sturm-count
// bisection on the tridiagonal matrix.

#include <cmath>
#include <vector>

namespace hardyp::testing {

inline double fd_first_eigenvalue_radial(int N, int cells = 4000) {
    const int n = cells;
    const double h = 1.0 / n;
    std::vector<double> diag(n), off(n - 1);
    auto wface = [&](int i) { return std::pow(i * h, N - 1.0); }; // face weight
    auto wcell = [&](int i) { return std::pow((i - 0.5) * h, N - 1.0); };
    for (int i = 1; i <= n; ++i) {
        double d = (wface(i - 1) + wface(i)) / (h * h);
        if (i == n) d = (wface(n - 1) + 2.0 * wface(n)) / (h * h); // u(1) = 0 ghost
        diag[i - 1] = d / wcell(i);
        if (i < n) off[i - 1] = -wface(i) / (h * h) / std::sqrt(wcell(i) * wcell(i + 1));
    }

    auto negatives_below = [&](double lam) {
        int count = 0;
        double d = diag[0] - lam;
        if (d < 0.0) ++count;
        for (int i = 1; i < n; ++i) {
            const double denom = d == 0.0 ? 1e-300 : d;
            d = diag[i] - lam - off[i - 1] * off[i - 1] / denom;
            if (d < 0.0) ++count;
        }
        return count;
    };

    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = diag[i];
        if (i > 0) row += std::fabs(off[i - 1]);
        if (i + 1 < n) row += std::fabs(off[i]);
        hi = std::fmax(hi, row);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (negatives_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace hardyp::testing
