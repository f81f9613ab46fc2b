#pragma once

#include <cmath>
#include <cstdint>

#include "hardyp/errors.hpp"

namespace hardyp {

struct BisectOptions {
    double rel_tol = 1e-14;
    int max_iter = 200;
};

// Bracketed bisection.  f(lo) and f(hi) must have opposite signs (a zero
// value at either end is accepted as the root).  Converges to
// rel_tol * max(1, |root|) in the abscissa.
template <class F>
double bisect(F&& f, double lo, double hi, BisectOptions opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw numerical_error("bisect: no sign change on bracket");
    for (int i = 0; i < opt.max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= opt.rel_tol * std::fmax(1.0, std::fabs(mid))) return mid;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Grows the bracket [anchor, anchor +/- g] by doubling g until fn changes
// sign relative to f(anchor).  Hard cap 2^60 on the growth factor.
template <class F>
double grow_bracket(F&& f, double anchor, double step, double f_anchor) {
    double g = step;
    for (int i = 0; i < 61; ++i) {
        double x = anchor + g;
        if ((f(x) < 0.0) != (f_anchor < 0.0)) return x;
        g *= 2.0;
    }
    throw numerical_error("bisect: bracket growth exceeded 2^60");
}

} // namespace hardyp
