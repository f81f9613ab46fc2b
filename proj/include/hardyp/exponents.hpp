#pragma once

#include "hardyp/params.hpp"

namespace hardyp {

// Derived constants of a parameter tuple.  gamma1 < gamma2 are the only two
// roots of Gamma_mu; they are the exact decay exponents of positive radial
// solutions at r = 0 and r = infinity.
struct Exponents {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double delta = 0.0;          // (N - p) / p
    double mu_bar = 0.0;         // ((N - p) / p)^p
    double p_star_s = 0.0;       // (N - s) p / (N - p)
    double M = 0.0;              // max of y = r^delta u along a ground state
    double sphere_measure = 0.0; // surface measure of the unit sphere in R^N
};

// Gamma_mu(gamma) = (p-1)|gamma|^p - (N-p)|gamma|^{p-2} gamma + mu.
// Continuous in gamma, equals mu at gamma = 0.
double gamma_mu(double gamma, const Params& P);

// d/dgamma Gamma_mu = (p-1)|gamma|^{p-2} (p gamma - (N-p)).
// Unbounded at gamma = 0 when 1 < p < 2: that case is a domain error.
double gamma_mu_derivative(double gamma, const Params& P);

// Locates gamma1, gamma2 and fills in every derived constant.  Closed forms
// are used verbatim when mu = 0 or p = 2; otherwise bracketed bisection to
// relative tolerance 1e-14 followed by a short Newton polish.
Exponents derive(const Params& P);

// The unique y-level at which z changes sign (mu < 0 only).
double t_minus_level(const Params& P);

} // namespace hardyp
