#pragma once

#include <array>

#include "hardyp/exponents.hpp"
#include "hardyp/params.hpp"

namespace hardyp {

// Phase point of the transformed system: t = log r, y = r^delta u,
// z = r^{(p-1)(delta+1)} |u'|^{p-2} u'.
struct EFState {
    double t = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct RadialPoint {
    double r = 0.0;
    double u = 0.0;
    double du_dr = 0.0;
};

EFState to_ef(double r, double u, double du_dr, const Params& P, const Exponents& E);
RadialPoint from_ef(const EFState& st, const Params& P, const Exponents& E);

// (dy/dt, dz/dt) of the autonomous planar system:
//   y' = delta y + |z|^{1/(p-1)-1} z
//   z' = -delta z - y^{p*(s)-1} - mu y^{p-1}
std::array<double, 2> rhs(const EFState& st, const Params& P, const Exponents& E);

// First integral V(a, b) = |a|^{p*(s)}/p*(s) + mu |a|^p / p + delta a b
//                        + |b|^{p'}/p'.  Identically zero along finite-energy
// trajectories.
double first_integral(double y, double z, const Params& P, const Exponents& E);

// H = -|z|^{1/(p-1)-1} z / y; requires y > 0.  Strictly increasing from
// gamma1 to gamma2 along the ground state.
double h_of(const EFState& st, const Params& P);

// Autonomous velocity of H:
//   f(h) = -((p*(s)-p)/(p(p-1))) |h|^{2-p} Gamma_mu(h),
// strictly positive on (gamma1, gamma2) \ {0}.  Domain error at h = 0 when
// p > 2 (the |h|^{2-p} factor diverges there).
double h_rhs(double h, const Params& P, const Exponents& E);

} // namespace hardyp
