#pragma once

#include <span>
#include <string>
#include <vector>

#include "hardyp/exponents.hpp"
#include "hardyp/params.hpp"
#include "hardyp/profile.hpp"

namespace hardyp {

struct GroundStateSolution;
struct BallSolution;

struct CheckReport {
    std::string name;
    double measured = 0.0;
    double allowed = 0.0;
    bool passed = false;
    std::string context;
};

CheckReport make_check(std::string name, double measured, double allowed,
                       std::string context);

enum class ProfileEnd { zero, infinity };

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_est = 0.0;
};

// Least-squares line through (x, y).
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

// Least-squares slope of (log r, log u) over `decades` at the chosen end of
// the profile, excluding the outermost half-decade.  Estimates -gamma1 at
// the zero end and -gamma2 at infinity.  Throws std::domain_error when the
// profile does not cover the requested range.
SlopeFit fit_power_slope(const RadialProfile& prof, ProfileEnd end, int decades);

// Sup relative error against the closed form, after dilating the closed
// form so its y-argmax coincides with the numeric profile's; compared over
// the overlap of r-ranges clipped to [1e-2, 1e2].
CheckReport compare_to_closed_form(const RadialProfile& prof, const Params& P,
                                   const Exponents& E, double allowed = 1e-6);

// Max relative defect of the radial equation over interior grid points,
// measured in the transformed autonomous variables with 4th-order central
// differences on the (uniform) log-radius grid; discretization error sits
// well below the 1e-6 acceptance threshold.
double max_ode_residual(const RadialProfile& prof, const Params& P);

// Necessary-condition monitors: first-integral drift and the y <= M bound
// for ground states, Pohozaev defects for ball solutions.
std::vector<CheckReport> conservation_monitor(const GroundStateSolution& sol);
std::vector<CheckReport> conservation_monitor(const BallSolution& sol,
                                              const Params& P, const Exponents& E);

} // namespace hardyp
