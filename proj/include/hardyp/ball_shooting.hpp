#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hardyp/exponents.hpp"
#include "hardyp/parallel.hpp"
#include "hardyp/params.hpp"
#include "hardyp/profile.hpp"

namespace hardyp {

struct ShootOptions {
    double r0 = 1e-6;        // start radius of the singular expansion
    double ode_tol = 1e-10;  // integrator tolerance
    double root_tol = 1e-12; // bisection tolerance on C (relative)
    int scan_points = 60;    // log-spaced C values in the bracket scan
};

// Leading-order start licensed by the asymptotics u ~ C r^{-gamma1}:
// returns (u(r0), u'(r0)) = (C r0^{-gamma1}, -gamma1 C r0^{-gamma1-1}).
std::pair<double, double> singular_start(double C, double r0, const Params& P,
                                         const Exponents& E);

struct RadialShot {
    RadialProfile profile; // samples at the requested radii before any zero
    std::optional<double> first_zero;
    double r_end = 0.0; // radius actually reached
    double u_end = 0.0;
    double du_end = 0.0;
};

// Integrates -(r^{N-1}|u'|^{p-2}u')' = (mu r^{-p} + u^{p*(s)-p} r^{-s} + lambda)
// u^{p-1} r^{N-1} in the (u, flux) variables from the singular start, stopping
// at r_end or at the first zero of u (bisected to 1e-12 in r).
// critical_term = false drops the u^{p*(s)-p} r^{-s} term (eigen-equation).
RadialShot integrate_radial(double C, const Params& P, const Exponents& E,
                            double r0, double r_end, double ode_tol,
                            std::span<const double> sample_radii = {},
                            bool critical_term = true);

// Shooting functional: u(1; C) when u stays positive, else -(1 - first zero
// radius).  Continuous in C and zero exactly at solutions.
double shoot(double C, const Params& P, const Exponents& E,
             const ShootOptions& opt = {});

// shoot at each C of a grid; independent evaluations, parallelizable.
std::vector<double> scan_shoot(std::span<const double> Cs, const Params& P,
                               const Exponents& E, const ShootOptions& opt,
                               Exec ex = Exec::openmp);

struct WTraceReport {
    std::vector<std::pair<double, double>> trace; // (r, w)
    double limit_measured = 0.0;                  // w at the smallest radius
    double limit_expected = 0.0;                  // spow(gamma1, p-1)
    double rate_exponent = 0.0; // slope of log|w - limit| against log r
};

// w(r) = -r^{p-1}|u'|^{p-2}u' / u^{p-1}, pointwise over the profile, with
// the fitted limit and convergence rate at the origin.
WTraceReport w_trace(const RadialProfile& prof, const Params& P, const Exponents& E);

struct BallSolution {
    Params params;
    Exponents exps;
    double amplitude_C = 0.0; // u ~ C r^{-gamma1} at the origin
    RadialProfile profile;    // log grid on (r0, 1]
    double boundary_slope = 0.0;
    double pohozaev_defect = 0.0; // relative, at r = 1
    WTraceReport w_report;
};

// Scans the C bracket for sign changes of shoot and refines each by
// bisection.  Throws numerical_error when no sign change exists (no solution
// in the bracket) and verification_error when more than one distinct root is
// found -- that would contradict uniqueness of the positive radial solution.
// Passing {0, 0} as the bracket selects the default [1e-3, 1e3] times the
// natural amplitude scale C1 of the lambda = 0 ground state.
BallSolution solve_ball(const Params& P, const Exponents& E,
                        std::pair<double, double> C_bracket = {0.0, 0.0},
                        const ShootOptions& opt = {}, Exec ex = Exec::openmp);

// Relative defect of the Pohozaev identity at the grid radius nearest r
// (from below).  The small-r tail of the left side below r0 is integrated
// analytically from the power-law asymptotics.
double pohozaev_defect(const BallSolution& sol, double r, const Params& P,
                       const Exponents& E);

// Smallest lambda for which the eigen-equation shot from the gamma1
// asymptotics first vanishes exactly at r = 1; bisection on lambda.
double first_eigenvalue(int N, double p, double mu, double tol = 1e-6);

} // namespace hardyp
