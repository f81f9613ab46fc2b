#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hardyp/exponents.hpp"
#include "hardyp/parallel.hpp"
#include "hardyp/params.hpp"
#include "hardyp/profile.hpp"

namespace hardyp {

namespace detail {
class FlowTable;
}

struct GridSpec {
    double r_min = 1e-6;
    double r_max = 1e6;
    int samples = 2001;
};

struct EFSample {
    double h = 0.0; // H value
    double y = 0.0;
    double z = 0.0;
};

// Inverse of the separable H-flow: monotone (t, H) node ladder graded
// geometrically into both roots, with exact root offsets kept so that the
// tails stay accurate to full precision.  Queries between nodes are refined
// to quadrature tolerance; beyond the ladder the power-law asymptote with
// coefficients C1, C2 takes over.  Immutable after construction and safe to
// share across threads.
class HTable {
public:
    const Params& params() const;
    const Exponents& exps() const;
    double C1() const;
    double C2() const;
    std::optional<double> t_minus() const;
    std::vector<std::pair<double, double>> th_pairs() const; // monotone (t, H)
    std::vector<EFSample> node_samples() const;              // (H, y, z) per node
    EFSample sample(double t) const;

private:
    std::shared_ptr<const detail::FlowTable> impl_;
    friend HTable build_h_table(const Params&, const Exponents&, double, double, Exec);
};

// t(h) = int_delta^h dsigma / f(sigma): strictly increasing, t(delta) = 0.
double time_of_h(double h, const Params& P, const Exponents& E, double tol = 1e-12);

// y(h) = M exp(int_delta^h (delta - sigma)/f(sigma) dsigma): the quadrature
// route; equals M at h = delta and decays toward both roots.
double y_of_h(double h, const Params& P, const Exponents& E, double tol = 1e-12);

// Algebraic route y = (p*(s) (-Gamma_mu(h)) / p)^{1/(p*(s)-p)}; must agree
// with y_of_h to quadrature accuracy.
double y_from_h_algebraic(double h, const Params& P, const Exponents& E);

// (C1, C2): the r -> 0 and r -> infinity coefficients of u under the
// y(0) = M normalization.
std::pair<double, double> asymptotic_constants(const Params& P, const Exponents& E,
                                               double tol = 1e-12);

// Monotone (t, H) table on a uniform grid over [-t_span, t_span].
std::vector<std::pair<double, double>> h_profile(const Params& P, const Exponents& E,
                                                 double t_span, int n_points,
                                                 double tol = 1e-12);

HTable build_h_table(const Params& P, const Exponents& E, double tol = 1e-12,
                     double t_span = 16.0, Exec ex = Exec::openmp);

// Reconstruction u(r) = r^{-delta} y(log r), u' = -H y r^{-(delta+1)} on a
// log-uniform grid; every grid point is an independent table query.
RadialProfile sample_profile(const HTable& table, const GridSpec& grid,
                             Exec ex = Exec::openmp);

struct GroundStateReport {
    double max_abs_V = 0.0;       // first-integral drift over the trajectory
    double max_y_over_M = 0.0;    // must not exceed 1 beyond rounding
    double identity_defect = 0.0; // quadrature-vs-algebra cross-check on y(h)
    double max_ode_residual = std::numeric_limits<double>::quiet_NaN();
    double slope_fit_zero = std::numeric_limits<double>::quiet_NaN();
    double slope_fit_inf = std::numeric_limits<double>::quiet_NaN();
};

struct GroundStateSolution {
    Params params;
    Exponents exps;
    std::vector<std::pair<double, double>> h_table; // monotone (t, H)
    RadialProfile profile;
    double C1 = 0.0;
    double C2 = 0.0;
    std::optional<double> t_minus; // present iff mu < 0
    GroundStateReport report;
};

// End-to-end construction of the unique (up to dilation) ground state,
// normalized by y(0) = M.  lambda must be 0.
GroundStateSolution solve(const Params& P, const GridSpec& grid = {},
                          double tol = 1e-12, Exec ex = Exec::openmp);

} // namespace hardyp
