#pragma once

// Internal machinery for the separable H-flow
//   H'(t) = f(H),  f(h) = -kappa |h|^{2-p} Gamma_mu(h),  kappa = (q-p)/(p(p-1))
// whose quadrature yields the ground state.  Everything here is keyed to one
// numerical hazard: Gamma_mu cancels catastrophically near its roots, while
// the interesting integrals run arbitrarily close to them.  Near a root the
// value is therefore computed from the exact offset via a binomial series
// about the root (exact factored forms when p = 2 or mu = 0), and the node
// ladders of the lookup table store those offsets exactly.

#include <cstddef>
#include <optional>
#include <vector>

#include "hardyp/exponents.hpp"
#include "hardyp/params.hpp"
#include "hardyp/quadrature.hpp"

namespace hardyp::detail {

enum class Zone { direct = 0, left = 1, right = 2 };

// Integrand weights shared by the flow integrals:
//   time:   1 / f
//   growth: (delta - sigma) / f      (log-derivative of y)
//   c1:     (sigma - gamma1) / f     (removable at gamma1)
//   c2:     (gamma2 - sigma) / f     (removable at gamma2)
enum class Weight { time, growth, c1, c2 };

class HFlow {
public:
    HFlow(const Params& P, const Exponents& E);

    Params P;
    Exponents E;
    double q = 0.0;     // p_star_s
    double kappa = 0.0; // (q - p) / (p (p - 1))
    double span_left = 0.0;  // delta - gamma1
    double span_right = 0.0; // gamma2 - delta
    double zeta1 = 0.0;      // offset-zone radius at gamma1 (may be +inf)
    double zeta2 = 0.0;

    double neg_gamma_direct(double sigma) const;
    double neg_gamma_left(double d) const;  // sigma = gamma1 + d
    double neg_gamma_right(double e) const; // sigma = gamma2 - e
    double f_direct(double sigma) const;
    double f_left(double d) const;
    double f_right(double e) const;
    double fprime_gamma1() const; // df/dsigma at gamma1, positive
    double fprime_gamma2() const; // -df/dsigma at gamma2, positive
    double y_from_neg_gamma(double ng) const;

    // Integral of the weighted integrand over [xa, xb] in the coordinate of
    // the given zone (absolute sigma for Zone::direct, root offset
    // otherwise), oriented in ascending sigma.
    double piece(Zone zone, Weight w, double xa, double xb, const QuadOptions& opt) const;

    double weight_at(Zone zone, Weight w, double x) const;
    double f_in_zone(Zone zone, double x) const;

private:
    enum class Form { series, quadratic, mu_zero };
    Form form_ = Form::series;
    std::vector<double> cl_, cr_; // series coefficients in the root offset
};

struct HNode {
    double h = 0.0;   // absolute position in (gamma1, gamma2)
    double off = 0.0; // exact offset (Zone::left/right) or sigma (Zone::direct)
    Zone zone = Zone::direct;
    double t = 0.0;
    double y = 0.0;
};

struct EFSampleD {
    double h = 0.0;
    double y = 0.0;
    double z = 0.0;
};

class FlowTable {
public:
    HFlow flow;
    double tol = 1e-12;
    std::vector<HNode> nodes; // ascending in h and t
    std::size_t anchor = 0;   // index of the delta node (t = 0)
    double C1 = 0.0, C2 = 0.0;
    std::optional<double> t_minus; // time of the z sign change, mu < 0 only

    EFSampleD sample(double t_query) const;

private:
    friend FlowTable build_flow_table(const Params&, const Exponents&, double tol,
                                      double t_span, int exec_mode);
    double invert_in_segment(std::size_t k, double tau) const; // returns h
};

// exec_mode: 0 serial, 1 OpenMP.  Plain int so this private header does not
// depend on the public parallel header.
FlowTable build_flow_table(const Params& P, const Exponents& E, double tol,
                           double t_span, int exec_mode);

// C1 = M exp(int_{gamma1}^{delta} (sigma-gamma1)/f), C2 likewise from the
// right; the integrands have removable endpoint singularities.
std::pair<double, double> asymptotic_constants_impl(const HFlow& fl, double tol);

// Signed integral int_delta^h weight/f with the zone/singularity splits.
double flow_integral(const HFlow& fl, Weight w, double h, double tol);

} // namespace hardyp::detail
