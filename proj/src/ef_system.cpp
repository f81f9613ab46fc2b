#include "hardyp/ef_system.hpp"

#include <cmath>
#include <stdexcept>

#include "hardyp/math.hpp"

namespace hardyp {

EFState to_ef(double r, double u, double du_dr, const Params& P, const Exponents& E) {
    if (!(r > 0.0)) throw std::domain_error("to_ef: requires r > 0");
    if (!(u > 0.0)) throw std::domain_error("to_ef: requires u > 0");
    EFState st;
    st.t = std::log(r);
    st.y = std::pow(r, E.delta) * u;
    st.z = std::pow(r, (P.p - 1.0) * (E.delta + 1.0)) * spow(du_dr, P.p - 1.0);
    return st;
}

RadialPoint from_ef(const EFState& st, const Params& P, const Exponents& E) {
    if (!(st.y > 0.0)) throw std::domain_error("from_ef: requires y > 0");
    RadialPoint pt;
    pt.r = std::exp(st.t);
    pt.u = std::pow(pt.r, -E.delta) * st.y;
    pt.du_dr = spow(st.z, 1.0 / (P.p - 1.0)) * std::pow(pt.r, -(E.delta + 1.0));
    return pt;
}

std::array<double, 2> rhs(const EFState& st, const Params& P, const Exponents& E) {
    const double dy = E.delta * st.y + spow(st.z, 1.0 / (P.p - 1.0));
    const double dz = -E.delta * st.z - spow(st.y, E.p_star_s - 1.0) -
                      P.mu * spow(st.y, P.p - 1.0);
    return {dy, dz};
}

double first_integral(double y, double z, const Params& P, const Exponents& E) {
    const double pp = P.p / (P.p - 1.0);
    return std::pow(std::fabs(y), E.p_star_s) / E.p_star_s +
           P.mu / P.p * std::pow(std::fabs(y), P.p) + E.delta * y * z +
           std::pow(std::fabs(z), pp) / pp;
}

double h_of(const EFState& st, const Params& P) {
    if (!(st.y > 0.0)) throw std::domain_error("h_of: requires y > 0");
    return -spow(st.z, 1.0 / (P.p - 1.0)) / st.y;
}

double h_rhs(double h, const Params& P, const Exponents& E) {
    if (h == 0.0 && P.p > 2.0)
        throw std::domain_error("h_rhs: |h|^{2-p} diverges at h = 0 for p > 2");
    const double kappa = (E.p_star_s - P.p) / (P.p * (P.p - 1.0));
    const double weight = h == 0.0 ? 0.0 : std::pow(std::fabs(h), 2.0 - P.p);
    return -kappa * weight * gamma_mu(h, P);
}

} // namespace hardyp
