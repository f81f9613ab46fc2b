#include "hardyp/exponents.hpp"

#include <cmath>
#include <stdexcept>

#include "hardyp/errors.hpp"
#include "hardyp/math.hpp"
#include "hardyp/roots.hpp"

namespace hardyp {

void require_valid(const Params& P) {
    const std::string why = validate(P);
    if (!why.empty()) throw std::invalid_argument("invalid parameters: " + why);
}

double gamma_mu(double gamma, const Params& P) {
    if (gamma == 0.0) return P.mu;
    const double a = std::fabs(gamma);
    return (P.p - 1.0) * std::pow(a, P.p) -
           (P.N - P.p) * std::pow(a, P.p - 2.0) * gamma + P.mu;
}

double gamma_mu_derivative(double gamma, const Params& P) {
    if (gamma == 0.0) {
        if (P.p < 2.0)
            throw std::domain_error("gamma_mu_derivative: unbounded at gamma = 0 for p < 2");
        if (P.p == 2.0) return -(P.N - P.p);
        return 0.0;
    }
    return (P.p - 1.0) * std::pow(std::fabs(gamma), P.p - 2.0) *
           (P.p * gamma - (P.N - P.p));
}

namespace {

// Newton polish after bisection; drives |Gamma_mu| down to rounding level.
double polish_root(double g, const Params& P) {
    for (int i = 0; i < 4; ++i) {
        if (g == 0.0) break;
        const double d = gamma_mu_derivative(g, P);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double step = gamma_mu(g, P) / d;
        const double next = g - step;
        if (!std::isfinite(next)) break;
        g = next;
        if (std::fabs(step) <= 1e-16 * std::fmax(1.0, std::fabs(g))) break;
    }
    return g;
}

} // namespace

Exponents derive(const Params& P) {
    require_valid(P);
    Exponents E;
    E.delta = P.delta();
    E.mu_bar = P.mu_bar();
    E.p_star_s = P.p_star();
    const double edge2 = (P.N - P.p) / (P.p - 1.0); // Gamma_mu(edge2) = mu

    if (P.p == 2.0) {
        const double root = std::sqrt(E.mu_bar - P.mu);
        E.gamma1 = std::sqrt(E.mu_bar) - root;
        E.gamma2 = std::sqrt(E.mu_bar) + root;
    } else if (P.mu == 0.0) {
        E.gamma1 = 0.0;
        E.gamma2 = edge2;
    } else {
        auto g = [&](double x) { return gamma_mu(x, P); };
        const double at_zero = P.mu;
        if (P.mu > 0.0) {
            // Gamma(0) = mu > 0, Gamma(delta) = -(mu_bar - mu) < 0, Gamma(edge2) = mu > 0
            E.gamma1 = polish_root(bisect(g, 0.0, E.delta), P);
            E.gamma2 = polish_root(bisect(g, E.delta, edge2), P);
        } else {
            const double lo = grow_bracket(g, 0.0, -1.0, at_zero);
            E.gamma1 = polish_root(bisect(g, lo, 0.0), P);
            const double hi = grow_bracket(g, edge2, 1.0, at_zero);
            E.gamma2 = polish_root(bisect(g, edge2, hi), P);
        }
    }

    E.M = std::pow(E.p_star_s * (E.mu_bar - P.mu) / P.p,
                   1.0 / (E.p_star_s - P.p));
    E.sphere_measure = 2.0 * std::pow(M_PI, 0.5 * P.N) / std::tgamma(0.5 * P.N);
    return E;
}

double t_minus_level(const Params& P) {
    require_valid(P);
    if (!(P.mu < 0.0))
        throw std::domain_error("t_minus_level: requires mu < 0 (z never vanishes otherwise)");
    const double q = P.p_star();
    return std::pow(-q * P.mu / P.p, 1.0 / (q - P.p));
}

} // namespace hardyp
