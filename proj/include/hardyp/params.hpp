#pragma once

#include <cmath>
#include <string>

namespace hardyp {

// Problem tuple for
//   -div(|grad u|^{p-2} grad u) - mu |x|^{-p} |u|^{p-2} u
//        = |x|^{-s} |u|^{p*(s)-2} u + lambda |u|^{p-2} u
// on the unit ball (lambda free) or on all of R^N (lambda = 0).
struct Params {
    int N = 4;         // spatial dimension
    double p = 2.0;    // p-Laplacian exponent, 1 < p < N
    double mu = 0.0;   // Hardy coefficient, mu < mu_bar
    double s = 0.0;    // singularity exponent of the critical term, 0 <= s < p
    double lambda = 0.0;

    double delta() const { return (N - p) / p; }
    double mu_bar() const { return std::pow((N - p) / p, p); }
    double p_star() const { return (N - s) * p / (N - p); }
};

// Empty string when valid, otherwise the violated inequality verbatim.
inline std::string validate(const Params& P) {
    if (P.N < 2) return "requires N >= 2";
    if (!(1.0 < P.p && P.p < P.N)) return "requires 1 < p < N";
    if (!(P.mu < P.mu_bar())) return "requires mu < ((N-p)/p)^p";
    if (!(0.0 <= P.s && P.s < P.p)) return "requires 0 <= s < p";
    if (!std::isfinite(P.lambda)) return "requires lambda finite";
    return {};
}

inline bool is_valid(const Params& P) { return validate(P).empty(); }

void require_valid(const Params& P); // throws std::invalid_argument

} // namespace hardyp
