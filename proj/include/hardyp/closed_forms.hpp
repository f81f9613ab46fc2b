#pragma once

#include <functional>
#include <optional>

#include "hardyp/params.hpp"

namespace hardyp {

// Explicit solution families of the lambda = 0 problem, used as validation
// oracles.  P2 covers p = 2 with any mu < mu_bar, 0 <= s < 2; MU0 covers
// mu = 0 with any 1 < p < N, 0 <= s < p; AubinTalenti is the classical
// p = 2, mu = s = 0 bubble (the same dilation orbit as P2/MU0 there).
enum class FamilyKind { P2, MU0, AubinTalenti };

struct ClosedFormFamily {
    FamilyKind kind = FamilyKind::MU0;
    double constant_c = 0.0; // amplitude
    double nu = 0.0;         // sqrt(1 - mu/mu_bar), P2 only
};

struct PointValue {
    double u = 0.0;
    double du_dr = 0.0;
};

using RadialEvaluator = std::function<PointValue(double)>;

// The applicable family, preferring P2 when both apply; empty when p != 2
// and mu != 0 (no closed form is known there).
std::optional<ClosedFormFamily> select(const Params& P);

// Value and analytic radial derivative at radius r.  P2 requires r > 0;
// MU0 extends continuously to r = 0 with (c, 0).
PointValue eval(const ClosedFormFamily& F, const Params& P, double r);

RadialEvaluator evaluator(const ClosedFormFamily& F, const Params& P);

// Radius maximizing r^delta u(r); analytic per family.
double argmax_radius(const ClosedFormFamily& F, const Params& P);

// Dilation u^tau(x) = tau^delta u(tau x); composes multiplicatively in tau.
RadialEvaluator dilate(RadialEvaluator ev, double tau, double delta);

} // namespace hardyp
