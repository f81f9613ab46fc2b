#include "hardyp/closed_forms.hpp"

#include <cmath>
#include <stdexcept>

namespace hardyp {

std::optional<ClosedFormFamily> select(const Params& P) {
    if (P.p == 2.0) {
        ClosedFormFamily F;
        F.kind = FamilyKind::P2;
        F.nu = std::sqrt(1.0 - P.mu / P.mu_bar());
        F.constant_c = std::pow(4.0 * (P.N - P.s) * (P.mu_bar() - P.mu) / (P.N - 2.0),
                                (P.N - 2.0) / (2.0 * (2.0 - P.s)));
        return F;
    }
    if (P.mu == 0.0) {
        ClosedFormFamily F;
        F.kind = FamilyKind::MU0;
        const double e2 = (P.N - P.p) / (P.p - 1.0);
        F.constant_c = std::pow((P.N - P.s) * std::pow(e2, P.p - 1.0),
                                (P.N - P.p) / (P.p * (P.p - P.s)));
        return F;
    }
    return std::nullopt;
}

PointValue eval(const ClosedFormFamily& F, const Params& P, double r) {
    switch (F.kind) {
    case FamilyKind::P2: {
        if (r <= 0.0) throw std::domain_error("closed form eval: requires r > 0");
        const double b1 = 0.5 * (2.0 - P.s) * (1.0 - F.nu);
        const double b2 = 0.5 * (2.0 - P.s) * (1.0 + F.nu);
        const double a = (P.N - 2.0) / (2.0 - P.s);
        const double t1 = std::pow(r, b1), t2 = std::pow(r, b2);
        const double base = t1 + t2;
        const double u = F.constant_c * std::pow(base, -a);
        const double dbase = (b1 * t1 + b2 * t2) / r;
        return {u, -a * u / base * dbase};
    }
    case FamilyKind::MU0: {
        if (r < 0.0) throw std::domain_error("closed form eval: requires r >= 0");
        if (r == 0.0) return {F.constant_c, 0.0};
        const double b = (P.p - P.s) / (P.p - 1.0);
        const double a = (P.N - P.p) / (P.p - P.s);
        const double rb = std::pow(r, b);
        const double u = F.constant_c * std::pow(1.0 + rb, -a);
        return {u, -a * b * u / (1.0 + rb) * rb / r};
    }
    case FamilyKind::AubinTalenti: {
        if (r < 0.0) throw std::domain_error("closed form eval: requires r >= 0");
        const double amp = std::sqrt(P.N * (P.N - 2.0));
        const double u = std::pow(amp / (1.0 + r * r), 0.5 * (P.N - 2.0));
        return {u, -(P.N - 2.0) * r * u / (1.0 + r * r)};
    }
    }
    throw std::logic_error("closed form eval: unknown family");
}

RadialEvaluator evaluator(const ClosedFormFamily& F, const Params& P) {
    return [F, P](double r) { return eval(F, P, r); };
}

double argmax_radius(const ClosedFormFamily& F, const Params& P) {
    switch (F.kind) {
    case FamilyKind::P2:
    case FamilyKind::AubinTalenti:
        // r^delta u is symmetric under r -> 1/r for these families
        return 1.0;
    case FamilyKind::MU0:
        return std::pow(P.p - 1.0, (P.p - 1.0) / (P.p - P.s));
    }
    throw std::logic_error("argmax_radius: unknown family");
}

RadialEvaluator dilate(RadialEvaluator ev, double tau, double delta) {
    if (!(tau > 0.0)) throw std::domain_error("dilate: requires tau > 0");
    const double cu = std::pow(tau, delta);
    const double cd = std::pow(tau, delta + 1.0);
    return [=, ev = std::move(ev)](double r) {
        PointValue v = ev(tau * r);
        return PointValue{cu * v.u, cd * v.du_dr};
    };
}

} // namespace hardyp
