#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hardyp/closed_forms.hpp"
#include "hardyp/ef_system.hpp"
#include "hardyp/exponents.hpp"
#include "hardyp/ground_state.hpp"
#include "hardyp/math.hpp"
#include "hardyp/rk45.hpp"
#include "support/random_params.hpp"

using namespace hardyp;
using hardyp::testing::ParamSampler;

namespace {

// a state exactly on the V = 0 manifold, parametrized by h in (gamma1, gamma2)
EFState manifold_state(double h, const Params& P, const Exponents& E) {
    EFState st;
    st.t = 0.0;
    st.y = y_from_h_algebraic(h, P, E);
    st.z = spow(-h * st.y, P.p - 1.0);
    return st;
}

} // namespace

TEST_CASE("to_ef / from_ef") {
    ParamSampler gen(301);
    SUBCASE("r = 1 is the identity up to the signed power") {
        Params P = gen.next();
        const Exponents E = derive(P);
        EFState st = to_ef(1.0, 0.7, -0.3, P, E);
        CHECK(st.t == 0.0);
        CHECK(st.y == 0.7);
        CHECK(st.z == doctest::Approx(spow(-0.3, P.p - 1.0)).epsilon(1e-15));
    }
    SUBCASE("closed form MU0 at r = 1 sits at the y maximum M") {
        Params P;
        P.N = 4;
        P.p = 2.0;
        const Exponents E = derive(P);
        auto fam = select(P);
        REQUIRE(fam);
        PointValue v = eval(*fam, P, 1.0);
        EFState st = to_ef(1.0, v.u, v.du_dr, P, E);
        CHECK(st.y == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(st.y == doctest::Approx(E.M).epsilon(1e-15));
    }
    SUBCASE("round-trip property") {
        for (int i = 0; i < 1000; ++i) {
            Params P = gen.next();
            const Exponents E = derive(P);
            const double r = std::exp(gen.uniform(-6.0, 6.0));
            const double u = std::exp(gen.uniform(-2.0, 2.0));
            const double du = gen.uniform(-3.0, 3.0);
            RadialPoint back = from_ef(to_ef(r, u, du, P, E), P, E);
            CHECK(back.r == doctest::Approx(r).epsilon(1e-14));
            CHECK(back.u == doctest::Approx(u).epsilon(1e-14));
            CHECK(back.du_dr == doctest::Approx(du).epsilon(1e-13));
        }
    }
    SUBCASE("domain errors") {
        Params P = gen.next();
        const Exponents E = derive(P);
        CHECK_THROWS_AS(to_ef(0.0, 1.0, 0.0, P, E), std::domain_error);
        CHECK_THROWS_AS(to_ef(1.0, 0.0, 0.0, P, E), std::domain_error);
        CHECK_THROWS_AS(from_ef(EFState{0.0, -1.0, 0.0}, P, E), std::domain_error);
    }
}

TEST_CASE("rhs critical point and origin") {
    ParamSampler gen(302);
    for (int i = 0; i < 30; ++i) {
        Params P = gen.next();
        const Exponents E = derive(P);
        EFState top;
        top.y = E.M;
        top.z = -std::pow(E.delta * E.M, P.p - 1.0);
        auto d = rhs(top, P, E);
        CHECK(std::fabs(d[0]) <= 1e-13 * (1.0 + E.delta * E.M));
        auto zero = rhs(EFState{0.0, 0.0, 0.0}, P, E);
        CHECK(zero[0] == 0.0);
        CHECK(zero[1] == 0.0);
    }
}

TEST_CASE("first integral values") {
    ParamSampler gen(303);
    SUBCASE("origin and critical point") {
        CHECK(first_integral(0.0, 0.0, Params{}, derive(Params{})) == 0.0);
        for (int i = 0; i < 30; ++i) {
            Params P = gen.next();
            const Exponents E = derive(P);
            const double y = E.M;
            const double z = -std::pow(E.delta * E.M, P.p - 1.0);
            const double scale = 1.0 + std::pow(E.M, E.p_star_s);
            CHECK(std::fabs(first_integral(y, z, P, E)) <= 1e-12 * scale);
        }
    }
    SUBCASE("closed-form MU0 trajectory has V = 0") {
        Params P;
        P.N = 5;
        P.p = 3.0;
        P.s = 1.0;
        const Exponents E = derive(P);
        auto fam = select(P);
        REQUIRE(fam);
        for (int i = 0; i < 50; ++i) {
            const double r = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
            PointValue v = eval(*fam, P, r);
            EFState st = to_ef(r, v.u, v.du_dr, P, E);
            CHECK(std::fabs(first_integral(st.y, st.z, P, E)) <= 1e-10);
        }
    }
}

TEST_CASE("conservation along integrated flow") {
    // independent adaptive integration; V must stay constant over a span of 10
    ParamSampler gen(304);
    for (int trial = 0; trial < 6; ++trial) {
        Params P = gen.next();
        const Exponents E = derive(P);
        const double h0 =
            gen.uniform(E.gamma1 + 0.2 * (E.delta - E.gamma1), E.delta);
        EFState st = manifold_state(h0, P, E);
        // off-manifold start as well: perturb z by a small factor
        st.z *= 1.0 + 0.001 * trial;
        const double v0 = first_integral(st.y, st.z, P, E);

        auto field = [&](double, const std::array<double, 2>& s) {
            return rhs(EFState{0.0, s[0], s[1]}, P, E);
        };
        StepControl ctl;
        ctl.rel_tol = 1e-12;
        ctl.abs_tol = 1e-16;
        double drift = 0.0;
        auto watch = [&](double, const std::array<double, 2>&, double,
                         const std::array<double, 2>& yb, const std::array<double, 2>&) {
            drift = std::fmax(drift,
                              std::fabs(first_integral(yb[0], yb[1], P, E) - v0));
            return StepAction::proceed;
        };
        dopri5<2>(field, 0.0, {st.y, st.z}, 5.0, ctl, watch);
        dopri5<2>(field, 0.0, {st.y, st.z}, -5.0, ctl, watch);
        CHECK(drift <= 1e-9 * (1.0 + std::fabs(v0)));
    }
}

TEST_CASE("y stays below M along the V = 0 flow") {
    ParamSampler gen(305);
    for (int trial = 0; trial < 8; ++trial) {
        Params P = gen.next();
        const Exponents E = derive(P);
        EFState st = manifold_state(gen.uniform(E.gamma1 + 0.1, E.delta), P, E);
        auto field = [&](double, const std::array<double, 2>& s) {
            return rhs(EFState{0.0, s[0], s[1]}, P, E);
        };
        StepControl ctl;
        ctl.rel_tol = 1e-12;
        double y_max = st.y;
        auto watch = [&](double, const std::array<double, 2>&, double,
                         const std::array<double, 2>& yb, const std::array<double, 2>&) {
            y_max = std::fmax(y_max, yb[0]);
            return StepAction::proceed;
        };
        dopri5<2>(field, 0.0, {st.y, st.z}, 6.0, ctl, watch);
        CHECK(y_max <= E.M * (1.0 + 1e-9));
    }
}

TEST_CASE("equality case near the maximum") {
    // |y - M| small forces |delta y + spow(z, 1/(p-1))| small, at the sqrt
    // rate set by the curvature f(delta) of the H-flow at the anchor
    ParamSampler gen(306);
    for (int trial = 0; trial < 20; ++trial) {
        Params P = gen.next();
        const Exponents E = derive(P);
        const double fd = h_rhs(E.delta, P, E);
        for (double off : {1e-2, 1e-3, 1e-4}) {
            for (double sgn : {-1.0, 1.0}) {
                const double h = E.delta + sgn * off * (E.gamma2 - E.delta);
                EFState st = manifold_state(h, P, E);
                const double eps_hat = (E.M - st.y) / E.M;
                REQUIRE(eps_hat >= 0.0);
                const double lhs = std::fabs(E.delta * st.y + spow(st.z, 1.0 / (P.p - 1.0)));
                CHECK(lhs <= 1.6 * E.M * std::sqrt(2.0 * fd * eps_hat) + 1e-12);
            }
        }
    }
}

TEST_CASE("h_of") {
    ParamSampler gen(307);
    SUBCASE("critical point gives delta, z = 0 gives 0") {
        for (int i = 0; i < 20; ++i) {
            Params P = gen.next();
            const Exponents E = derive(P);
            EFState top;
            top.y = E.M;
            top.z = -std::pow(E.delta * E.M, P.p - 1.0);
            CHECK(h_of(top, P) == doctest::Approx(E.delta).epsilon(1e-13));
            CHECK(h_of(EFState{0.0, 1.0, 0.0}, P) == 0.0);
        }
    }
    SUBCASE("MU0 closed form: H runs from gamma1 to gamma2") {
        Params P;
        P.N = 5;
        P.p = 3.0;
        P.s = 1.0;
        const Exponents E = derive(P);
        auto fam = select(P);
        REQUIRE(fam);
        auto h_at = [&](double r) {
            PointValue v = eval(*fam, P, r);
            return h_of(to_ef(r, v.u, v.du_dr, P, E), P);
        };
        CHECK(std::fabs(h_at(1e-8) - E.gamma1) <= 1e-5);
        CHECK(std::fabs(h_at(1e8) - E.gamma2) <= 1e-5);
        CHECK(h_at(1e-8) > E.gamma1);
        CHECK(h_at(1e8) < E.gamma2);
    }
}

TEST_CASE("h_rhs") {
    ParamSampler gen(308);
    SUBCASE("vanishes at the roots, positive between") {
        for (int i = 0; i < 20; ++i) {
            Params P = gen.next();
            const Exponents E = derive(P);
            const double scale = 1.0 + std::fabs(P.mu);
            CHECK(std::fabs(h_rhs(E.gamma1, P, E)) <= 1e-11 * scale);
            CHECK(std::fabs(h_rhs(E.gamma2, P, E)) <= 1e-11 * scale);
            for (int k = 0; k < 100; ++k) {
                const double h =
                    gen.uniform(E.gamma1 + 1e-6, E.gamma2 - 1e-6);
                if (h == 0.0) continue;
                CHECK(h_rhs(h, P, E) > 0.0);
            }
        }
    }
    SUBCASE("p = 2 value at delta") {
        Params P;
        P.N = 4;
        P.p = 2.0;
        P.mu = 0.3;
        P.s = 0.7;
        const Exponents E = derive(P);
        const double expect = 0.5 * (E.p_star_s - 2.0) * (E.mu_bar - P.mu);
        CHECK(h_rhs(E.delta, P, E) == doctest::Approx(expect).epsilon(1e-14));
    }
    SUBCASE("domain error at h = 0 for p > 2") {
        Params P;
        P.N = 5;
        P.p = 3.0;
        P.mu = -1.0;
        const Exponents E = derive(P);
        CHECK_THROWS_AS(h_rhs(0.0, P, E), std::domain_error);
        Params Q;
        Q.N = 4;
        Q.p = 2.0;
        Q.mu = -1.0;
        CHECK_NOTHROW(h_rhs(0.0, Q, derive(Q)));
    }
}

TEST_CASE("chain identity on the manifold") {
    ParamSampler gen(309);
    for (int trial = 0; trial < 25; ++trial) {
        Params P = gen.next();
        const Exponents E = derive(P);
        const double q = E.p_star_s;
        for (int k = 0; k < 40; ++k) {
            const double span = E.gamma2 - E.gamma1;
            const double h = gen.uniform(E.gamma1 + 1e-4 * span, E.gamma2 - 1e-4 * span);
            EFState st = manifold_state(h, P, E);
            const double back = h_of(st, P);
            const double lhs = P.p / q * std::pow(st.y, q - P.p) + gamma_mu(back, P);
            CHECK(std::fabs(lhs) <= 1e-10 * (1.0 + std::fabs(P.mu)));
        }
    }
}
