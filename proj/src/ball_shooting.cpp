#include "hardyp/ball_shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hardyp/errors.hpp"
#include "hardyp/ground_state.hpp"
#include "hardyp/math.hpp"
#include "hardyp/rk45.hpp"
#include "hardyp/roots.hpp"
#include "hardyp/verify.hpp"

namespace hardyp {

namespace {

struct RadialOde {
    Params P;
    Exponents E;
    bool critical_term = true;

    std::array<double, 2> operator()(double r, const std::array<double, 2>& y) const {
        const double u = y[0];
        const double q = y[1];
        const double du = spow(q, 1.0 / (P.p - 1.0)) *
                          std::pow(r, -(P.N - 1.0) / (P.p - 1.0));
        double coef = P.mu * std::pow(r, -P.p) + P.lambda;
        if (critical_term)
            coef += std::pow(std::fabs(u), E.p_star_s - P.p) * std::pow(r, -P.s);
        const double dq = -coef * spow(u, P.p - 1.0) * std::pow(r, P.N - 1.0);
        return {du, dq};
    }

    double du_of(double r, const std::array<double, 2>& y) const {
        return spow(y[1], 1.0 / (P.p - 1.0)) * std::pow(r, -(P.N - 1.0) / (P.p - 1.0));
    }
};

// advances (r, state) to r_target; returns false when u crossed zero inside,
// leaving (r, state) at the last accepted point before the crossing and
// storing the bracketing radius in r_cross
bool advance(const RadialOde& ode, double& r, std::array<double, 2>& state,
             double r_target, const StepControl& ctl, double& r_cross) {
    bool crossed = false;
    double rc = r_target;
    dopri5<2>(
        ode, r, state, r_target, ctl,
        [&](double, const std::array<double, 2>&, double xb,
            const std::array<double, 2>& yb, const std::array<double, 2>&) {
            if (std::fabs(yb[0]) > 1e120)
                throw numerical_error("integrate_radial: overflow of u");
            if (yb[0] <= 0.0) {
                crossed = true;
                rc = xb;
                return StepAction::stop;
            }
            r = xb;
            state = yb;
            return StepAction::proceed;
        });
    if (!crossed) r = r_target;
    r_cross = rc;
    return !crossed;
}

// full state at radius rq, integrating forward from a cached positive point
std::array<double, 2> state_at(const RadialOde& ode, double r_from,
                               std::array<double, 2> s, double rq,
                               const StepControl& ctl) {
    if (rq <= r_from) return s;
    std::array<double, 2> out = s;
    dopri5<2>(ode, r_from, s, rq, ctl,
              [&](double, const std::array<double, 2>&, double,
                  const std::array<double, 2>& yb, const std::array<double, 2>&) {
                  out = yb;
                  return StepAction::proceed;
              });
    return out;
}

} // namespace

std::pair<double, double> singular_start(double C, double r0, const Params&,
                                         const Exponents& E) {
    if (!(C > 0.0)) throw std::domain_error("singular_start: requires C > 0");
    if (!(r0 > 0.0 && r0 < 1.0))
        throw std::domain_error("singular_start: requires 0 < r0 < 1");
    const double u0 = C * std::pow(r0, -E.gamma1);
    const double du0 = -E.gamma1 * C * std::pow(r0, -E.gamma1 - 1.0);
    return {u0, du0};
}

namespace {

// The leading-order start u = C r^{-gamma1} is valid only while the dropped
// terms of the expansion are small: the critical term contributes
// C^{q-p} r^{delta0} with delta0 = (q-p)(delta-gamma1) and the lambda term
// contributes |lambda| r^p.  Large C pushes the solution's bump toward the
// origin, so the start radius has to move below it; floating-point range of
// (u, flux) caps the descent.
double start_radius(double C, double r0, const Params& P, const Exponents& E,
                    bool critical_term) {
    const double q = E.p_star_s;
    const double A = P.p * E.gamma1 - (P.N - P.p); // < 0
    const double eps = 1e-9;
    double r_start = r0;
    if (critical_term) {
        const double delta0 = (q - P.p) * (E.delta - E.gamma1);
        const double r_nl = std::pow(eps * (delta0 - A) / std::pow(C, q - P.p),
                                     1.0 / delta0);
        r_start = std::fmin(r_start, r_nl);
    }
    if (P.lambda != 0.0) {
        const double r_lam =
            std::pow(eps * (P.p - A) / std::fabs(P.lambda), 1.0 / P.p);
        r_start = std::fmin(r_start, r_lam);
    }
    if (E.gamma1 > 0.0)
        r_start = std::fmax(r_start, std::pow(C * 1e-250, 1.0 / E.gamma1));
    const double flux_exp = P.N - 1.0 - (E.gamma1 + 1.0) * (P.p - 1.0);
    r_start = std::fmax(r_start, std::pow(1e-290, 1.0 / flux_exp));
    r_start = std::fmax(r_start, 1e-120);
    return std::fmin(r_start, r0);
}

} // namespace

RadialShot integrate_radial(double C, const Params& P, const Exponents& E,
                            double r0, double r_end, double ode_tol,
                            std::span<const double> sample_radii, bool critical_term) {
    RadialOde ode{P, E, critical_term};
    StepControl ctl;
    ctl.rel_tol = ode_tol;
    ctl.abs_tol = 1e-300;

    r0 = start_radius(C, r0, P, E, critical_term);
    auto [u0, du0] = singular_start(C, r0, P, E);
    std::array<double, 2> state{u0, std::pow(r0, P.N - 1.0) * spow(du0, P.p - 1.0)};
    double r = r0;

    RadialShot shot;
    auto record = [&](double rr, const std::array<double, 2>& st) {
        shot.profile.r.push_back(rr);
        shot.profile.u.push_back(st[0]);
        shot.profile.du_dr.push_back(ode.du_of(rr, st));
        shot.profile.flux.push_back(st[1]);
    };

    std::vector<double> targets(sample_radii.begin(), sample_radii.end());
    targets.push_back(r_end);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    for (double tgt : targets) {
        if (tgt > r_end) break;
        if (tgt == r) {
            if (!sample_radii.empty()) record(r, state);
            continue;
        }
        if (tgt < r) continue;
        double r_cross = 0.0;
        if (!advance(ode, r, state, tgt, ctl, r_cross)) {
            // bisect the crossing radius from the last positive point
            double lo = r, hi = r_cross;
            const std::array<double, 2> cached = state;
            const double cached_r = r;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (state_at(ode, cached_r, cached, mid, ctl)[0] > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            shot.first_zero = 0.5 * (lo + hi);
            const std::array<double, 2> at_zero =
                state_at(ode, cached_r, cached, lo, ctl);
            shot.r_end = *shot.first_zero;
            shot.u_end = 0.0;
            shot.du_end = ode.du_of(lo, at_zero);
            return shot;
        }
        if (tgt != r_end || !sample_radii.empty()) record(r, state);
    }
    shot.r_end = r;
    shot.u_end = state[0];
    shot.du_end = ode.du_of(r, state);
    return shot;
}

double shoot(double C, const Params& P, const Exponents& E, const ShootOptions& opt) {
    RadialShot shot = integrate_radial(C, P, E, opt.r0, 1.0, opt.ode_tol);
    if (shot.first_zero) return -(1.0 - *shot.first_zero);
    return shot.u_end;
}

std::vector<double> scan_shoot(std::span<const double> Cs, const Params& P,
                               const Exponents& E, const ShootOptions& opt, Exec ex) {
    std::vector<double> out(Cs.size());
    for_index(Cs.size(), ex, [&](std::size_t i) { out[i] = shoot(Cs[i], P, E, opt); });
    return out;
}

WTraceReport w_trace(const RadialProfile& prof, const Params& P, const Exponents& E) {
    WTraceReport rep;
    rep.limit_expected = spow(E.gamma1, P.p - 1.0);
    rep.trace.reserve(prof.r.size());
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        if (!(prof.u[i] > 0.0)) continue;
        const double w = -spow(prof.r[i] * prof.du_dr[i] / prof.u[i], P.p - 1.0);
        rep.trace.emplace_back(prof.r[i], w);
    }
    if (rep.trace.empty()) return rep;
    rep.limit_measured = rep.trace.front().second;

    // convergence rate of |w - limit| over the first decade
    std::vector<double> lx, ly;
    const double r_lo = rep.trace.front().first;
    for (const auto& [r, w] : rep.trace) {
        if (r > 10.0 * r_lo) break;
        const double dev = std::fabs(w - rep.limit_expected);
        if (dev > 0.0) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(dev));
        }
    }
    if (lx.size() >= 3) rep.rate_exponent = fit_line(lx, ly).slope;
    return rep;
}

BallSolution solve_ball(const Params& P, const Exponents& E,
                        std::pair<double, double> C_bracket, const ShootOptions& opt,
                        Exec ex) {
    require_valid(P);
    if (!(P.lambda > 0.0))
        throw std::domain_error("solve_ball: requires lambda > 0 (no positive radial "
                                "solution exists for lambda <= 0)");

    double c_lo = C_bracket.first, c_hi = C_bracket.second;
    if (!(c_lo > 0.0 && c_hi > c_lo)) {
        Params base = P;
        base.lambda = 0.0;
        const double scale = asymptotic_constants(base, E).first;
        c_lo = 1e-3 * scale;
        c_hi = 1e3 * scale;
    }

    std::vector<double> Cs(static_cast<std::size_t>(opt.scan_points));
    const double lf = std::log(c_lo), step = (std::log(c_hi) - lf) / (opt.scan_points - 1);
    for (std::size_t i = 0; i < Cs.size(); ++i)
        Cs[i] = std::exp(lf + step * static_cast<double>(i));
    const std::vector<double> defect = scan_shoot(Cs, P, E, opt, ex);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < Cs.size(); ++i) {
        if (defect[i] == 0.0) {
            roots.push_back(Cs[i]);
            continue;
        }
        if ((defect[i] < 0.0) == (defect[i + 1] < 0.0)) continue;
        BisectOptions bopt;
        bopt.rel_tol = opt.root_tol;
        bopt.max_iter = 200;
        roots.push_back(bisect([&](double c) { return shoot(c, P, E, opt); }, Cs[i],
                               Cs[i + 1], bopt));
    }
    if (roots.empty())
        throw numerical_error("solve_ball: no sign change of the shooting defect in "
                              "the C bracket");
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (std::fabs(roots[i] - roots[0]) > 1e3 * opt.root_tol * roots[0]) {
            std::ostringstream os;
            os << "solve_ball: multiple shooting roots found (uniqueness violation):";
            for (double c : roots) os << ' ' << c;
            throw verification_error(os.str());
        }
    }

    double C = roots.front();
    const int samples = 2001;
    std::vector<double> grid(samples);
    const double x0 = std::log(opt.r0), dx = -x0 / (samples - 1);
    for (int i = 0; i < samples; ++i) grid[i] = std::exp(x0 + dx * i);
    grid.back() = 1.0;

    // Polish against the dense-grid integration itself, aiming a hair above
    // zero so the reported profile reaches r = 1 with a positive boundary
    // value well below the 1e-10 contract.  Bracketed bisection on
    // g(C) = u(1; C) - target; the final state is always a positive-side
    // evaluation (u > 0 up to r = 1, no early crossing).
    const double target = 1e-11;
    auto value = [](const RadialShot& s) {
        return s.first_zero ? -(1.0 - *s.first_zero) : s.u_end;
    };
    RadialShot shot = integrate_radial(C, P, E, opt.r0, 1.0, opt.ode_tol, grid);
    {
        double c_a = C, g_a = value(shot) - target;
        double c_b = c_a;
        RadialShot shot_a = std::move(shot);
        bool bracketed = false;
        for (int k = 1; k <= 40 && !bracketed; ++k) {
            const double off = std::ldexp(1e-9, k); // 2e-9, 4e-9, ... relative
            for (double cand : {C * (1.0 - off), C * (1.0 + off)}) {
                RadialShot s = integrate_radial(cand, P, E, opt.r0, 1.0,
                                                opt.ode_tol, grid);
                const double g = value(s) - target;
                if ((g < 0.0) != (g_a < 0.0)) {
                    c_b = cand;
                    bracketed = true;
                    break;
                }
                if (std::fabs(g) < std::fabs(g_a)) {
                    c_a = cand;
                    g_a = g;
                    shot_a = std::move(s);
                }
            }
        }
        if (bracketed) {
            double c_pos = g_a > 0.0 ? c_a : c_b;
            double c_neg = g_a > 0.0 ? c_b : c_a;
            RadialShot shot_pos = std::move(shot_a);
            if (g_a <= 0.0)
                shot_pos = integrate_radial(c_pos, P, E, opt.r0, 1.0, opt.ode_tol,
                                            grid);
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (c_pos + c_neg);
                if (mid == c_pos || mid == c_neg) break;
                RadialShot s =
                    integrate_radial(mid, P, E, opt.r0, 1.0, opt.ode_tol, grid);
                if (value(s) - target > 0.0) {
                    c_pos = mid;
                    shot_pos = std::move(s);
                } else {
                    c_neg = mid;
                }
            }
            C = c_pos;
            shot = std::move(shot_pos);
        } else {
            C = c_a;
            shot = std::move(shot_a);
        }
    }

    BallSolution sol;
    sol.params = P;
    sol.exps = E;
    sol.amplitude_C = C;
    sol.profile = std::move(shot.profile);
    sol.boundary_slope = shot.first_zero ? shot.du_end
                                         : sol.profile.du_dr.back();
    sol.w_report = w_trace(sol.profile, P, E);
    sol.pohozaev_defect = pohozaev_defect(sol, 1.0, P, E);
    return sol;
}

namespace {

// int f dr over grid[0..i] on a log-uniform grid, composite Simpson with a
// 3/8 block when the interval count is odd
double simpson_log(const std::vector<double>& r, const std::vector<double>& g,
                   std::size_t i_hi) {
    if (i_hi == 0) return 0.0;
    const double h = std::log(r[1] / r[0]);
    std::vector<double> f(i_hi + 1);
    for (std::size_t i = 0; i <= i_hi; ++i) f[i] = g[i] * r[i]; // dr = r dx
    std::size_t n = i_hi;
    double total = 0.0;
    std::size_t start = 0;
    if (n % 2 == 1) {
        if (n < 3) return 0.5 * h * (f[0] + f[1]); // single interval: trapezoid
        total += 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
        start = 3;
    }
    for (std::size_t i = start; i + 2 <= n; i += 2)
        total += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    return total;
}

} // namespace

double pohozaev_defect(const BallSolution& sol, double r, const Params& P,
                       const Exponents& E) {
    const RadialProfile& prof = sol.profile;
    if (prof.r.empty()) return 0.0;
    if (!(r > prof.r.front() && r <= prof.r.back() * (1.0 + 1e-12)))
        throw std::domain_error("pohozaev_defect: r outside profile range");
    auto it = std::upper_bound(prof.r.begin(), prof.r.end(), r * (1.0 + 1e-12));
    std::size_t i = static_cast<std::size_t>(std::distance(prof.r.begin(), it));
    i = i == 0 ? 0 : i - 1;
    const double ri = prof.r[i];
    const double u = prof.u[i], du = prof.du_dr[i];
    const double q = E.p_star_s;

    // lambda int_0^ri u^p t^{N-1} dt: analytic power-law tail below r0 plus
    // Simpson over the sampled profile
    std::vector<double> integ(prof.u.size());
    for (std::size_t k = 0; k < prof.u.size(); ++k)
        integ[k] = std::pow(std::fmax(prof.u[k], 0.0), P.p) *
                   std::pow(prof.r[k], P.N - 1.0);
    const double tail_exp = P.N - P.p * E.gamma1;
    const double tail = std::pow(sol.amplitude_C, P.p) *
                        std::pow(prof.r.front(), tail_exp) / tail_exp;
    const double lhs = P.lambda * (tail + simpson_log(prof.r, integ, i));

    const double rhs = (P.p - 1.0) / P.p * std::pow(std::fabs(du), P.p) *
                           std::pow(ri, static_cast<double>(P.N)) +
                       (P.N - P.p) / P.p * u * spow(du, P.p - 1.0) *
                           std::pow(ri, P.N - 1.0) +
                       (P.mu * std::pow(ri, P.N - P.p) +
                        P.lambda * std::pow(ri, static_cast<double>(P.N))) *
                           std::pow(u, P.p) / P.p +
                       std::pow(u, q) * std::pow(ri, P.N - P.s) / q;

    const double denom = std::fabs(lhs) + std::fabs(rhs);
    if (denom == 0.0) return 0.0;
    return std::fabs(lhs - rhs) / denom;
}

double first_eigenvalue(int N, double p, double mu, double tol) {
    Params P;
    P.N = N;
    P.p = p;
    P.mu = mu;
    P.s = 0.0;
    P.lambda = 0.0;
    require_valid(P);
    const Exponents E = derive(P);

    const double r0 = 1e-6, r_cap = 8.0, ode_tol = 1e-10;
    auto zero_defect = [&](double lam) {
        Params Q = P;
        Q.lambda = lam;
        RadialShot shot =
            integrate_radial(1.0, Q, E, r0, r_cap, ode_tol, {}, /*critical=*/false);
        return (shot.first_zero ? *shot.first_zero : r_cap) - 1.0;
    };

    double hi = 1.0;
    // defect is positive at lambda = 0 and decreasing; grow until negative
    for (int i = 0;; ++i) {
        if (i > 60) throw numerical_error("first_eigenvalue: bracket failure");
        if (zero_defect(hi) < 0.0) break;
        hi *= 2.0;
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (zero_defect(mid) < 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace hardyp
