#include "hflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hardyp/errors.hpp"
#include "hardyp/math.hpp"

namespace hardyp::detail {

namespace {
constexpr int kSeriesTerms = 72;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma_mu(root + d) = sum_{j>=1} coef_j d^j, expanded with the j = 0 term
// removed analytically (it is Gamma_mu(root) = 0).  Binomial series about
// |root|; converges for |d| < |root|, used for |d| <= |root|/4.
std::vector<double> root_series(double root, const Params& P) {
    const double a = std::fabs(root);
    const double sgn = root > 0.0 ? 1.0 : -1.0;
    std::vector<double> c(kSeriesTerms + 1, 0.0);
    double binom_p = 1.0;   // C(p, j)
    double binom_pm = 1.0;  // C(p-1, j)
    double pw1 = (P.p - 1.0) * std::pow(a, P.p);
    double pw2 = sgn * (P.N - P.p) * std::pow(a, P.p - 1.0);
    double sgn_j = 1.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
        binom_p *= (P.p - j + 1.0) / j;
        binom_pm *= (P.p - j) / j;
        pw1 /= a;
        pw2 /= a;
        sgn_j *= sgn;
        c[j] = (pw1 * binom_p - pw2 * binom_pm) * sgn_j;
    }
    return c;
}

double eval_series(const std::vector<double>& c, double x) {
    double acc = 0.0;
    double xj = 1.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
        xj *= x;
        const double term = c[j] * xj;
        acc += term;
        if (std::fabs(term) <= 1e-19 * std::fabs(acc) && j > 3) break;
    }
    return acc;
}
} // namespace

HFlow::HFlow(const Params& P_, const Exponents& E_) : P(P_), E(E_) {
    q = E.p_star_s;
    kappa = (q - P.p) / (P.p * (P.p - 1.0));
    span_left = E.delta - E.gamma1;
    span_right = E.gamma2 - E.delta;
    if (P.p == 2.0) {
        form_ = Form::quadratic;
        zeta1 = zeta2 = kInf;
    } else if (P.mu == 0.0) {
        form_ = Form::mu_zero;
        zeta1 = zeta2 = kInf;
    } else {
        form_ = Form::series;
        cl_ = root_series(E.gamma1, P);
        cr_ = root_series(E.gamma2, P);
        // cr_ holds coefficients in the offset e with sigma = gamma2 - e
        double flip = 1.0;
        for (int j = 1; j <= kSeriesTerms; ++j) {
            flip = -flip;
            cr_[j] *= flip;
        }
        zeta1 = 0.25 * std::fabs(E.gamma1);
        zeta2 = 0.25 * E.gamma2;
    }
}

double HFlow::neg_gamma_direct(double sigma) const {
    return -gamma_mu(sigma, P);
}

double HFlow::neg_gamma_left(double d) const {
    switch (form_) {
    case Form::quadratic:
        return d * ((E.gamma2 - E.gamma1) - d);
    case Form::mu_zero:
        return std::pow(d, P.p - 1.0) * ((P.N - P.p) - (P.p - 1.0) * d);
    case Form::series:
        return -eval_series(cl_, d);
    }
    return 0.0;
}

double HFlow::neg_gamma_right(double e) const {
    switch (form_) {
    case Form::quadratic:
        return e * ((E.gamma2 - E.gamma1) - e);
    case Form::mu_zero:
        return (P.p - 1.0) * std::pow(E.gamma2 - e, P.p - 1.0) * e;
    case Form::series:
        return -eval_series(cr_, e);
    }
    return 0.0;
}

double HFlow::f_direct(double sigma) const {
    if (sigma == 0.0) {
        if (P.p < 2.0) return 0.0;
        if (P.p == 2.0) return kappa * neg_gamma_direct(0.0);
        return kInf;
    }
    const double w = P.p == 2.0 ? 1.0 : std::pow(std::fabs(sigma), 2.0 - P.p);
    return kappa * w * neg_gamma_direct(sigma);
}

double HFlow::f_left(double d) const {
    switch (form_) {
    case Form::quadratic:
        return kappa * neg_gamma_left(d);
    case Form::mu_zero:
        // |sigma|^{2-p} collapses against the root factor: f is linear-ish in d
        return kappa * d * ((P.N - P.p) - (P.p - 1.0) * d);
    case Form::series: {
        const double sigma = E.gamma1 + d;
        return kappa * std::pow(std::fabs(sigma), 2.0 - P.p) * neg_gamma_left(d);
    }
    }
    return 0.0;
}

double HFlow::f_right(double e) const {
    switch (form_) {
    case Form::quadratic:
        return kappa * neg_gamma_right(e);
    case Form::mu_zero:
        return kappa * (P.p - 1.0) * (E.gamma2 - e) * e;
    case Form::series: {
        const double sigma = E.gamma2 - e;
        return kappa * std::pow(sigma, 2.0 - P.p) * neg_gamma_right(e);
    }
    }
    return 0.0;
}

double HFlow::fprime_gamma1() const {
    switch (form_) {
    case Form::quadratic:
        return kappa * (E.gamma2 - E.gamma1);
    case Form::mu_zero:
        return kappa * (P.N - P.p);
    case Form::series:
        return kappa * std::pow(std::fabs(E.gamma1), 2.0 - P.p) * (-cl_[1]);
    }
    return 0.0;
}

double HFlow::fprime_gamma2() const {
    switch (form_) {
    case Form::quadratic:
        return kappa * (E.gamma2 - E.gamma1);
    case Form::mu_zero:
        return kappa * (P.p - 1.0) * E.gamma2;
    case Form::series:
        return kappa * std::pow(E.gamma2, 2.0 - P.p) * (-cr_[1]);
    }
    return 0.0;
}

double HFlow::y_from_neg_gamma(double ng) const {
    if (!(ng > 0.0)) return 0.0;
    return std::pow(q * ng / P.p, 1.0 / (q - P.p));
}

double HFlow::weight_at(Zone zone, Weight w, double x) const {
    switch (zone) {
    case Zone::direct:
        switch (w) {
        case Weight::time: return 1.0;
        case Weight::growth: return E.delta - x;
        case Weight::c1: return x - E.gamma1;
        case Weight::c2: return E.gamma2 - x;
        }
        break;
    case Zone::left:
        switch (w) {
        case Weight::time: return 1.0;
        case Weight::growth: return span_left - x;
        case Weight::c1: return x;
        case Weight::c2: return (E.gamma2 - E.gamma1) - x;
        }
        break;
    case Zone::right:
        switch (w) {
        case Weight::time: return 1.0;
        case Weight::growth: return x - span_right;
        case Weight::c1: return (E.gamma2 - E.gamma1) - x;
        case Weight::c2: return x;
        }
        break;
    }
    return 0.0;
}

double HFlow::f_in_zone(Zone zone, double x) const {
    switch (zone) {
    case Zone::direct: return f_direct(x);
    case Zone::left: return f_left(x);
    case Zone::right: return f_right(x);
    }
    return 0.0;
}

double HFlow::piece(Zone zone, Weight w, double xa, double xb, const QuadOptions& opt) const {
    auto g = [&](double x) { return weight_at(zone, w, x) / f_in_zone(zone, x); };
    if (zone == Zone::right) return integrate(g, xb, xa, opt); // ascending-sigma value
    return integrate(g, xa, xb, opt);
}

double flow_integral(const HFlow& fl, Weight w, double h, double tol) {
    const Exponents& E = fl.E;
    if (!(h > E.gamma1 && h < E.gamma2))
        throw std::domain_error("flow integral: requires gamma1 < h < gamma2");
    if (h == E.delta) return 0.0;
    QuadOptions opt;
    opt.rel_tol = tol;

    const double lo = std::fmin(h, E.delta);
    const double hi = std::fmax(h, E.delta);
    const double bl = E.gamma1 + std::fmin(fl.zeta1, 0.5 * fl.span_left);
    const double br = E.gamma2 - std::fmin(fl.zeta2, 0.5 * fl.span_right);

    std::vector<double> cuts{lo};
    if (lo < bl && bl < hi) cuts.push_back(bl);
    if (fl.P.mu < 0.0 && lo < 0.0 && 0.0 < hi) cuts.push_back(0.0);
    if (lo < br && br < hi) cuts.push_back(br);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double x0 = cuts[i], x1 = cuts[i + 1];
        if (x1 <= bl)
            total += fl.piece(Zone::left, w, x0 - E.gamma1, x1 - E.gamma1, opt);
        else if (x0 >= br)
            total += fl.piece(Zone::right, w, E.gamma2 - x0, E.gamma2 - x1, opt);
        else
            total += fl.piece(Zone::direct, w, x0, x1, opt);
    }
    return h > E.delta ? total : -total;
}

std::pair<double, double> asymptotic_constants_impl(const HFlow& fl, double tol) {
    const Exponents& E = fl.E;
    QuadOptions opt;
    opt.rel_tol = tol;

    const double zu1 = std::fmin(fl.zeta1, 0.5 * fl.span_left);
    const double zu2 = std::fmin(fl.zeta2, 0.5 * fl.span_right);

    double ic1 = fl.piece(Zone::left, Weight::c1, 0.0, zu1, opt);
    {
        const double from = E.gamma1 + zu1;
        if (fl.P.mu < 0.0 && from < 0.0) {
            ic1 += fl.piece(Zone::direct, Weight::c1, from, 0.0, opt);
            ic1 += fl.piece(Zone::direct, Weight::c1, 0.0, E.delta, opt);
        } else {
            ic1 += fl.piece(Zone::direct, Weight::c1, from, E.delta, opt);
        }
    }

    double ic2 = fl.piece(Zone::direct, Weight::c2, E.delta, E.gamma2 - zu2, opt);
    ic2 += fl.piece(Zone::right, Weight::c2, zu2, 0.0, opt);

    return {E.M * std::exp(ic1), E.M * std::exp(ic2)};
}

namespace {

Zone seg_zone(const HNode& a, const HNode& b) {
    if (a.zone == Zone::left && b.zone == Zone::left) return Zone::left;
    if (a.zone == Zone::right && b.zone == Zone::right) return Zone::right;
    return Zone::direct;
}

// Segment endpoints in the coordinate of seg_zone, oriented ascending sigma.
std::pair<double, double> seg_coords(const HNode& a, const HNode& b, Zone z) {
    switch (z) {
    case Zone::left: return {a.off, b.off};
    case Zone::right: return {a.off, b.off};
    case Zone::direct: return {a.h, b.h};
    }
    return {0.0, 0.0};
}

double node_y(const HFlow& fl, const HNode& n) {
    switch (n.zone) {
    case Zone::left: return fl.y_from_neg_gamma(fl.neg_gamma_left(n.off));
    case Zone::right: return fl.y_from_neg_gamma(fl.neg_gamma_right(n.off));
    case Zone::direct: return fl.y_from_neg_gamma(fl.neg_gamma_direct(n.h));
    }
    return 0.0;
}

template <class F>
void run_indexed(std::size_t n, int exec_mode, F&& f) {
    if (exec_mode == 1) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

} // namespace

FlowTable build_flow_table(const Params& P, const Exponents& E, double tol,
                           double t_span, int exec_mode) {
    FlowTable T{HFlow(P, E), tol, {}, 0, 0.0, 0.0, std::nullopt};
    const HFlow& fl = T.flow;
    const double zu1 = std::fmin(fl.zeta1, 0.5 * fl.span_left);
    const double zu2 = std::fmin(fl.zeta2, 0.5 * fl.span_right);

    QuadOptions opt;
    opt.rel_tol = std::fmin(tol, 1e-12);

    std::vector<HNode> nodes;
    auto tag_left = [&](double off) {
        HNode n;
        n.off = off;
        n.h = E.gamma1 + off;
        n.zone = off <= zu1 ? Zone::left : Zone::direct;
        if (n.zone == Zone::direct) n.off = n.h;
        return n;
    };
    auto tag_right = [&](double off) {
        HNode n;
        n.off = off;
        n.h = E.gamma2 - off;
        n.zone = off <= zu2 ? Zone::right : Zone::direct;
        if (n.zone == Zone::direct) n.off = n.h;
        return n;
    };

    { // anchor at delta
        HNode n = tag_left(fl.span_left);
        n.h = E.delta;
        if (n.zone == Zone::direct) n.off = n.h;
        nodes.push_back(n);
    }
    int jl = 0, jr = 0;
    const int initial_levels = 45;
    for (int j = 1; j <= initial_levels; ++j) {
        nodes.push_back(tag_left(fl.span_left * std::ldexp(1.0, -j)));
        jl = j;
    }
    for (int j = 1; j <= initial_levels; ++j) {
        nodes.push_back(tag_right(fl.span_right * std::ldexp(1.0, -j)));
        jr = j;
    }
    if (P.mu < 0.0) {
        // sigma = 0 must be a segment endpoint: the integrands carry an
        // |sigma|^{p-2} factor there, and z changes sign at H = 0
        const double w0 = 0.25 * std::fmin(-E.gamma1, E.delta);
        const int levels = std::clamp(
            static_cast<int>(std::ceil(50.0 / std::fmin(1.0, P.p - 1.0))), 50, 420);
        for (int j = 0; j <= levels; ++j) {
            const double sig = w0 * std::ldexp(1.0, -j);
            HNode n;
            n.h = sig;
            n.off = sig;
            n.zone = Zone::direct;
            nodes.push_back(n);
            n.h = -sig;
            n.off = -sig;
            nodes.push_back(n);
        }
        HNode zero;
        zero.h = zero.off = 0.0;
        zero.zone = Zone::direct;
        nodes.push_back(zero);
    }

    std::sort(nodes.begin(), nodes.end(),
              [](const HNode& a, const HNode& b) { return a.h < b.h; });
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](const HNode& a, const HNode& b) { return a.h == b.h; }),
                nodes.end());

    // segment times, each independent of the others
    std::vector<double> seg(nodes.size() - 1, 0.0);
    run_indexed(seg.size(), exec_mode, [&](std::size_t k) {
        const Zone z = seg_zone(nodes[k], nodes[k + 1]);
        auto [xa, xb] = seg_coords(nodes[k], nodes[k + 1], z);
        seg[k] = fl.piece(z, Weight::time, xa, xb, opt);
    });

    std::size_t anchor = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].h == E.delta) anchor = i;
    nodes[anchor].t = 0.0;
    for (std::size_t i = anchor + 1; i < nodes.size(); ++i)
        nodes[i].t = nodes[i - 1].t + seg[i - 1];
    for (std::size_t i = anchor; i-- > 0;) nodes[i].t = nodes[i + 1].t - seg[i];

    // extend the ladders until the requested time span is covered (or the
    // offsets run out of floating-point range; beyond that the power-law
    // asymptote takes over)
    const int level_cap = 1200;
    while (nodes.front().t > -t_span && jl < level_cap) {
        ++jl;
        const double off = fl.span_left * std::ldexp(1.0, -jl);
        if (off < 1e-280) break;
        HNode n = tag_left(off);
        if (n.h == nodes.front().h || n.h == E.gamma1)
            break; // h no longer resolvable in binary64
        n.t = nodes.front().t -
              fl.piece(Zone::left, Weight::time, n.off, nodes.front().off, opt);
        nodes.insert(nodes.begin(), n);
        ++anchor;
    }
    while (nodes.back().t < t_span && jr < level_cap) {
        ++jr;
        const double off = fl.span_right * std::ldexp(1.0, -jr);
        if (off < 1e-280) break;
        HNode n = tag_right(off);
        if (n.h == nodes.back().h || n.h == E.gamma2) break;
        n.t = nodes.back().t +
              fl.piece(Zone::right, Weight::time, nodes.back().off, n.off, opt);
        nodes.push_back(n);
    }

    run_indexed(nodes.size(), exec_mode,
                [&](std::size_t i) { nodes[i].y = node_y(fl, nodes[i]); });
    nodes[anchor].y = E.M;

    if (P.mu < 0.0) {
        for (const HNode& n : nodes)
            if (n.h == 0.0) T.t_minus = n.t;
    }

    auto [c1, c2] = asymptotic_constants_impl(fl, tol);
    T.C1 = c1;
    T.C2 = c2;
    T.nodes = std::move(nodes);
    T.anchor = anchor;
    return T;
}

double FlowTable::invert_in_segment(std::size_t k, double tau) const {
    const HNode& a = nodes[k];
    const HNode& b = nodes[k + 1];
    const Zone z = seg_zone(a, b);
    auto [xa, xb] = seg_coords(a, b, z);
    const double dt = nodes[k + 1].t - nodes[k].t;
    const double tol_t = std::fmax(1e-13 * (1.0 + std::fabs(nodes[k].t)), 1e-15 * (1.0 + dt));
    if (tau <= tol_t) return xa;
    if (tau >= dt - tol_t) return xb;

    QuadOptions opt;
    opt.rel_tol = 1e-13;
    opt.abs_tol = 1e-15 * (1.0 + dt);
    auto partial = [&](double x) { return flow.piece(z, Weight::time, xa, x, opt); };

    double lo = 0.0, hi = 1.0;                  // normalized coordinate
    auto coord = [&](double xi) { return xa + xi * (xb - xa); };
    double xi = tau / dt;                       // linear initial guess
    for (int it = 0; it < 80; ++it) {
        const double g = partial(coord(xi)) - tau;
        if (std::fabs(g) <= tol_t) break;
        if (g < 0.0) lo = xi; else hi = xi;
        const double fx = flow.f_in_zone(z, coord(xi));
        double next = xi;
        if (fx > 0.0 && std::isfinite(fx)) {
            next = xi - g * fx / std::fabs(xb - xa);
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - xi) <= 1e-16) { xi = next; break; }
        xi = next;
    }
    return coord(xi);
}

EFSampleD FlowTable::sample(double tq) const {
    const Params& P = flow.P;
    const Exponents& E = flow.E;
    EFSampleD out;
    if (tq < nodes.front().t) {
        out.y = C1 * std::exp((E.delta - E.gamma1) * tq);
        const double d = (nodes.front().zone == Zone::left ? nodes.front().off
                                                           : nodes.front().h - E.gamma1) *
                         std::exp(flow.fprime_gamma1() * (tq - nodes.front().t));
        out.h = E.gamma1 + d;
    } else if (tq > nodes.back().t) {
        out.y = C2 * std::exp((E.delta - E.gamma2) * tq);
        const double e = (nodes.back().zone == Zone::right ? nodes.back().off
                                                           : E.gamma2 - nodes.back().h) *
                         std::exp(-flow.fprime_gamma2() * (tq - nodes.back().t));
        out.h = E.gamma2 - e;
    } else {
        auto it = std::upper_bound(nodes.begin(), nodes.end(), tq,
                                   [](double v, const HNode& n) { return v < n.t; });
        std::size_t k = static_cast<std::size_t>(std::distance(nodes.begin(), it));
        k = k == 0 ? 0 : k - 1;
        if (k >= nodes.size() - 1) k = nodes.size() - 2;
        const double x = invert_in_segment(k, tq - nodes[k].t);
        const Zone z = seg_zone(nodes[k], nodes[k + 1]);
        switch (z) {
        case Zone::left:
            out.h = E.gamma1 + x;
            out.y = flow.y_from_neg_gamma(flow.neg_gamma_left(x));
            break;
        case Zone::right:
            out.h = E.gamma2 - x;
            out.y = flow.y_from_neg_gamma(flow.neg_gamma_right(x));
            break;
        case Zone::direct:
            out.h = x;
            out.y = flow.y_from_neg_gamma(flow.neg_gamma_direct(x));
            break;
        }
    }
    out.z = spow(-out.h * out.y, P.p - 1.0);
    return out;
}

} // namespace hardyp::detail
