#pragma once

#include <array>
#include <cmath>

#include "hardyp/errors.hpp"

namespace hardyp {

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-30;
    double h_min = 1e-14; // step floor, relative to the current |x|
    double h_max = 0.0;   // 0 => no cap
    long max_steps = 2000000;
};

enum class StepAction { proceed, stop };

// Dormand-Prince 5(4) embedded pair with FSAL.  Integrates y' = rhs(x, y)
// from x0 to x1 (either direction).  The observer is called after every
// accepted step as observer(x_prev, y_prev, x_new, y_new, rhs_at_prev) and
// may stop the integration early; integration also stops at x1 exactly
// (the last step is clamped).
template <std::size_t Dim, class Rhs, class Observer>
void dopri5(Rhs&& rhs, double x0, std::array<double, Dim> y, double x1,
            const StepControl& ctl, Observer&& observer) {
    using State = std::array<double, Dim>;
    if (x0 == x1) return;
    const double dir = x1 > x0 ? 1.0 : -1.0;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double x = x0;
    State k1 = rhs(x, y);
    // initial step from the magnitude of the right-hand side
    double scale = 0.0;
    for (std::size_t i = 0; i < Dim; ++i)
        scale = std::fmax(scale, std::fabs(k1[i]) / (std::fabs(y[i]) + 1.0));
    double h = dir * std::fmin(std::fabs(x1 - x0),
                               0.01 / std::fmax(scale, 1e-8));
    if (ctl.h_max > 0.0) h = dir * std::fmin(std::fabs(h), ctl.h_max);

    for (long step = 0; step < ctl.max_steps; ++step) {
        bool last = false;
        if (dir * (x + h - x1) >= 0.0) {
            h = x1 - x;
            last = true;
        }
        const double floor = ctl.h_min * std::fabs(x) + 1e-290;
        if (std::fabs(h) < floor) {
            if (last) return; // already within roundoff of the endpoint
            throw numerical_error("dopri5: step-size underflow");
        }

        State y2, y3, y4, y5, y6, y7;
        for (std::size_t i = 0; i < Dim; ++i) y2[i] = y[i] + h * a21 * k1[i];
        State k2 = rhs(x + c2 * h, y2);
        for (std::size_t i = 0; i < Dim; ++i)
            y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = rhs(x + c3 * h, y3);
        for (std::size_t i = 0; i < Dim; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = rhs(x + c4 * h, y4);
        for (std::size_t i = 0; i < Dim; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = rhs(x + c5 * h, y5);
        for (std::size_t i = 0; i < Dim; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        State k6 = rhs(x + h, y6);
        for (std::size_t i = 0; i < Dim; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        State k7 = rhs(x + h, y7);

        double err = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.abs_tol +
                              ctl.rel_tol * (std::fmax(std::fabs(y[i]), std::fabs(y7[i])) +
                                             std::fabs(h * k1[i]));
            err = std::fmax(err, std::fabs(e) / sc);
        }

        if (err <= 1.0) {
            const double x_new = last ? x1 : x + h;
            if (observer(x, y, x_new, y7, k1) == StepAction::stop) return;
            x = x_new;
            y = y7;
            k1 = k7; // FSAL
            if (last) return;
        }
        double fac = 0.9 * std::pow(std::fmax(err, 1e-10), -0.2);
        fac = std::fmin(5.0, std::fmax(0.2, fac));
        h *= fac;
        if (ctl.h_max > 0.0 && std::fabs(h) > ctl.h_max) h = dir * ctl.h_max;
    }
    throw numerical_error("dopri5: max step count exceeded");
}

} // namespace hardyp
