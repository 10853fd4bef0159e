#pragma once

#include <cmath>

#include "nlheat/grid.hpp"
#include "nlheat/nonlocal_op.hpp"

namespace nlheat {

/// The standard mollifier profile exp(-1/(1-s^2)) on |s| < 1 with closed
/// first and second derivatives.
struct Bump {
    static double value(double s) {
        const double d = 1.0 - s * s;
        return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
    }
    static double d1(double s) {
        const double d = 1.0 - s * s;
        if (d <= 0.0) return 0.0;
        return value(s) * (-2.0 * s / (d * d));
    }
    static double d2(double s) {
        const double d = 1.0 - s * s;
        if (d <= 0.0) return 0.0;
        const double a = -2.0 * s / (d * d);
        const double b = -2.0 / (d * d) - 8.0 * s * s / (d * d * d);
        return value(s) * (a * a + b);
    }
};

/// 1 / integral of the profile over [-1, 1]; Bump::value(s) * eta_normalization()
/// is the summability-kernel unit.
double eta_normalization();

/// Tensor bump x -> prod_a Bump((x_a - c_a)/w_a), compactly supported in the
/// axis-aligned box around c.
struct SpaceBump {
    Vec center{0.0, 0.0, 0.0};
    Vec width{1.0, 1.0, 1.0};
    int dim = 1;
    double amplitude = 1.0;

    double operator()(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    double laplacian(const Vec& x) const;
    double sup_norm() const { return amplitude; }
    double grad_sup_norm() const;

    Evaluand evaluand() const;
};

/// t -> Bump((t - center)/width).
struct TimeBump {
    double center = 0.5;
    double width = 0.25;
    double operator()(double t) const { return Bump::value((t - center) / width); }
    double d1(double t) const { return Bump::d1((t - center) / width) / width; }
};

}  // namespace nlheat
