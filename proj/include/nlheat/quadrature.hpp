#pragma once

#include <functional>

namespace nlheat {

using Fn1 = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Gauss-Legendre on [a, b], n in {4, 8, 16}.
double gauss_panel(const Fn1& f, double a, double b, int n = 8);

/// Panels with log-spaced boundaries over [a, b], 0 < a < b, GL-8 each.
/// In oscillatory integrands cap the panel width with max_width (<= 0 means
/// uncapped); panels wider than the cap are subdivided linearly.
double integrate_log(const Fn1& f, double a, double b, int panels_per_decade,
                     double max_width = 0.0);

/// Doubles the panel density until the relative change drops below rel_tol.
QuadResult integrate_log_adaptive(const Fn1& f, double a, double b, double rel_tol,
                                  int start_density = 16, double max_width = 0.0);

/// Globally adaptive bisection (GL-8 vs two GL-8 halves) on [a, b].
QuadResult integrate_adaptive(const Fn1& f, double a, double b, double abs_tol,
                              double rel_tol, int max_depth = 40);

struct TailedResult {
    double value = 0.0;
    bool finite = true;
    double rate = 0.0;  // fitted local power of the integrand at the far end
};

/// Integral of f over [a, inf): log panels on [a, b] plus a power-law
/// remainder fitted at b. A fitted exponent >= -1 flags divergence.
TailedResult integrate_power_tail(const Fn1& f, double a, double b, int density);

/// Integral of f over (0, a], a <= 0.3, in the variable w = log(1/r); the
/// substitution keeps borderline integrands power-like near zero.
TailedResult integrate_to_zero(const Fn1& f, double a, int density);

}  // namespace nlheat
