#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/quadrature.hpp"

namespace nlheat {

double sphere_area(int d);  // |S^{d-1}| for d = 1, 2, 3

/// Spherical mean of cos<xi, y> over directions y at |y| * |xi| = u:
/// cos(u), J0(u), sin(u)/u for d = 1, 2, 3.
double angular_mean_cos(int d, double u);

enum class KernelKind {
    fractional,
    sum_fractional,
    cosine_modulated,
    log_corrected,
    log_damped,
    custom,
};

std::string to_string(KernelKind k);

/// Nondecreasing radial scale with two-sided weak scaling between the
/// exponents beta1 <= beta2; K is comparable to 1/(|x|^d phi(|x|)).
struct ScaleFunction {
    std::function<double(double)> eval;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    std::optional<double> smooth_bound;  // declared bound on |phi'/phi|, |phi''/phi|
};

struct LevyKernelSpec {
    int dim = 1;
    KernelKind kind = KernelKind::custom;
    ScaleFunction scale;
    std::function<double(const Vec&)> density;
    // Radial profile. For the cosine-modulated member this is the angular
    // mean at each radius, which is what every radial reduction needs.
    std::function<double(double)> radial_profile;
    bool radial = true;
    double comparability = 1.0;
    // 0 when the profile is smooth everywhere; a modulated profile reports
    // the radius beyond which it has been replaced by its angular/period
    // mean, so radial quadratures resolve the oscillation only below it.
    double profile_regular_beyond = 0.0;
    std::string name;
    std::map<std::string, double> params;
};

LevyKernelSpec make_fractional(int d, double alpha);
LevyKernelSpec make_sum_fractional(int d, double alpha1, double alpha2);
LevyKernelSpec make_cosine_modulated(int d, double alpha, Vec theta = {1.0, 0.0, 0.0});
LevyKernelSpec make_log_corrected(int d, double eps);
LevyKernelSpec make_log_damped(int d, double alpha);
LevyKernelSpec make_custom(std::string name, int d, std::function<double(double)> profile,
                           ScaleFunction scale, double comparability);

/// Factory keyed by kind name, validating parameter ranges.
LevyKernelSpec make_spec(const std::string& kind, int d,
                         const std::map<std::string, double>& params);

/// The five members with default parameters, all in dimension d.
std::vector<LevyKernelSpec> default_catalog(int d);

/// K(x); zero-point evaluation is a domain error.
double eval_kernel(const LevyKernelSpec& spec, const Vec& x);

/// Normalization of the fractional member: the reciprocal of the defining
/// integral of (1 - cos z_1)/|z|^{d+alpha}, evaluated by quadrature once per
/// (d, alpha) and cached.
double fractional_normalization(int d, double alpha);

struct LevyIntegrability {
    double value = 0.0;         // of the (1 ^ |y|^2)-weighted integral
    bool finite = true;
    double inner_rate = 0.0;    // fitted local exponent of the inner integrand
    double tail_rate = 0.0;     // fitted local exponent of the tail integrand
    double last_change = 0.0;   // relative change between the last two levels
};

/// Splits at |y| = 1; the inner part integrates r^{d+1} * profile in the
/// variable w = log(1/r), which stays power-like even in the borderline
/// beta2 = 2 case. Non-convergence sets the divergence flag, no exception.
LevyIntegrability check_levy_integrability(const LevyKernelSpec& spec,
                                           double rel_tol = 1e-8);

struct ScalingFit {
    bool pass = true;
    double lambda1 = 1.0;  // tightest constants over the sampled pairs
    double lambda2 = 1.0;
    double r_bad = 0.0;
    double R_bad = 0.0;
};

/// Verifies the declared two-sided scaling of phi over log-spaced pairs
/// r <= R in [1e-4, 1e4] and reports the tightest constants.
ScalingFit check_scaling(const LevyKernelSpec& spec, int sample_count = 1000);

struct SmoothBoundFit {
    double first_ratio = 0.0;   // sup |phi'/phi| on [2, r_max]
    double second_ratio = 0.0;  // sup |phi''/phi|
};

/// Samples phi'/phi and phi''/phi by central differences with step 1e-4*r.
SmoothBoundFit check_smooth_bounds(const ScaleFunction& scale, double r_max = 1e4);

/// Radial cumulative integrals shared by the quadrature engine and the
/// Monte Carlo sampler: T(r) = mass of K beyond radius r, M2(r) = second
/// moment of K inside radius r.
class LevyRadialTable {
  public:
    explicit LevyRadialTable(const LevyKernelSpec& spec, double r_lo = 1e-6,
                             double r_hi = 1e9, int per_decade = 280);

    double tail_mass(double r) const;
    double second_moment(double r) const;
    double fourth_moment(double r) const;
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& tail_masses() const { return tail_; }

  private:
    std::vector<double> radii_;   // log-spaced
    std::vector<double> tail_;    // T at each radius
    std::vector<double> moment_;  // M2 at each radius
    std::vector<double> moment4_; // fourth moment inside each radius
    double tail_rate_ = -2.0;     // local power of the tail integrand at r_hi
};

}  // namespace nlheat
