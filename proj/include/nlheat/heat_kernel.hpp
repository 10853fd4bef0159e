#pragma once

#include <string>
#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/kernels.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/symbol.hpp"

namespace nlheat {

enum class Provenance { fourier, subordination, product, convolution, gaussian };

std::string to_string(Provenance p);

/// Heat kernel samples at one time. The Fourier routes produce the
/// periodization of the true kernel, so the discrete mass is pinned at one;
/// truth-sampled routes instead carry an estimate of the mass beyond the
/// box. truncation_bias bounds the periodization images inside |x| <= L/2,
/// the region every comparison trusts.
struct KernelField {
    Field field;
    double time = 1.0;
    Provenance provenance = Provenance::fourier;
    double mass = 0.0;
    double tail_mass = 0.0;
    double truncation_bias = 0.0;
    std::string spec_name;

    const Grid& grid() const { return field.grid(); }
    double operator[](std::size_t i) const { return field[i]; }
    double trusted_radius() const { return 0.5 * field.grid().half_width; }
};

struct BuildOptions {
    double mass_tolerance = 1e-4;
    double nyquist_fraction = 1e-12;  // refusal threshold for exp(-t m) at Nyquist
    QuadSettings quad;
};

/// Inverse Fourier transform of exp(-t m) on the grid. Throws when the
/// symbol has not decayed below the Nyquist threshold (suggesting a finer
/// grid) or when mass/positivity come out broken.
KernelField kernel_fourier_inversion(const LevyKernelSpec& spec, double t, const Grid& g,
                                     const BuildOptions& opts = {},
                                     const SymbolField* precomputed = nullptr);

/// Inversion of exp(-t m) for an explicitly supplied symbol field; the
/// envelope spec, when given, provides the tail model.
KernelField kernel_from_symbol(const SymbolField& sf, double t,
                               const BuildOptions& opts = {},
                               const LevyKernelSpec* envelope_spec = nullptr);

/// Spectral time derivative: inverse transform of -m exp(-t m).
Field kernel_time_derivative(const LevyKernelSpec& spec, double t, const Grid& g,
                             bool with_laplacian_part = false,
                             const SymbolField* precomputed = nullptr);

KernelField gaussian_kernel(double t, const Grid& g);

/// Gaussian mixture over the explicit alpha = 1 Bernstein weight
/// (4 pi)^{-1/2} s^{-3/2} exp(-1/(4s)) ds; other alpha go through Fourier
/// inversion. Times t != 1 enter by self-similar rescaling. The field holds
/// plain kernel values (no periodization); tail_mass estimates the mass
/// outside the box through the same mixture.
KernelField subordinated_fractional_kernel(double alpha, double t, const Grid& g,
                                           double rel_tol = 1e-9);

/// Tensor product of per-block kernels; block dims must sum to g.dim.
KernelField anisotropic_kernel(const std::vector<LevyKernelSpec>& specs, double t,
                               const Grid& g, const BuildOptions& opts = {});

/// Kernel of jump + Laplacian: inverse transform of exp(-t (m + |xi|^2)).
KernelField mixed_kernel(const LevyKernelSpec& spec, double t, const Grid& g,
                         const BuildOptions& opts = {});

struct SemigroupCheck {
    double l1_error = 0.0;      // distance of P_t * P_s to P_{t+s}
    double commutation = 0.0;   // distance between the two convolution orders
};

/// Convolution by a direct spatial sum (tail-extended), compared with the
/// built P_{t+s} over the common trusted region |x| <= compare_radius
/// (0 picks L/2).
SemigroupCheck check_semigroup(const LevyKernelSpec& spec, double t, double s,
                               const Grid& g, double compare_radius = 0.0);

struct RatioEnvelope {
    double lower = 0.0;
    double upper = 0.0;
    double constant() const;  // max(upper, 1/lower)
};

/// sup and inf of P_t(x)/K(x) over 1 <= |x| <= L/2 and the time sample.
RatioEnvelope check_kernel_levy_comparability(const LevyKernelSpec& spec,
                                              const std::vector<double>& times,
                                              const Grid& g);

/// sup and inf of P_t/P_s over the whole box.
RatioEnvelope check_time_comparability(const KernelField& pt, const KernelField& ps);

/// Rate-of-change constant: extremes of P(x)/P(y) over sampled pairs with
/// rho1 <= |y|/|x| <= rho2.
double check_slowly_changing(const KernelField& f, double rho1, double rho2);

/// Smallest C with P(z) <= C P(x) whenever |x| <= |z| on the grid.
double check_almost_decreasing(const KernelField& f);

/// Smallest C with P(x - y) <= C P(y) for x in B_R, y on the grid.
double check_translation_bound(const KernelField& f, double R);

struct DerivativeBounds {
    // envelopes for: (i) grad bound, (ii) Hessian bound, (iii) radial-grad
    // bound, (iv) time-derivative bound, (v) grad in t, (vi) Hessian in t
    std::array<double, 6> envelope{};
    bool finite() const;
};

/// Fractional-kernel derivative estimates with weights
/// (1 ^ 1/|x|), (1 ^ 1/|x|^2), (|x| ^ 1), C/t, (t^-alpha ^ 1/|x|),
/// (t^-2alpha ^ 1/|x|), all against P_1.
DerivativeBounds check_fractional_derivative_bounds(double alpha, const Grid& g,
                                                    const std::vector<double>& times = {
                                                        0.5, 1.0, 2.0});

struct ClassicalConditions {
    double dt_ratio = 0.0;      // sup |dtP_t| / P_1
    double hessian_ratio = 0.0; // sup |D2 P_t| / P_1
    double increment_ratio = 0.0;  // sup of the |increment|-integral over P_1
    bool finite() const;
};

/// The sufficient conditions for the representation formula to produce a
/// classical solution, over t in the given sample.
ClassicalConditions check_classical_conditions(const OperatorSpec& op,
                                               const std::vector<double>& times,
                                               const Grid& g, int stride = 4);

struct SelfSimilarity {
    double err_inv_alpha = 0.0;  // against t^{-d/a} P_1(x t^{-1/a})
    double err_alpha = 0.0;      // against t^{-d/a} P_1(x t^{-a})
    bool inverse_exponent_holds() const { return err_inv_alpha <= err_alpha; }
};

/// Decides empirically which rescaling the fractional kernel satisfies.
SelfSimilarity check_self_similarity(double alpha, double t, const Grid& g);

/// Fits the envelope constant of the field at the box edge and installs the
/// radial tail model c / (r^d phi(r)).
void attach_envelope_tail(KernelField& kf, const LevyKernelSpec& spec);


}  // namespace nlheat
