#pragma once

#include <vector>

#include "nlheat/bump.hpp"
#include "nlheat/heat_kernel.hpp"
#include "nlheat/kernels.hpp"
#include "nlheat/nonlocal_op.hpp"

namespace nlheat {

/// Smooth positive comparison function: 1 inside the unit ball, the kernel
/// envelope 1/(|x|^d phi(|x|)) outside radius two, joined by the radial
/// quintic Hermite bridge that matches value and two derivatives at both
/// ends. Products of per-block functions cover the anisotropic case.
class PhiFunction {
  public:
    struct Block {
        int dim = 1;
        int axis_offset = 0;
        std::function<double(double)> outer;     // g(r) = 1/(r^d phi(r))
        std::array<double, 6> bridge{};          // quintic coefficients on [1, 2]
    };

    double operator()(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    double laplacian(const Vec& x) const;
    double block_trace(const Vec& x, int offset, int dim) const;
    Evaluand evaluand() const;

    int dim() const;
    const std::vector<Block>& blocks() const { return blocks_; }

    // radial value / derivatives of one factor
    double radial_value(std::size_t b, double r) const;
    double radial_d1(std::size_t b, double r) const;
    double radial_d2(std::size_t b, double r) const;

    double levy_bound = 0.0;          // fitted c with |L phi| <= c phi
    double bilinear_bound = 0.0;      // fitted c of the B(psi, phi) estimate
    double comparability = 0.0;       // fitted c with phi/c <= P_1 <= c phi

    friend PhiFunction build_phi(const LevyKernelSpec&);
    friend PhiFunction build_phi_anisotropic(const std::vector<LevyKernelSpec>&);

  private:
    std::vector<Block> blocks_;
};

/// Builds the comparison function for one kernel after its assumption
/// checks; the bridge is verified positive.
PhiFunction build_phi(const LevyKernelSpec& spec);

/// Product of per-block comparison functions.
PhiFunction build_phi_anisotropic(const std::vector<LevyKernelSpec>& specs);

struct PhiBoundsReport {
    double levy_ratio = 0.0;       // sup |L phi| / phi over the sample
    double bilinear_ratio = 0.0;   // sup |B(psi, phi)| / (max norm * phi)
    double near_ratio = 0.0;       // sup of the |increment| integral over |y|<=1
    double far_ratio = 0.0;        // and over |y|>=1, each against phi
    bool finite() const;
};

/// Verifies the defining estimates of phi against the operator by direct
/// quadrature on a deterministic point sample; psi battery reuses the
/// solver's bumps restricted to space.
PhiBoundsReport verify_phi_bounds(const PhiFunction& phi, const OperatorSpec& op,
                                  const std::vector<SpaceBump>& psis,
                                  double sample_radius = 24.0);

/// Fits the two-sided comparability constant of phi against a P_1 field.
double phi_comparability(const PhiFunction& phi, const KernelField& p1);

}  // namespace nlheat
