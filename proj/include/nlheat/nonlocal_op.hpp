#pragma once

#include <memory>
#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/kernels.hpp"

namespace nlheat {

struct ApplySettings {
    double delta = 0.0;  // inner cutoff; 0 picks 2h for fields and 1e-3 otherwise
    int shells_per_decade = 32;
    int gl_order = 4;
    double y_max = 0.0;  // 0 picks an adaptive outer radius
};

enum class OperatorVariant { pure_jump, anisotropic, mixed };

/// A Levy-type operator acting on grid functions: a single jump kernel, a
/// sum of per-axis-block jump operators, or jump plus Laplacian.
struct OperatorSpec {
    OperatorVariant variant = OperatorVariant::pure_jump;
    std::vector<LevyKernelSpec> blocks;
    std::vector<int> block_offsets;  // first axis of each block
    ApplySettings settings;

    int dim() const;
    const LevyRadialTable& table(std::size_t block) const;

    static OperatorSpec pure_jump(LevyKernelSpec spec);
    static OperatorSpec anisotropic(std::vector<LevyKernelSpec> specs);
    static OperatorSpec mixed(LevyKernelSpec spec);

  private:
    // copies of the spec share one table cache
    mutable std::shared_ptr<std::vector<std::shared_ptr<LevyRadialTable>>> tables_;
};

/// Function with the side information the quadrature needs: the Hessian
/// trace over an axis block feeds the sub-delta cell, the gradient feeds
/// bilinear forms.
struct Evaluand {
    std::function<double(const Vec&)> value;
    // trace of the Hessian over axes [offset, offset + dim)
    std::function<double(const Vec&, int, int)> block_trace;
    std::function<Vec(const Vec&)> gradient;
    // optional fourth derivative along one axis; one-dimensional blocks use
    // it for the next Taylor order of the sub-delta cell
    std::function<double(const Vec&, int)> axis_fourth;

    double laplacian(const Vec& x, int total_dim) const {
        return block_trace(x, 0, total_dim);
    }
};

Evaluand evaluand_from_field(const Field& u, bool need_laplacian = true,
                             bool need_gradient = false);

/// Second-order increment u(x) - (u(x+y) + u(x-y))/2.
double second_difference(const Field& u, const Vec& x, const Vec& y);

/// Pointwise application of the jump part (plus -Laplacian for the mixed
/// variant, taken from the evaluand). absolute=true integrates |increment|
/// against K instead, the regularity functional of the classical theory.
double apply_at(const OperatorSpec& op, const Evaluand& u, const Vec& x,
                bool absolute = false);

/// Same quadrature restricted to jump sizes r_lo <= |y| <= r_hi (r_hi == 0
/// means unbounded); r_lo below the inner cutoff includes the sub-delta
/// cell. The near/far decompositions of the phi estimates live on this.
double apply_range(const OperatorSpec& op, const Evaluand& u, const Vec& x,
                   double r_lo, double r_hi, bool absolute = false);

/// Full-grid application; the mixed variant adds the Laplacian spectrally.
/// stride > 1 evaluates every stride-th node per axis (others stay zero);
/// pair with the matching node mask when taking sups.
Field apply_levy(const OperatorSpec& op, const Field& u, int jobs = 1, int stride = 1);

/// B(u,v)(x): first differences against K; the mixed variant adds
/// 2 <grad u, grad v>.
double bilinear_at(const OperatorSpec& op, const Evaluand& u, const Evaluand& v,
                   const Vec& x);

/// Full-grid bilinear form (stride as in apply_levy).
Field bilinear_form(const OperatorSpec& op, const Field& u, const Field& v,
                    int jobs = 1, int stride = 1);

/// L(uv) - u Lv - v Lu + B(u,v) at x; zero in exact arithmetic.
double leibniz_residual_at(const OperatorSpec& op, const Evaluand& u, const Evaluand& v,
                           const Vec& x);

struct ResidualReport {
    double sup = 0.0;       // sup |dtP + L P| over the sampled trusted nodes
    double reference = 0.0; // sup of the t-slice, for relative reporting
    double sup_rel = 0.0;
};

/// PDE residual on one time slice; dtP comes from the caller (spectral
/// route) so the two routes stay independent.
ResidualReport heat_residual(const OperatorSpec& op, const Field& P, const Field& dtP,
                             double trusted_radius, int stride = 1, int jobs = 1);

}  // namespace nlheat
