#pragma once

#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/kernels.hpp"

namespace nlheat {

struct QuadSettings {
    double rel_tol = 1e-7;
    double inner_delta = 0.0;     // 0 picks min(1e-3, 0.1/|xi|)
    int panels_per_decade = 128;  // K spans many decades under mixed growth
    double phase_cutoff = 2e3;    // resolved oscillation up to this phase
    int max_doublings = 3;
};

struct SymbolValue {
    double value = 0.0;
    double uncertainty = 0.0;  // half-width of the attached brackets
    double achieved_tol = 0.0;
    bool tol_met = true;
};

/// m(xi) as the integral of (1 - cos<xi,y>) against K, split at the inner
/// cutoff (Taylor cell with explicit remainder) and at the resolved-phase
/// radius; the far tail enters through its power envelope as a bracket.
SymbolValue symbol_eval(const LevyKernelSpec& spec, const Vec& xi,
                        const QuadSettings& settings = {});

/// Radial profile rho -> m(rho), tabulated once on a log grid and
/// interpolated; the cheap path behind whole-grid symbol evaluation.
class SymbolProfile {
  public:
    SymbolProfile(const LevyKernelSpec& spec, double rho_max,
                  const QuadSettings& settings = {});
    double operator()(double rho) const;
    double achieved_tol() const { return achieved_tol_; }

  private:
    std::vector<double> log_rho_;
    std::vector<double> values_;
    double rho_min_;
    double rho_max_;
    double achieved_tol_ = 0.0;
};

struct SymbolField {
    Grid grid;  // frequency nodes indexed like the primal layout
    std::vector<double> values;
    double achieved_tol = 0.0;
    double inner_delta = 0.0;
    double outer_radius = 0.0;

    double operator[](std::size_t i) const { return values[i]; }
};

/// Samples the symbol on the dual grid of `primal`. Radial kernels go
/// through the tabulated profile; the cosine-modulated member in d >= 2
/// needs the full non-radial quadrature node by node.
SymbolField symbol_grid(const LevyKernelSpec& spec, const Grid& primal,
                        const QuadSettings& settings = {});

/// Symbol field from an explicit evaluator (sums of profiles, closed forms).
SymbolField make_symbol_field(const Grid& primal,
                              const std::function<double(const Vec&)>& m);

struct SymbolBounds {
    double C1 = 0.0;  // inf m / |xi|^beta1 over |xi| >= 1
    double C2 = 0.0;  // sup m / |xi|^beta2
    bool finite = true;
};

SymbolBounds check_symbol_bounds(const SymbolField& field, double beta1, double beta2);

}  // namespace nlheat
