#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlheat/bump.hpp"
#include "nlheat/comparison_phi.hpp"
#include "nlheat/heat_kernel.hpp"

namespace nlheat {

/// Signed initial datum: finitely many atoms plus an optional sampled
/// density on the solve grid.
struct RadonMeasure {
    struct Atom {
        Vec location{0.0, 0.0, 0.0};
        double weight = 1.0;
    };
    std::vector<Atom> atoms;
    std::optional<Field> density;
    std::string name;

    bool nonnegative() const;
    double total_mass() const;

    static RadonMeasure dirac(const Vec& x, double w = 1.0, std::string name = "dirac");
};

/// Solution slices of the representation formula at increasing times.
struct SolutionField {
    Grid grid;
    std::vector<double> times;
    std::vector<Field> slices;
    std::string measure_name;
    bool nonnegative_data = false;

    const Field& at(std::size_t k) const { return slices.at(k); }
};

struct GrowthReport {
    double value = 0.0;
    bool finite = true;
    // dyadic-annulus contributions refusing to decay flag data at the edge
    // of admissibility
    bool diverging_trend = false;
};

/// Integral of P_1 against |mu_0|: atom sum plus density quadrature. Atoms
/// must sit inside the box.
GrowthReport growth_check(const RadonMeasure& mu, const KernelField& p1);

using SliceProvider = std::function<Field(double)>;

/// Representation-formula solver with the symbol table, the reference
/// kernel, and the transformed density built once; slices are one inverse
/// transform plus shifted kernel evaluations each.
class RfSolver {
  public:
    RfSolver(RadonMeasure mu, const LevyKernelSpec& spec, const Grid& g,
             const BuildOptions& opts = {});

    Field slice(double t) const;
    SliceProvider provider() const;
    const KernelField& p1() const { return p1_; }
    const GrowthReport& growth() const { return growth_; }

  private:
    RadonMeasure mu_;
    LevyKernelSpec spec_;
    BuildOptions opts_;
    SymbolField sf_;
    KernelField p1_;
    GrowthReport growth_;
    std::vector<double> density_hat_;
};

/// u(., t) = P_t * mu_0 for each requested time. Refuses when the growth
/// check fails.
SolutionField solve_rf(const RadonMeasure& mu, const LevyKernelSpec& spec,
                       const std::vector<double>& times, const Grid& g,
                       const BuildOptions& opts = {});

/// Largest time at which exp(-t m) still exceeds the given fraction at the
/// Nyquist frequency; trace scans stop there.
double min_resolvable_time(const LevyKernelSpec& spec, const Grid& g,
                           double fraction = 1e-12);

struct TraceReport {
    std::vector<double> times;                    // decreasing
    std::vector<double> targets;                  // integral of psi d mu per psi
    std::vector<std::vector<double>> discrepancy; // [psi][time]
    std::vector<double> fitted_order;             // decay order per psi

    bool monotone_tail(std::size_t last_n = 4) const;
    double worst_final() const;
};

/// Recovery of the initial trace: per test function, the gap between the
/// solution pairing and the measure pairing along times decreasing to the
/// smallest resolvable one.
TraceReport trace_check(const RadonMeasure& mu, const LevyKernelSpec& spec,
                        const std::vector<SpaceBump>& psis,
                        const std::vector<double>& times, const Grid& g);

/// Space-time test function theta(x, t) = psi(x) tau(t).
struct SpaceTimeBump {
    SpaceBump space;
    TimeBump time;
};

/// Five placements/scales of the bump battery inside (0, T); deterministic,
/// no seeds involved.
std::vector<SpaceTimeBump> default_theta_battery(int dim, double T);

struct VeryWeakReport {
    std::vector<double> residual;   // per theta
    std::vector<double> a2_value;   // integral of |u| |L theta|
    std::vector<double> scale;      // a2 plus the dt-theta pairing mass
    double worst_rel() const;
};

/// Residual of the distributional identity against a theta battery:
/// space-time quadrature of u (dt theta - L theta), with L theta evaluated
/// by the operator quadrature.
VeryWeakReport very_weak_residual(const SliceProvider& u, const OperatorSpec& op,
                                  const std::vector<SpaceTimeBump>& battery,
                                  const Grid& g);

struct SmoothingReport {
    bool phi_ok = true;  // two-sided Gronwall bound on the phi pairing
    bool p1_ok = true;   // same for the P_1 pairing with the comparability slack
    double worst_margin = 0.0;
    double t_bad = 0.0, tau_bad = 0.0;
};

/// Two-sided exponential bound on t -> weighted mass of the solution, with
/// the constant delivered by the phi builder.
SmoothingReport smoothing_ratio_check(const SolutionField& u, const PhiFunction& phi,
                                      const KernelField& p1);

struct DuhamelReport {
    std::vector<double> times;
    std::vector<Field> slices;
    double residual_forward = 0.0;   // sup |dt phi - L phi + theta|
    double residual_printed = 0.0;   // sup |dt phi - L phi - theta|
    double bound_constant = 0.0;     // fitted C in |phi| <= C t0 P_1
    double theta_sup = 0.0;
};

/// Backward-problem function phi(x,t) built by the layered kernel
/// convolutions over the source history; checks which sign of the source
/// the printed formula satisfies and the P_1-envelope bound.
DuhamelReport duhamel_backward(const SpaceTimeBump& theta, const LevyKernelSpec& spec,
                               double t0, const Grid& g, const KernelField& p1);

struct LowerBoundReport {
    bool pass = true;
    double worst = 0.0;  // largest value of U - u over nodes and times
    std::size_t node = 0;
    double time = 0.0;
};

/// Nodewise verification that the representation-formula solution stays
/// below the candidate: U <= u + tol.
LowerBoundReport lower_bound_check(const SolutionField& candidate,
                                   const RadonMeasure& mu, const LevyKernelSpec& spec,
                                   double tol = 1e-6);

}  // namespace nlheat
