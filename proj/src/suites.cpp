#include "nlheat/suites.hpp"

#include <chrono>
#include <cmath>

#include "nlheat/comparison_phi.hpp"
#include "nlheat/heat_kernel.hpp"
#include "nlheat/io.hpp"
#include "nlheat/mc_oracle.hpp"
#include "nlheat/solver.hpp"

namespace nlheat {

namespace {

constexpr const char* kAnchorSymbolBounds =
    "C1 |xi|^b1 <= m(xi) <= C2 |xi|^b2 for |xi| >= 1";
constexpr const char* kAnchorSemigroup = "P_t * P_s = P_s * P_t = P_{t+s}";
constexpr const char* kAnchorMass = "||P_t||_L1 = 1, P_t > 0";
constexpr const char* kAnchorCPK =
    "C^-1 K(x) <= P_t(x) <= C K(x) for |x| >= 1, t in [eps, T]";
constexpr const char* kAnchorCPt =
    "C^-1 P_t <= P_s <= C P_t everywhere, t, s in [eps, T]";
constexpr const char* kAnchorSlow =
    "C^-1 <= P_1(x)/P_1(y) <= C when rho1 <= |y|/|x| <= rho2";
constexpr const char* kAnchorAlmostDec = "P_1(z) <= C P_1(x) when |x| <= |z|";
constexpr const char* kAnchorTranslation = "P_1(x - y) <= C_R P_1(y) for x in B_R";
constexpr const char* kAnchorClassicalDt = "|dt P_t| <= C P_1 for t in [eps, T]";
constexpr const char* kAnchorClassicalD2 = "|D2 P_t| <= C P_1 for t in [eps, T]";
constexpr const char* kAnchorClassicalInc =
    "int |Lambda P_t(x, y)| K(y) dy <= C P_1(x)";
constexpr const char* kAnchorLphi = "|L phi| <= c phi";
constexpr const char* kAnchorBphi =
    "|B(psi, phi)| <= c max(||psi||, ||grad psi||) phi";
constexpr const char* kAnchorPhiCmp = "c^-1 P_1 <= phi <= c P_1";
constexpr const char* kAnchorRF = "u(x, t) = int P_t(x - y) dmu0(y)";
constexpr const char* kAnchorGrowth = "int P_1 d|mu0| < infinity";
constexpr const char* kAnchorTrace = "int psi u(., t) -> int psi dmu0 as t -> 0+";
constexpr const char* kAnchorVeryWeak = "int int u (dt theta - L theta) dx dt = 0";
constexpr const char* kAnchorSmoothing =
    "e^{-c|t-s|} f(s) <= f(t) <= e^{c|t-s|} f(s), f(t) = int u(., t) P_1";
constexpr const char* kAnchorProduct = "P_t(x) = prod_j P^j_t(x_j)";
constexpr const char* kAnchorSumSymbol = "m(xi) = sum_j m_j(xi_j)";
constexpr const char* kAnchorConvolution = "P_t = P^K_t * G_t";
constexpr const char* kAnchorMixedCmp = "C_t^-1 P^K_t <= P_t <= C_t P^K_t";
constexpr const char* kAnchorEigen = "L cos<xi, .> = m(xi) cos<xi, .>";
constexpr const char* kAnchorOracle =
    "P_t is the density of the jump process at time t";
constexpr const char* kAnchorSelfSim = "P(x, t) = t^{-d/a} P(x t^{-1/a}, 1)";

std::string grid_desc(const Grid& g) {
    return "d=" + std::to_string(g.dim) + " N=" + std::to_string(g.nodes_per_axis) +
           " L=" + std::to_string(g.half_width);
}

// doubles N until exp(-t m) decays below the refusal threshold at Nyquist
Grid buildable_grid(const LevyKernelSpec& spec, double t_min, int dim,
                    double extra_halfwidth = 1.0) {
    Grid g = Grid::defaults(dim);
    g.half_width *= extra_halfwidth;
    g.nodes_per_axis = static_cast<int>(g.nodes_per_axis * extra_halfwidth);
    for (int i = 0; i < 6; ++i) {
        const double m = symbol_eval(spec, {g.nyquist(), 0.0, 0.0}).value;
        if (std::exp(-t_min * m) <= 1e-12) return g;
        g.nodes_per_axis *= 2;
    }
    return g;
}

using Clock = std::chrono::steady_clock;

VerificationReport fresh(const std::string& name, const SuiteConfig& cfg,
                         const Grid& g) {
    VerificationReport rep;
    rep.suite = name;
    rep.spec_name = cfg.spec_text;
    rep.grid_desc = grid_desc(g);
    rep.seed = cfg.seed;
    return rep;
}

VerificationReport suite_symbol(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, cfg.dim);
    const Grid g = Grid::defaults(cfg.dim);
    auto rep = fresh("symbol", cfg, g);

    if (spec.kind == KernelKind::fractional) {
        const double alpha = spec.params.at("alpha");
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double q = 0.1 * std::pow(500.0, k / 19.0);
            Vec xi{0.0, 0.0, 0.0};
            xi[0] = q;
            const auto m = symbol_eval(spec, xi, {.rel_tol = 1e-6});
            worst = std::max(worst,
                             std::abs(m.value - std::pow(q, alpha)) / std::pow(q, alpha));
        }
        rep.checks.push_back(make_check("exact power symbol", "m(xi) = |xi|^alpha",
                                        worst, 1e-5, worst < 1e-5));
    }

    const auto sf = symbol_grid(spec, g);
    double min_value = 0.0;
    for (double v : sf.values) min_value = std::min(min_value, v);
    rep.checks.push_back(make_check("symbol nonnegative", "m(xi) >= 0, m(0) = 0",
                                    -min_value, 1e-12,
                                    min_value >= -1e-12 &&
                                        sf.values[g.center_index()] == 0.0));

    const auto b1 = check_symbol_bounds(sf, spec.scale.beta1, spec.scale.beta2);
    const Grid g2 = g.enlarged();
    const auto sf2 = symbol_grid(spec, g2);
    const auto b2 = check_symbol_bounds(sf2, spec.scale.beta1, spec.scale.beta2);
    const double drift = std::max(std::abs(b2.C1 / b1.C1 - 1.0),
                                  std::abs(b2.C2 / b1.C2 - 1.0));
    rep.checks.push_back(make_check(
        "two-sided symbol bounds", kAnchorSymbolBounds, drift, 0.05,
        b1.finite && b2.finite && drift < 0.05,
        {{"C1", b1.C1}, {"C2", b1.C2}, {"beta1", spec.scale.beta1},
         {"beta2", spec.scale.beta2}}));
    return rep;
}

VerificationReport suite_kernel(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, cfg.dim);
    const Grid g = buildable_grid(spec, 1.0, cfg.dim);
    auto rep = fresh("kernel", cfg, g);

    const auto levy = check_levy_integrability(spec);
    rep.checks.push_back(make_check("Levy integrability",
                                    "int (1 ^ |y|^2) K(y) dy < infinity",
                                    levy.last_change, 1e-6,
                                    levy.finite && levy.last_change < 1e-6,
                                    {{"value", levy.value}}));

    const auto fit = check_scaling(spec);
    rep.checks.push_back(make_check(
        "two-sided weak scaling of the scale function",
        "l1 (R/r)^b1 <= phi(R)/phi(r) <= l2 (R/r)^b2", 0.0, 0.0, fit.pass,
        {{"lambda1", fit.lambda1}, {"lambda2", fit.lambda2}}));

    const auto kf = kernel_fourier_inversion(spec, 1.0, g);
    double minval = 1e300;
    for (double v : kf.field.values()) minval = std::min(minval, v);
    rep.checks.push_back(make_check("kernel mass and positivity", kAnchorMass,
                                    std::abs(kf.mass - 1.0), 1e-4,
                                    std::abs(kf.mass - 1.0) < 1e-4 && minval > 0.0,
                                    {{"mass", kf.mass}, {"min", minval}}));

    if (spec.kind == KernelKind::fractional && spec.params.at("alpha") == 1.0 &&
        cfg.dim == 1) {
        const auto sub = subordinated_fractional_kernel(1.0, 1.0, g);
        const double gap = sup_diff(sub.field, kf.field, sub.trusted_radius());
        rep.checks.push_back(make_check(
            "subordination route agrees with the Fourier route",
            "P(x, 1) = int G(x, s) dmu_1(s)", gap, 1e-4, gap < 1e-4,
            {{"mixture_mass_defect", std::abs(sub.mass + sub.tail_mass - 1.0)}}));
        const auto ss = check_self_similarity(1.5, 2.0, g);
        rep.checks.push_back(make_check("self-similar rescaling exponent",
                                        kAnchorSelfSim, ss.err_inv_alpha, 1e-3,
                                        ss.inverse_exponent_holds() &&
                                            ss.err_inv_alpha < 1e-3,
                                        {{"err_inv_alpha", ss.err_inv_alpha},
                                         {"err_alpha", ss.err_alpha}}));
    }
    return rep;
}

VerificationReport suite_semigroup(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    // very heavy tails need a bigger box before truncation stops dominating
    const double extra = spec.scale.beta1 <= 0.5 ? 2.0 : 1.0;
    const Grid g = buildable_grid(spec, 0.5, 1, extra);
    const double radius = std::min(0.5 * g.half_width, 32.0);
    auto rep = fresh("semigroup", cfg, g);

    const std::vector<std::pair<double, double>> pairs{{0.5, 0.5}, {1.0, 1.0}, {0.5, 2.0}};
    double worst = 0.0;
    for (const auto& [t, s] : pairs) {
        const auto res = check_semigroup(spec, t, s, g, radius);
        worst = std::max(worst, res.l1_error);
        if (t == s && res.commutation != 0.0)
            rep.checks.push_back(make_check("commutation at equal times",
                                            kAnchorSemigroup, res.commutation, 0.0,
                                            false));
    }
    rep.checks.push_back(
        make_check("semigroup identity", kAnchorSemigroup, worst, 1e-3, worst < 1e-3));

    const auto coarse = check_semigroup(spec, 1.0, 1.0, g, radius);
    const auto fine = check_semigroup(spec, 1.0, 1.0, g.enlarged(), radius);
    rep.checks.push_back(make_check("semigroup error decreases under refinement",
                                    kAnchorSemigroup, fine.l1_error, coarse.l1_error,
                                    fine.l1_error < coarse.l1_error,
                                    {{"coarse", coarse.l1_error}, {"fine", fine.l1_error}}));
    return rep;
}

VerificationReport suite_comparability(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.5, 1);
    auto rep = fresh("comparability", cfg, g);
    const std::vector<double> times{0.5, 1.0, 2.0};

    const auto env = check_kernel_levy_comparability(spec, times, g);
    const Grid g2 = g.enlarged();
    const auto env2 = check_kernel_levy_comparability(spec, times, g2);
    const double drift = std::abs(std::log(env2.constant() / env.constant()));
    rep.checks.push_back(make_check(
        "kernel/Levy tail comparability", kAnchorCPK, drift, std::log(1.5),
        env.constant() < 1e6 && drift < std::log(1.5),
        {{"C_lower", env.lower}, {"C_upper", env.upper}, {"C", env.constant()}}));

    // negative control: Gaussian tails collapse against the jump kernel
    {
        const auto gk = gaussian_kernel(1.0, g);
        double lo = 1e300, lo2 = 1e300;
        const auto ratio_low = [&](const KernelField& f, double& dst) {
            const Grid& gg = f.grid();
            for (std::size_t i = 0; i < f.field.size(); ++i) {
                const double r = norm(gg.node(i), gg.dim);
                if (r < 1.0 || r > 0.5 * gg.half_width) continue;
                dst = std::min(dst, f.field[i] / spec.density(gg.node(i)));
            }
        };
        ratio_low(gk, lo);
        const auto gk2 = gaussian_kernel(1.0, g2);
        ratio_low(gk2, lo2);
        rep.checks.push_back(make_check(
            "gaussian negative control diverges", kAnchorCPK, lo2 / lo, 1e-3,
            lo2 < 1e-3 * lo, {{"ratio_small_box", lo}, {"ratio_large_box", lo2}}));
    }

    const SymbolField sf = symbol_grid(spec, g);
    const auto pt = kernel_from_symbol(sf, 0.5, {}, &spec);
    const auto ps = kernel_from_symbol(sf, 2.0, {}, &spec);
    const auto tc = check_time_comparability(pt, ps);
    CheckRecord time_check = make_check(
        "two-time comparability", kAnchorCPt, 0.0, 0.0, std::isfinite(tc.constant()),
        {{"C", tc.constant()}});
    if (spec.kind == KernelKind::fractional && spec.params.at("alpha") == 1.0) {
        // closed Cauchy ratio: s/t at the origin, t/s in the tail
        time_check.residual = std::abs(tc.constant() - 4.0) / 4.0;
        time_check.tolerance = 0.05;
        time_check.pass = time_check.pass && time_check.residual < 0.05;
    }
    rep.checks.push_back(time_check);

    const auto p1 = kernel_from_symbol(sf, 1.0, {}, &spec);
    const double slow = check_slowly_changing(p1, 0.5, 2.0);
    rep.checks.push_back(make_check("P_1 changes slowly", kAnchorSlow, 0.0, 0.0,
                                    std::isfinite(slow), {{"C", slow}}));
    const double dec = check_almost_decreasing(p1);
    rep.checks.push_back(make_check("P_1 is almost decreasing", kAnchorAlmostDec, 0.0,
                                    0.0, std::isfinite(dec), {{"C", dec}}));
    const double tr = check_translation_bound(p1, 1.0);
    rep.checks.push_back(make_check("translates of P_1 are dominated",
                                    kAnchorTranslation, 0.0, 0.0, std::isfinite(tr),
                                    {{"C_R", tr}}));
    return rep;
}

VerificationReport suite_derivative_bounds(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    if (spec.kind != KernelKind::fractional)
        throw std::invalid_argument("derivative-bounds: fractional kernels only");
    const double alpha = spec.params.at("alpha");
    const Grid g = buildable_grid(spec, 0.5, 1);
    auto rep = fresh("derivative-bounds", cfg, g);

    const auto bounds = check_fractional_derivative_bounds(alpha, g);
    const Grid g2{1, g.half_width, 2 * g.nodes_per_axis};
    const auto bounds2 = check_fractional_derivative_bounds(alpha, g2);
    const char* names[6] = {
        "|d_j P_1| <= C (1 ^ 1/|x|) P_1",      "|d_i d_j P_1| <= C (1 ^ 1/|x|^2) P_1",
        "|<x, grad P_1>| <= C (|x| ^ 1) P_1",  "|dt P_t| <= (C/t) P_t",
        "|d_j P_t| <= C (t^-a ^ 1/|x|) P_1",   "|d_i d_j P_t| <= C (t^-2a ^ 1/|x|) P_1"};
    for (int i = 0; i < 6; ++i) {
        const double drift =
            std::abs(bounds2.envelope[i] / bounds.envelope[i] - 1.0);
        rep.checks.push_back(make_check("derivative estimate " + std::to_string(i + 1),
                                        names[i], drift, 0.2,
                                        std::isfinite(bounds.envelope[i]) && drift < 0.2,
                                        {{"C", bounds.envelope[i]}}));
    }
    if (alpha == 1.0) {
        // closed Cauchy oracle for the first estimate: envelope 2 x^2/(1+x^2)
        const double oracle = 2.0 * (1.0 - 1.0 / (1.0 + std::pow(0.5 * g.half_width, 2.0)));
        const double gap = std::abs(bounds.envelope[0] - oracle) / oracle;
        rep.checks.push_back(make_check("gradient envelope against the closed form",
                                        "|P'| = 2|x| P / (1 + x^2)", gap, 0.1,
                                        gap < 0.1, {{"oracle", oracle}}));
    }
    return rep;
}

VerificationReport suite_classical(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.5, 1);
    auto rep = fresh("classical-conditions", cfg, g);
    const auto cc = check_classical_conditions(OperatorSpec::pure_jump(spec),
                                               {0.5, 1.0, 2.0}, g);
    rep.checks.push_back(make_check("time-derivative ratio", kAnchorClassicalDt, 0.0,
                                    0.0, std::isfinite(cc.dt_ratio) && cc.dt_ratio > 0.0,
                                    {{"C", cc.dt_ratio}}));
    rep.checks.push_back(make_check("Hessian ratio", kAnchorClassicalD2, 0.0, 0.0,
                                    std::isfinite(cc.hessian_ratio),
                                    {{"C", cc.hessian_ratio}}));
    rep.checks.push_back(make_check("increment-integral ratio", kAnchorClassicalInc,
                                    0.0, 0.0, std::isfinite(cc.increment_ratio),
                                    {{"C", cc.increment_ratio}}));
    return rep;
}

std::vector<SpaceBump> psi_battery(int dim) {
    std::vector<SpaceBump> psis;
    psis.push_back({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, dim});
    psis.push_back({{1.5, 0.0, 0.0}, {2.0, 2.0, 2.0}, dim});
    psis.push_back({{-2.0, 1.0, 0.0}, {0.5, 0.5, 0.5}, dim});
    return psis;
}

VerificationReport suite_phi(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 1.0, 1);
    auto rep = fresh("phi", cfg, g);

    auto phi = build_phi(spec);
    const auto op = OperatorSpec::pure_jump(spec);
    const auto bounds = verify_phi_bounds(phi, op, psi_battery(1), 0.5 * g.half_width);

    auto op_fine = op;
    op_fine.settings.shells_per_decade = 64;
    op_fine.settings.delta = 5e-4;
    const auto bounds2 = verify_phi_bounds(phi, op_fine, psi_battery(1), 0.5 * g.half_width);
    const double drift = std::abs(bounds2.levy_ratio / bounds.levy_ratio - 1.0);

    rep.checks.push_back(make_check("phi bound on the operator", kAnchorLphi, drift,
                                    0.1, bounds.finite() && drift < 0.1,
                                    {{"c", bounds.levy_ratio}}));
    rep.checks.push_back(make_check("phi bound on the bilinear form", kAnchorBphi, 0.0,
                                    0.0, std::isfinite(bounds.bilinear_ratio),
                                    {{"c", bounds.bilinear_ratio}}));
    rep.checks.push_back(make_check(
        "near and far decompositions individually bounded",
        "int |Lambda phi| K over |y| <= 1 and |y| >= 1, each <= c phi", 0.0, 0.0,
        std::isfinite(bounds.near_ratio) && std::isfinite(bounds.far_ratio),
        {{"near", bounds.near_ratio}, {"far", bounds.far_ratio}}));

    const auto p1 = kernel_fourier_inversion(spec, 1.0, g);
    const double cmp = phi_comparability(phi, p1);
    rep.checks.push_back(make_check("phi comparable to P_1", kAnchorPhiCmp, 0.0, 0.0,
                                    std::isfinite(cmp), {{"c", cmp}}));

    // anisotropic product: the constant adds across blocks
    const auto phi2 = build_phi_anisotropic({spec, spec});
    const auto op2 = OperatorSpec::anisotropic({spec, spec});
    const auto bounds_2d = verify_phi_bounds(phi2, op2, psi_battery(2), 20.0);
    rep.checks.push_back(make_check(
        "product phi constant below the block sum", "|L_nu phi| <= (sum_j c_j) phi",
        bounds_2d.levy_ratio, 2.0 * bounds.levy_ratio * 1.1,
        bounds_2d.levy_ratio <= 2.0 * bounds.levy_ratio * 1.1,
        {{"c_product", bounds_2d.levy_ratio}, {"c_block", bounds.levy_ratio}}));
    return rep;
}

VerificationReport suite_rf_solver(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.3, 1);
    auto rep = fresh("rf-solver", cfg, g);
    const std::vector<double> times{0.5, 1.0};

    const auto mu = RadonMeasure::dirac({0.0, 0.0, 0.0});
    const auto u = solve_rf(mu, spec, times, g);
    const auto pt = kernel_fourier_inversion(spec, times[0], g);
    const double dirac_gap = sup_diff(u.slices[0], pt.field, g.half_width);
    rep.checks.push_back(make_check("point source reproduces the kernel", kAnchorRF,
                                    dirac_gap, 1e-12, dirac_gap < 1e-12));

    double minval = 1e300, mass_gap = 0.0;
    for (std::size_t k = 0; k < u.slices.size(); ++k) {
        for (double v : u.slices[k].values()) minval = std::min(minval, v);
        mass_gap = std::max(mass_gap, std::abs(u.slices[k].integral() - 1.0));
    }
    rep.checks.push_back(make_check("positivity and mass of the solution",
                                    "mu0 >= 0 implies u >= 0; mass is conserved",
                                    mass_gap, 1e-3, minval > 0.0 && mass_gap < 1e-3));

    const auto growth = growth_check(mu, pt);
    rep.checks.push_back(make_check("admissible growth of the datum", kAnchorGrowth,
                                    0.0, 0.0, growth.finite && !growth.diverging_trend,
                                    {{"value", growth.value}}));

    const auto lb = lower_bound_check(u, mu, spec);
    rep.checks.push_back(make_check("representation lower bound is sharp",
                                    "int P_t(x - y) dmu0(y) <= u(x, t)", lb.worst, 1e-6,
                                    lb.pass));
    return rep;
}

VerificationReport suite_trace(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.3, 1);
    auto rep = fresh("trace", cfg, g);

    const double t_min = min_resolvable_time(spec, g);
    std::vector<double> times;
    for (double t = 1.0; t > t_min * 1.05 && times.size() < 8; t *= 0.7)
        times.push_back(t);

    std::vector<SpaceBump> psis;
    psis.push_back({{0.0, 0.0, 0.0}, {2.0, 1.0, 1.0}, 1});
    psis.push_back({{8.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 1});

    const auto recov = trace_check(RadonMeasure::dirac({0.0, 0.0, 0.0}), spec, psis,
                                   times, g);
    rep.checks.push_back(make_check(
        "trace recovery decreasing over the last samples", kAnchorTrace,
        recov.worst_final(), 1.0,
        recov.monotone_tail(std::min<std::size_t>(4, times.size())),
        {{"final", recov.worst_final()}, {"order", recov.fitted_order[0]}}));
    return rep;
}

VerificationReport suite_very_weak(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.3, 1);
    auto rep = fresh("very-weak", cfg, g);
    const auto op = OperatorSpec::pure_jump(spec);
    const auto battery = default_theta_battery(1, 1.0);

    const RfSolver solver(RadonMeasure::dirac({0.0, 0.0, 0.0}), spec, g);
    const auto res = very_weak_residual(solver.provider(), op, battery, g);
    rep.checks.push_back(make_check("distributional identity for the RF solution",
                                    kAnchorVeryWeak, res.worst_rel(), 1e-3,
                                    res.worst_rel() < 1e-3));

    const SliceProvider gaussian_flow = [&](double t) {
        return gaussian_kernel(t + 0.3, g).field;
    };
    const double bad = very_weak_residual(gaussian_flow, op, battery, g).worst_rel();
    rep.checks.push_back(make_check("gaussian flow fails under the jump operator",
                                    kAnchorVeryWeak, bad, 1e-2, bad > 1e-2));
    return rep;
}

VerificationReport suite_smoothing(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.3, 1);
    auto rep = fresh("smoothing", cfg, g);

    auto phi = build_phi(spec);
    const auto op = OperatorSpec::pure_jump(spec);
    const auto bounds = verify_phi_bounds(phi, op, psi_battery(1), 0.75 * g.half_width);
    phi.levy_bound = bounds.levy_ratio;
    const auto p1 = kernel_fourier_inversion(spec, 1.0, g);
    phi.comparability = phi_comparability(phi, p1);

    const std::vector<double> times{0.4, 0.7, 1.0, 1.5, 2.0};
    const auto u = solve_rf(RadonMeasure::dirac({0.0, 0.0, 0.0}), spec, times, g);
    const auto sm = smoothing_ratio_check(u, phi, p1);
    rep.checks.push_back(make_check("two-sided exponential mass bound",
                                    kAnchorSmoothing, sm.worst_margin, 0.0,
                                    sm.phi_ok && sm.p1_ok,
                                    {{"c", phi.levy_bound},
                                     {"comparability", phi.comparability}}));

    const auto duh = duhamel_backward(
        {{{0.0, 0.0, 0.0}, {2.0, 1.0, 1.0}, 1}, {0.5, 0.4}}, spec, 1.0, g, p1);
    rep.checks.push_back(make_check(
        "backward-problem residual and envelope", "dt phi - L phi = source; |phi| <= C t0 P_1",
        duh.residual_forward, 1e-2,
        duh.residual_forward < 1e-2 && std::isfinite(duh.bound_constant),
        {{"C_envelope", duh.bound_constant},
         {"residual_reversed_sign", duh.residual_printed}}));
    return rep;
}

VerificationReport suite_anisotropic(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    Grid g{2, 64.0, 2048};
    // both the factors and the 2-d field must resolve exp(-t m)
    while (std::exp(-symbol_eval(spec, {g.nyquist(), 0.0, 0.0}).value) > 1e-12)
        g.nodes_per_axis *= 2;
    auto rep = fresh("anisotropic", cfg, g);

    const auto prod = anisotropic_kernel({spec, spec}, 1.0, g);
    const SymbolProfile profile(spec, g.nyquist() * 1.5);
    const auto sf = make_symbol_field(g, [&](const Vec& xi) {
        return profile(std::abs(xi[0])) + profile(std::abs(xi[1]));
    });
    const auto direct = kernel_from_symbol(sf, 1.0);
    const double gap = sup_diff(prod.field, direct.field, g.half_width);
    rep.checks.push_back(make_check("product kernel equals the direct inversion",
                                    kAnchorProduct, gap, 1e-4, gap < 1e-4,
                                    {{"mass", prod.mass}}));

    // plane wave through the anisotropic operator
    auto op = OperatorSpec::anisotropic({spec, spec});
    op.settings.delta = 2.0 * g.spacing();
    op.settings.y_max = 4.0 * g.half_width;
    const double q1 = 1.5, q2 = 2.5;
    const Field wave = Field::sample(
        g, [&](const Vec& x) { return std::cos(q1 * x[0] + q2 * x[1]); });
    const double m1 = symbol_eval(spec, {q1, 0.0, 0.0}).value;
    const double m2 = symbol_eval(spec, {q2, 0.0, 0.0}).value;
    const Evaluand ue = evaluand_from_field(wave, true, false);
    double worst = 0.0;
    for (const Vec& x :
         {Vec{0.0, 0.0, 0.0}, Vec{1.3, -0.7, 0.0}, Vec{-2.0, 2.0, 0.0}}) {
        const double lu = apply_at(op, ue, x);
        const double want = (m1 + m2) * std::cos(q1 * x[0] + q2 * x[1]);
        worst = std::max(worst, std::abs(lu - want) / (m1 + m2));
    }
    rep.checks.push_back(make_check("plane waves see the summed symbol",
                                    kAnchorSumSymbol, worst, 1e-3, worst < 1e-3,
                                    {{"m_sum", m1 + m2}}));
    return rep;
}

VerificationReport suite_mixed(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.5, 1);
    auto rep = fresh("mixed", cfg, g);

    const auto mixed = mixed_kernel(spec, 1.0, g);
    const auto jump = kernel_fourier_inversion(spec, 1.0, g);
    RatioEnvelope env{1e300, 0.0};
    for (std::size_t i = 0; i < mixed.field.size(); ++i) {
        if (norm(g.node(i), 1) > mixed.trusted_radius()) continue;
        const double r = mixed.field[i] / jump.field[i];
        env.lower = std::min(env.lower, r);
        env.upper = std::max(env.upper, r);
    }
    rep.checks.push_back(make_check("mixed kernel comparable to the jump kernel",
                                    kAnchorMixedCmp, 0.0, 0.0,
                                    std::isfinite(env.constant()),
                                    {{"C_t", env.constant()}}));

    // convolution identity on the line by a direct spatial sum
    {
        const auto gauss = gaussian_kernel(1.0, g);
        const int n = g.nodes_per_axis;
        const double h = g.spacing();
        double sup = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(g.axis_coord(i)) > mixed.trusted_radius()) continue;
            std::vector<double> terms(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                const int k = i - j + n / 2;
                const double pk =
                    (k >= 0 && k < n)
                        ? jump.field[static_cast<std::size_t>(k)]
                        : jump.field.eval({g.axis_coord(i) - g.axis_coord(j), 0.0, 0.0});
                terms[static_cast<std::size_t>(j)] =
                    pk * gauss.field[static_cast<std::size_t>(j)];
            }
            sup = std::max(sup, std::abs(h * pairwise_sum(terms) -
                                         mixed.field[static_cast<std::size_t>(i)]));
        }
        rep.checks.push_back(make_check("spatial convolution matches the symbol route",
                                        kAnchorConvolution, sup, 1e-4, sup < 1e-4));
    }

    const auto cc = check_classical_conditions(OperatorSpec::mixed(spec),
                                               {0.5, 1.0, 2.0}, g);
    rep.checks.push_back(make_check(
        "classical-solution conditions for the mixed kernel",
        "|dt P_t|, |D2 P_t|, int |Lambda P_t| K all <= C P_1", 0.0, 0.0, cc.finite(),
        {{"dt", cc.dt_ratio}, {"hessian", cc.hessian_ratio},
         {"increments", cc.increment_ratio}}));
    return rep;
}

VerificationReport suite_oracle(const SuiteConfig& cfg) {
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 1.0, 1);
    auto rep = fresh("oracle", cfg, g);

    SimulationPlan plan;
    plan.spec = spec;
    plan.samples = cfg.oracle_samples;
    plan.truncation = 1e-3;
    plan.seed = cfg.seed;
    plan.jobs = cfg.jobs;
    const auto samples = simulate_levy(plan);

    const double bw = 4.0 * g.spacing();
    const auto ref = kernel_fourier_inversion(spec, 1.0, g);
    const auto cmp = compare_density(samples, g, bw, ref, cfg.seed + 1);
    rep.checks.push_back(make_check("simulated density matches the kernel",
                                    kAnchorOracle, cmp.l1_distance, 0.02,
                                    cmp.l1_distance < 0.02,
                                    {{"ci_lower", cmp.ci_lower},
                                     {"ci_upper", cmp.ci_upper}}));

    const auto wrong =
        compare_density(samples, g, bw, kernel_fourier_inversion(spec, 2.0, g),
                        cfg.seed + 1);
    rep.checks.push_back(make_check(
        "wrong-time control exceeds the interval", kAnchorOracle, wrong.l1_distance,
        cmp.ci_upper, wrong.l1_distance > cmp.ci_upper + 0.01,
        {{"distance", wrong.l1_distance}}));
    return rep;
}

VerificationReport suite_eigen(const SuiteConfig& cfg) {
    // folded into "all"; plane-wave identity for the configured kernel
    const auto spec = spec_from_string(cfg.spec_text, 1);
    const Grid g = buildable_grid(spec, 0.5, 1);
    auto rep = fresh("eigen", cfg, g);
    auto op = OperatorSpec::pure_jump(spec);
    op.settings.delta = 2.0 * g.spacing();
    op.settings.y_max = 4.0 * g.half_width;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double frac = std::fmod(0.6180339887498949 * (k + 1), 1.0);
        const double q = 1.0 * std::pow(g.nyquist() / 16.0, frac);
        const Field u =
            Field::sample(g, [q](const Vec& x) { return std::cos(q * x[0]); });
        const double m = symbol_eval(spec, {q, 0.0, 0.0}).value;
        const Evaluand ue = evaluand_from_field(u, true, false);
        for (double x : {0.0, 2.7, -9.1}) {
            const double lu = apply_at(op, ue, {x, 0.0, 0.0});
            worst = std::max(worst, std::abs(lu - m * std::cos(q * x)) / m);
        }
    }
    rep.checks.push_back(
        make_check("plane-wave eigenpairs", kAnchorEigen, worst, 2e-3, worst < 2e-3));
    return rep;
}

using SuiteFn = VerificationReport (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"symbol", suite_symbol},
        {"kernel", suite_kernel},
        {"semigroup", suite_semigroup},
        {"comparability", suite_comparability},
        {"derivative-bounds", suite_derivative_bounds},
        {"classical-conditions", suite_classical},
        {"phi", suite_phi},
        {"rf-solver", suite_rf_solver},
        {"trace", suite_trace},
        {"very-weak", suite_very_weak},
        {"smoothing", suite_smoothing},
        {"anisotropic", suite_anisotropic},
        {"mixed", suite_mixed},
        {"oracle", suite_oracle},
        {"eigen", suite_eigen},
    };
    return table;
}

}  // namespace

nlohmann::json SuiteConfig::to_json() const {
    nlohmann::json j;
    j["spec"] = spec_text;
    j["d"] = dim;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["oracle_samples"] = oracle_samples;
    return j;
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
    SuiteConfig cfg;
    cfg.spec_text = j.value("spec", cfg.spec_text);
    cfg.dim = j.value("d", cfg.dim);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.oracle_samples = j.value("oracle_samples", cfg.oracle_samples);
    return cfg;
}

VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    const auto start = Clock::now();
    if (name == "all") {
        VerificationReport all;
        all.suite = "all";
        all.spec_name = cfg.spec_text;
        all.seed = cfg.seed;
        for (const auto& [suite_name, fn] : suite_table()) {
            if (suite_name == "derivative-bounds" &&
                cfg.spec_text.rfind("fractional", 0) != 0)
                continue;
            VerificationReport sub = fn(cfg);
            if (all.grid_desc.empty()) all.grid_desc = sub.grid_desc;
            for (auto& c : sub.checks) {
                c.name = suite_name + ": " + c.name;
                all.checks.push_back(std::move(c));
            }
        }
        all.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return all;
    }
    for (const auto& [suite_name, fn] : suite_table()) {
        if (suite_name == name) {
            VerificationReport rep = fn(cfg);
            rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
            return rep;
        }
    }
    throw std::invalid_argument("unknown suite: " + name);
}

const std::vector<std::pair<std::string, std::string>>& suite_catalog() {
    static const std::vector<std::pair<std::string, std::string>> catalog = {
        {"symbol", kAnchorSymbolBounds},
        {"kernel", kAnchorMass},
        {"semigroup", kAnchorSemigroup},
        {"comparability", kAnchorCPK},
        {"derivative-bounds", "six weighted derivative envelopes against P_1"},
        {"classical-conditions", kAnchorClassicalDt},
        {"phi", kAnchorLphi},
        {"rf-solver", kAnchorRF},
        {"trace", kAnchorTrace},
        {"very-weak", kAnchorVeryWeak},
        {"smoothing", kAnchorSmoothing},
        {"anisotropic", kAnchorProduct},
        {"mixed", kAnchorConvolution},
        {"oracle", kAnchorOracle},
        {"eigen", kAnchorEigen},
        {"all", "every suite above in sequence"},
    };
    return catalog;
}

}  // namespace nlheat
