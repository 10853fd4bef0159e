#include "nlheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlheat/fft.hpp"
#include "nlheat/quadrature.hpp"
#include "nlheat/symbol.hpp"

namespace nlheat {

bool RadonMeasure::nonnegative() const {
    for (const auto& a : atoms)
        if (a.weight < 0.0) return false;
    if (density)
        for (double v : density->values())
            if (v < 0.0) return false;
    return true;
}

double RadonMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    if (density) m += density->integral();
    return m;
}

RadonMeasure RadonMeasure::dirac(const Vec& x, double w, std::string name) {
    RadonMeasure mu;
    mu.atoms.push_back({x, w});
    mu.name = std::move(name);
    return mu;
}

GrowthReport growth_check(const RadonMeasure& mu, const KernelField& p1) {
    const Grid& g = p1.grid();
    GrowthReport rep;

    // dyadic annuli track whether far mass decays against P_1
    std::vector<double> annuli(16, 0.0);
    const auto annulus_of = [&](double r) {
        const int k = (r <= 1.0) ? 0 : static_cast<int>(std::floor(std::log2(r)) + 1);
        return std::clamp(k, 0, static_cast<int>(annuli.size()) - 1);
    };

    for (const auto& a : mu.atoms) {
        if (!g.inside(a.location))
            throw std::invalid_argument("growth_check: atom outside the box");
        const double v = std::abs(a.weight) * p1.field.eval(a.location);
        rep.value += v;
        annuli[static_cast<std::size_t>(annulus_of(norm(a.location, g.dim)))] += v;
    }
    if (mu.density) {
        if (!(mu.density->grid() == g))
            throw std::invalid_argument("growth_check: density grid mismatch");
        double cell = 1.0;
        for (int a = 0; a < g.dim; ++a) cell *= g.spacing();
        for (std::size_t i = 0; i < mu.density->size(); ++i) {
            const double v = std::abs((*mu.density)[i]) * p1.field[i] * cell;
            rep.value += v;
            annuli[static_cast<std::size_t>(annulus_of(norm(g.node(i), g.dim)))] += v;
        }
    }
    rep.finite = std::isfinite(rep.value);

    // trend: the last populated annuli refuse to decay
    int last = -1;
    for (int k = static_cast<int>(annuli.size()) - 1; k >= 0; --k)
        if (annuli[static_cast<std::size_t>(k)] > 0.0) {
            last = k;
            break;
        }
    if (last >= 3) {
        const double a2 = annuli[static_cast<std::size_t>(last - 2)];
        const double a1 = annuli[static_cast<std::size_t>(last - 1)];
        const double a0 = annuli[static_cast<std::size_t>(last)];
        rep.diverging_trend = a0 > 0.5 * a1 && a1 > 0.5 * a2 && a2 > 0.0;
    }
    return rep;
}

RfSolver::RfSolver(RadonMeasure mu, const LevyKernelSpec& spec, const Grid& g,
                   const BuildOptions& opts)
    : mu_(std::move(mu)), spec_(spec), opts_(opts) {
    sf_ = symbol_grid(spec, g, opts.quad);
    p1_ = kernel_from_symbol(sf_, 1.0, opts, &spec);
    growth_ = growth_check(mu_, p1_);
    if (!growth_.finite || growth_.diverging_trend)
        throw std::runtime_error("solve_rf: initial datum fails the growth condition");
    if (mu_.density) density_hat_ = centered_forward_transform(g, mu_.density->values());
}

Field RfSolver::slice(double t) const {
    const Grid& g = sf_.grid;
    Field out(g);
    if (!density_hat_.empty()) {
        std::vector<double> hat(density_hat_.size());
        for (std::size_t i = 0; i < hat.size(); ++i)
            hat[i] = density_hat_[i] * std::exp(-t * sf_.values[i]);
        const auto conv = centered_inverse_transform(g, hat);
        std::copy(conv.begin(), conv.end(), out.values().begin());
    }
    if (!mu_.atoms.empty()) {
        auto pt = std::make_shared<KernelField>(kernel_from_symbol(sf_, t, opts_, &spec_));
        for (const auto& a : mu_.atoms) {
            for (std::size_t i = 0; i < out.size(); ++i) {
                Vec diff = g.node(i);
                for (int ax = 0; ax < g.dim; ++ax) diff[ax] -= a.location[ax];
                out[i] += a.weight * pt->field.eval(diff);
            }
        }
        // the slice inherits the shifted envelope tails of the kernel
        TailModel tm;
        tm.eval = [pt, atoms = mu_.atoms, d = g.dim](const Vec& x) {
            double acc = 0.0;
            for (const auto& a : atoms) {
                Vec diff = x;
                for (int ax = 0; ax < d; ++ax) diff[ax] -= a.location[ax];
                acc += a.weight * pt->field.eval(diff);
            }
            return acc;
        };
        out.set_tail(std::move(tm));
    }
    return out;
}

SliceProvider RfSolver::provider() const {
    return [this](double t) { return slice(t); };
}

SolutionField solve_rf(const RadonMeasure& mu, const LevyKernelSpec& spec,
                       const std::vector<double>& times, const Grid& g,
                       const BuildOptions& opts) {
    const RfSolver solver(mu, spec, g, opts);
    SolutionField u;
    u.grid = g;
    u.measure_name = mu.name;
    u.nonnegative_data = mu.nonnegative();
    for (double t : times) {
        u.times.push_back(t);
        u.slices.push_back(solver.slice(t));
    }
    return u;
}

double min_resolvable_time(const LevyKernelSpec& spec, const Grid& g, double fraction) {
    const double m_nyq = symbol_eval(spec, {g.nyquist(), 0.0, 0.0}).value;
    return std::log(1.0 / fraction) / m_nyq;
}

bool TraceReport::monotone_tail(std::size_t last_n) const {
    for (const auto& row : discrepancy) {
        if (row.size() < last_n) return false;
        for (std::size_t k = row.size() - last_n; k + 1 < row.size(); ++k)
            if (!(row[k + 1] <= row[k])) return false;
    }
    return true;
}

double TraceReport::worst_final() const {
    double w = 0.0;
    for (const auto& row : discrepancy) w = std::max(w, row.back());
    return w;
}

TraceReport trace_check(const RadonMeasure& mu, const LevyKernelSpec& spec,
                        const std::vector<SpaceBump>& psis,
                        const std::vector<double>& times, const Grid& g) {
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const SolutionField u = solve_rf(mu, spec, sorted, g);

    TraceReport rep;
    rep.times = sorted;
    double cell = 1.0;
    for (int a = 0; a < g.dim; ++a) cell *= g.spacing();

    for (const auto& psi : psis) {
        double target = 0.0;
        for (const auto& a : mu.atoms) target += a.weight * psi(a.location);
        if (mu.density) {
            std::vector<double> terms(mu.density->size());
            for (std::size_t i = 0; i < terms.size(); ++i)
                terms[i] = (*mu.density)[i] * psi(g.node(i)) * cell;
            target += pairwise_sum(terms);
        }
        rep.targets.push_back(target);

        std::vector<double> row;
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            std::vector<double> terms(u.slices[k].size());
            for (std::size_t i = 0; i < terms.size(); ++i)
                terms[i] = u.slices[k][i] * psi(g.node(i)) * cell;
            row.push_back(std::abs(pairwise_sum(terms) - target));
        }
        rep.discrepancy.push_back(row);

        // fitted decay order over the last samples
        const auto& r = rep.discrepancy.back();
        const std::size_t n = r.size();
        if (n >= 2 && r[n - 1] > 0.0 && r[n - 2] > 0.0) {
            rep.fitted_order.push_back(std::log(r[n - 2] / r[n - 1]) /
                                       std::log(sorted[n - 2] / sorted[n - 1]));
        } else {
            rep.fitted_order.push_back(0.0);
        }
    }
    return rep;
}

std::vector<SpaceTimeBump> default_theta_battery(int dim, double T) {
    // five placements/scales; time supports stay above 0.3 T, where default
    // grids still resolve every catalog kernel
    std::vector<SpaceTimeBump> battery;
    const auto vec = [](double v) { return Vec{v, v, v}; };
    battery.push_back({{vec(0.0), vec(1.0), dim}, {0.60 * T, 0.28 * T}});
    battery.push_back({{vec(0.0), vec(3.0), dim}, {0.60 * T, 0.25 * T}});
    battery.push_back({{Vec{2.0, 0.0, 0.0}, vec(1.5), dim}, {0.52 * T, 0.20 * T}});
    battery.push_back({{Vec{-1.5, 1.0, 0.0}, vec(0.75), dim}, {0.70 * T, 0.18 * T}});
    battery.push_back({{Vec{0.5, -0.5, 0.5}, vec(2.0), dim}, {0.58 * T, 0.22 * T}});
    return battery;
}

double VeryWeakReport::worst_rel() const {
    double w = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i)
        w = std::max(w, std::abs(residual[i]) / std::max(scale[i], 1e-300));
    return w;
}

VeryWeakReport very_weak_residual(const SliceProvider& u, const OperatorSpec& op,
                                  const std::vector<SpaceTimeBump>& battery,
                                  const Grid& g) {
    VeryWeakReport rep;
    double cell = 1.0;
    for (int a = 0; a < g.dim; ++a) cell *= g.spacing();

    for (const auto& theta : battery) {
        // factorized theta: L theta(x,t) = tau(t) (L psi)(x), computed once
        auto local = op;
        if (local.settings.delta <= 0.0) local.settings.delta = 2.0 * g.spacing();
        if (local.settings.y_max <= 0.0)
            local.settings.y_max = std::max(4.0 * g.half_width, 256.0);
        const Evaluand pe = theta.space.evaluand();
        Field lpsi(g), psi(g);
        parallel_for(g.total_nodes(), 2, [&](std::size_t i) {
            const Vec x = g.node(i);
            lpsi[i] = apply_at(local, pe, x);
            psi[i] = theta.space(x);
        });

        // beyond-box correction of the L-theta pairing on the line: psi
        // vanishes there, but L psi does not, and solutions with a declared
        // tail model still pair against it
        std::vector<double> out_x, out_lpsi;
        if (g.dim == 1) {
            const double L = g.half_width;
            for (int side : {-1, 1}) {
                double r = L;
                while (r < 64.0 * L) {
                    const double next = r * 1.25;
                    const double mid = side * 0.5 * (r + next);
                    out_x.push_back(mid);
                    out_lpsi.push_back(apply_at(local, pe, {mid, 0.0, 0.0}) * (next - r));
                    r = next;
                }
            }
        }

        // trapezoid in t across the bump support: the integrand vanishes to
        // all orders at the ends, so the rule is spectrally accurate
        const int nt = 33;
        const double t0 = theta.time.center - theta.time.width;
        const double t1 = theta.time.center + theta.time.width;
        double residual = 0.0, a2 = 0.0, dt_mass = 0.0;
        for (int k = 0; k <= nt; ++k) {
            const double t = t0 + (t1 - t0) * k / nt;
            const double wt = (k == 0 || k == nt) ? 0.5 : 1.0;
            const Field ut = u(t);
            std::vector<double> weak(ut.size()), abs2(ut.size()), absdt(ut.size());
            const double tau = theta.time(t);
            const double dtau = theta.time.d1(t);
            for (std::size_t i = 0; i < ut.size(); ++i) {
                weak[i] = ut[i] * (dtau * psi[i] - tau * lpsi[i]) * cell;
                abs2[i] = std::abs(ut[i]) * std::abs(tau * lpsi[i]) * cell;
                absdt[i] = std::abs(ut[i]) * std::abs(dtau * psi[i]) * cell;
            }
            const double dt = (t1 - t0) / nt;
            double outside = 0.0, outside_abs = 0.0;
            if (ut.tail().eval) {
                for (std::size_t j = 0; j < out_x.size(); ++j) {
                    const double v =
                        ut.tail().eval({out_x[j], 0.0, 0.0}) * tau * out_lpsi[j];
                    outside -= v;
                    outside_abs += std::abs(v);
                }
            }
            residual += wt * dt * (pairwise_sum(weak) + outside);
            a2 += wt * dt * (pairwise_sum(abs2) + outside_abs);
            dt_mass += wt * dt * pairwise_sum(absdt);
        }
        rep.residual.push_back(residual);
        rep.a2_value.push_back(a2);
        rep.scale.push_back(a2 + dt_mass);
    }
    return rep;
}

SmoothingReport smoothing_ratio_check(const SolutionField& u, const PhiFunction& phi,
                                      const KernelField& p1) {
    if (!u.nonnegative_data)
        throw std::invalid_argument("smoothing_ratio_check: solution must be nonnegative");
    const Grid& g = u.grid;
    double cell = 1.0;
    for (int a = 0; a < g.dim; ++a) cell *= g.spacing();

    const Field phi_field = Field::sample(g, [&](const Vec& x) { return phi(x); });
    std::vector<double> gvals, fvals;
    for (const auto& slice : u.slices) {
        std::vector<double> tg(slice.size()), tf(slice.size());
        for (std::size_t i = 0; i < slice.size(); ++i) {
            tg[i] = slice[i] * phi_field[i] * cell;
            tf[i] = slice[i] * p1.field[i] * cell;
        }
        gvals.push_back(pairwise_sum(tg));
        fvals.push_back(pairwise_sum(tf));
    }

    SmoothingReport rep;
    const double c = phi.levy_bound;
    const double slack = 2.0 * std::log(std::max(phi.comparability, 1.0));
    for (std::size_t i = 0; i < u.times.size(); ++i) {
        for (std::size_t j = 0; j < u.times.size(); ++j) {
            if (i == j) continue;
            const double dt = std::abs(u.times[i] - u.times[j]);
            const double dg = std::abs(std::log(gvals[i]) - std::log(gvals[j]));
            const double df = std::abs(std::log(fvals[i]) - std::log(fvals[j]));
            const double margin = dg - c * dt;
            if (margin > rep.worst_margin) {
                rep.worst_margin = margin;
                rep.t_bad = u.times[i];
                rep.tau_bad = u.times[j];
            }
            if (dg > c * dt + 1e-9) rep.phi_ok = false;
            if (df > c * dt + slack + 1e-9) rep.p1_ok = false;
        }
    }
    return rep;
}

DuhamelReport duhamel_backward(const SpaceTimeBump& theta, const LevyKernelSpec& spec,
                               double t0, const Grid& g, const KernelField& p1) {
    if (theta.time.center + theta.time.width > t0)
        throw std::invalid_argument("duhamel_backward: source must live inside [0, t0)");
    const SymbolField sf = symbol_grid(spec, g);
    const Field psi = Field::sample(g, [&](const Vec& x) { return theta.space(x); });
    const auto psi_hat = centered_forward_transform(g, psi.values());

    DuhamelReport rep;
    rep.theta_sup = theta.space.sup_norm();

    const int n_slices = 9;
    const auto op = OperatorSpec::pure_jump(spec);
    auto local = op;
    local.settings.delta = 2.0 * g.spacing();
    local.settings.y_max = std::max(4.0 * g.half_width, 256.0);

    for (int k = 0; k < n_slices; ++k) {
        const double t = t0 * (k + 0.25) / n_slices;
        const double w = t0 - t;

        // phi_hat(xi, t) = psi_hat(xi) int_0^w exp(-(w - s) m) tau(s) ds
        const double s_lo = std::max(0.0, theta.time.center - theta.time.width);
        const double s_hi = std::min(w, theta.time.center + theta.time.width);
        std::vector<double> phi_hat(psi_hat.size(), 0.0);
        std::vector<double> dt_hat(psi_hat.size(), 0.0);
        if (s_hi > s_lo) {
            const int ns = 64;
            for (int j = 0; j <= ns; ++j) {
                const double s = s_lo + (s_hi - s_lo) * j / ns;
                const double wt = ((j == 0 || j == ns) ? 0.5 : 1.0) * (s_hi - s_lo) / ns;
                const double tau = theta.time(s);
                for (std::size_t i = 0; i < phi_hat.size(); ++i)
                    phi_hat[i] += wt * tau * std::exp(-(w - s) * sf.values[i]);
            }
        }
        // d/dt of the layered integral: m phi_hat - psi_hat tau(t0 - t)
        const double tau_rev = theta.time(w);
        for (std::size_t i = 0; i < phi_hat.size(); ++i) {
            phi_hat[i] *= psi_hat[i];
            dt_hat[i] = sf.values[i] * phi_hat[i];
        }

        Field phi_t(g), dt_field(g);
        {
            const auto v = centered_inverse_transform(g, phi_hat);
            std::copy(v.begin(), v.end(), phi_t.values().begin());
            const auto dv = centered_inverse_transform(g, dt_hat);
            std::copy(dv.begin(), dv.end(), dt_field.values().begin());
        }
        for (std::size_t i = 0; i < dt_field.size(); ++i)
            dt_field[i] -= tau_rev * psi[i];

        // residual against the quadrature route for L phi
        const Evaluand pe = evaluand_from_field(phi_t, true, false);
        const double trusted = 0.5 * g.half_width;
        for (std::size_t i = 0; i < phi_t.size(); ++i) {
            const auto idx = g.unflatten(i);
            bool on = true;
            for (int a = 0; a < g.dim; ++a) on = on && (idx[a] % 8 == 0);
            if (!on) continue;
            const Vec x = g.node(i);
            if (norm(x, g.dim) > trusted) continue;
            const double lphi = apply_at(local, pe, x);
            // the layered formula solves dt phi - L phi = -theta(x, t0 - t);
            // for a time-symmetric source both time arguments coincide
            const double th_rev = theta.space(x) * tau_rev;
            const double th = theta.space(x) * theta.time(t);
            rep.residual_forward =
                std::max(rep.residual_forward, std::abs(dt_field[i] - lphi + th_rev));
            rep.residual_printed =
                std::max(rep.residual_printed, std::abs(dt_field[i] - lphi - th));
            rep.bound_constant = std::max(
                rep.bound_constant, std::abs(phi_t[i]) / (t0 * p1.field[i]));
        }
        rep.times.push_back(t);
        rep.slices.push_back(std::move(phi_t));
    }
    return rep;
}

LowerBoundReport lower_bound_check(const SolutionField& candidate,
                                   const RadonMeasure& mu, const LevyKernelSpec& spec,
                                   double tol) {
    const SolutionField u = solve_rf(mu, spec, candidate.times, candidate.grid);
    LowerBoundReport rep;
    for (std::size_t k = 0; k < u.times.size(); ++k) {
        for (std::size_t i = 0; i < u.slices[k].size(); ++i) {
            const double gap = u.slices[k][i] - candidate.slices[k][i];
            if (gap > rep.worst) {
                rep.worst = gap;
                rep.node = i;
                rep.time = u.times[k];
            }
        }
    }
    rep.pass = rep.worst <= tol;
    return rep;
}

}  // namespace nlheat
