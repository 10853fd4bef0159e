#include "nlheat/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nlheat/fft.hpp"
#include "nlheat/quadrature.hpp"

namespace nlheat {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::fourier: return "fourier";
        case Provenance::subordination: return "subordination";
        case Provenance::product: return "product";
        case Provenance::convolution: return "convolution";
        case Provenance::gaussian: return "gaussian";
    }
    return "fourier";
}

namespace {

double symbol_at_axis_nyquist(const SymbolField& sf) {
    const Grid& g = sf.grid;
    auto idx = g.unflatten(g.center_index());
    idx[0] = 0;  // |xi| = nyquist along the first axis, the smallest boundary radius
    return sf.values[g.flatten(idx)];
}

KernelField invert_symbol(const LevyKernelSpec* spec, const SymbolField& sf, double t,
                          const Grid& g, const BuildOptions& opts, Provenance prov,
                          bool add_laplacian_symbol) {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel: time must be positive");

    double m_nyq = symbol_at_axis_nyquist(sf);
    if (add_laplacian_symbol) m_nyq += g.nyquist() * g.nyquist();
    const double tail_fraction = std::exp(-t * m_nyq);
    if (tail_fraction > opts.nyquist_fraction) {
        const int suggested = 2 * g.nodes_per_axis;
        throw std::runtime_error(
            "heat kernel: exp(-t m) has not decayed at the Nyquist frequency (fraction " +
            std::to_string(tail_fraction) + "); rebuild with N >= " +
            std::to_string(suggested) + " or a larger time");
    }

    std::vector<double> damped(sf.values.size());
    for (std::size_t i = 0; i < damped.size(); ++i) {
        double m = sf.values[i];
        if (add_laplacian_symbol) {
            const double q = norm(g.dual_node(i), g.dim);
            m += q * q;
        }
        damped[i] = std::exp(-t * m);
    }

    KernelField kf;
    kf.field = Field(g);
    auto vals = centered_inverse_transform(g, damped);
    std::copy(vals.begin(), vals.end(), kf.field.values().begin());
    kf.time = t;
    kf.provenance = prov;
    kf.mass = kf.field.integral();
    kf.spec_name = spec ? spec->name : "symbol";

    for (double v : kf.field.values())
        if (!(v > 0.0))
            throw std::runtime_error("heat kernel: inversion lost positivity");
    if (std::abs(kf.mass - 1.0) > opts.mass_tolerance)
        throw std::runtime_error("heat kernel: discrete mass " + std::to_string(kf.mass) +
                                 " violates the tolerance");
    if (spec) attach_envelope_tail(kf, *spec);
    return kf;
}

}  // namespace

void attach_envelope_tail(KernelField& kf, const LevyKernelSpec& spec) {
    const Grid& g = kf.grid();
    const double lo = 0.7 * g.half_width, hi = 0.95 * g.half_width;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < kf.field.size(); ++i) {
        const double r = norm(g.node(i), g.dim);
        if (r < lo || r > hi) continue;
        ratios.push_back(kf.field[i] * std::pow(r, g.dim) * spec.scale.eval(r));
    }
    if (ratios.empty()) return;
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    const double c = ratios[ratios.size() / 2];
    const int d = g.dim;
    const auto scale = spec.scale.eval;
    kf.field.set_tail(TailModel::radial(
        [c, d, scale](double r) { return c / (std::pow(r, d) * scale(r)); }));
    const double image = 1.5 * g.half_width;
    kf.truncation_bias = 2.0 * d * c / (std::pow(image, d) * scale(image));
}

KernelField kernel_fourier_inversion(const LevyKernelSpec& spec, double t, const Grid& g,
                                     const BuildOptions& opts,
                                     const SymbolField* precomputed) {
    if (spec.dim != g.dim)
        throw std::invalid_argument("kernel_fourier_inversion: dimension mismatch");
    SymbolField local;
    const SymbolField* sf = precomputed;
    if (!sf) {
        local = symbol_grid(spec, g, opts.quad);
        sf = &local;
    }
    return invert_symbol(&spec, *sf, t, g, opts, Provenance::fourier, false);
}

KernelField kernel_from_symbol(const SymbolField& sf, double t, const BuildOptions& opts,
                               const LevyKernelSpec* envelope_spec) {
    return invert_symbol(envelope_spec, sf, t, sf.grid, opts, Provenance::fourier, false);
}

Field kernel_time_derivative(const LevyKernelSpec& spec, double t, const Grid& g,
                             bool with_laplacian_part, const SymbolField* precomputed) {
    SymbolField local;
    const SymbolField* sf = precomputed;
    if (!sf) {
        local = symbol_grid(spec, g);
        sf = &local;
    }
    std::vector<double> damped(sf->values.size());
    for (std::size_t i = 0; i < damped.size(); ++i) {
        double m = sf->values[i];
        if (with_laplacian_part) {
            const double q = norm(g.dual_node(i), g.dim);
            m += q * q;
        }
        damped[i] = -m * std::exp(-t * m);
    }
    Field out(g);
    auto vals = centered_inverse_transform(g, damped);
    std::copy(vals.begin(), vals.end(), out.values().begin());
    return out;
}

KernelField gaussian_kernel(double t, const Grid& g) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_kernel: time must be positive");
    KernelField kf;
    kf.field = Field::sample(g, [&](const Vec& x) {
        const double r = norm(x, g.dim);
        return std::pow(4.0 * pi * t, -0.5 * g.dim) * std::exp(-r * r / (4.0 * t));
    });
    kf.field.set_tail(TailModel::radial([t, d = g.dim](double r) {
        return std::pow(4.0 * pi * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
    }));
    kf.time = t;
    kf.provenance = Provenance::gaussian;
    kf.mass = kf.field.integral();
    kf.spec_name = "gaussian";
    return kf;
}

namespace {

// P_1 of the alpha = 1 kernel at radius u, as the Gaussian mixture over the
// Bernstein weight, integrated in v = log s where the integrand is
// exp(-(d+1)v/2 - (u^2+1)exp(-v)/4) up to the constant (4 pi)^{-(d+1)/2}.
double cauchy_mixture_value(int d, double u, double rel_tol) {
    const double r2 = u * u + 1.0;
    const double v_star = std::log(r2 / (2.0 * (d + 1)));
    const double lo = v_star - 10.0;
    const double hi = v_star + 40.0 + 80.0 / (d + 1);
    const auto integrand = [&](double v) {
        return std::exp(-0.5 * (d + 1) * v - r2 * std::exp(-v) / 4.0);
    };
    const auto q = integrate_adaptive(integrand, lo, hi, 0.0, rel_tol, 32);
    return std::pow(4.0 * pi, -0.5 * (d + 1)) * q.value;
}

// mass of the alpha = 1 kernel beyond coordinate |x_a| > b on one axis
double cauchy_mixture_axis_tail(double b, double rel_tol) {
    const auto integrand = [&](double v) {
        const double s = std::exp(v);
        return std::exp(-0.5 * v - std::exp(-v) / 4.0) * std::erfc(b / (2.0 * std::sqrt(s)));
    };
    const auto q = integrate_adaptive(integrand, -10.0, 60.0, 0.0, rel_tol, 32);
    return std::pow(4.0 * pi, -0.5) * q.value;
}

}  // namespace

KernelField subordinated_fractional_kernel(double alpha, double t, const Grid& g,
                                           double rel_tol) {
    if (alpha != 1.0)
        throw std::invalid_argument(
            "subordinated_fractional_kernel: only alpha = 1 has the explicit mixture; "
            "use the Fourier route otherwise");
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");

    KernelField kf;
    kf.field = Field::sample(g, [&](const Vec& x) {
        const double u = norm(x, g.dim) / t;
        return std::pow(t, -g.dim) * cauchy_mixture_value(g.dim, u, rel_tol);
    });
    kf.field.set_tail(TailModel::radial([d = g.dim, t, rel_tol](double r) {
        return std::pow(t, -d) * cauchy_mixture_value(d, r / t, rel_tol);
    }));
    kf.time = t;
    kf.provenance = Provenance::subordination;
    kf.mass = kf.field.integral();
    kf.tail_mass = g.dim * cauchy_mixture_axis_tail(g.half_width / t, rel_tol);
    kf.spec_name = "fractional:alpha=1";
    return kf;
}

KernelField anisotropic_kernel(const std::vector<LevyKernelSpec>& specs, double t,
                               const Grid& g, const BuildOptions& opts) {
    int total = 0;
    for (const auto& s : specs) total += s.dim;
    if (total != g.dim)
        throw std::invalid_argument("anisotropic_kernel: block dims must sum to d");

    std::vector<KernelField> factors;
    std::vector<int> offsets;
    int off = 0;
    for (const auto& s : specs) {
        const Grid fg{s.dim, g.half_width, g.nodes_per_axis};
        factors.push_back(kernel_fourier_inversion(s, t, fg, opts));
        offsets.push_back(off);
        off += s.dim;
    }

    KernelField kf;
    kf.field = Field(g);
    for (std::size_t i = 0; i < kf.field.size(); ++i) {
        const auto idx = g.unflatten(i);
        double prod = 1.0;
        for (std::size_t b = 0; b < factors.size(); ++b) {
            const Grid& fg = factors[b].grid();
            std::array<int, 3> fidx{0, 0, 0};
            for (int a = 0; a < fg.dim; ++a) fidx[a] = idx[offsets[b] + a];
            prod *= factors[b].field[fg.flatten(fidx)];
        }
        kf.field[i] = prod;
    }

    auto shared = std::make_shared<std::vector<KernelField>>(std::move(factors));
    auto shared_off = std::make_shared<std::vector<int>>(std::move(offsets));
    TailModel tm;
    tm.eval = [shared, shared_off](const Vec& x) {
        double prod = 1.0;
        for (std::size_t b = 0; b < shared->size(); ++b) {
            Vec sub{0.0, 0.0, 0.0};
            const Grid& fg = (*shared)[b].grid();
            for (int a = 0; a < fg.dim; ++a) sub[a] = x[(*shared_off)[b] + a];
            prod *= (*shared)[b].field.eval(sub);
        }
        return prod;
    };
    kf.field.set_tail(std::move(tm));

    kf.time = t;
    kf.provenance = Provenance::product;
    kf.mass = 1.0;
    {
        double m = 1.0, bias = 0.0;
        for (const auto& f : *shared) {
            m *= f.mass;
            bias += f.truncation_bias;
        }
        kf.mass = m;
        kf.truncation_bias = bias;
    }
    kf.spec_name = "product";
    return kf;
}

KernelField mixed_kernel(const LevyKernelSpec& spec, double t, const Grid& g,
                         const BuildOptions& opts) {
    const SymbolField sf = symbol_grid(spec, g, opts.quad);
    KernelField kf = invert_symbol(&spec, sf, t, g, opts, Provenance::convolution, true);
    return kf;
}

SemigroupCheck check_semigroup(const LevyKernelSpec& spec, double t, double s,
                               const Grid& g, double compare_radius) {
    if (g.dim != 1)
        throw std::invalid_argument("check_semigroup: implemented on the line");
    const SymbolField sf = symbol_grid(spec, g);
    const BuildOptions opts;
    const KernelField pt = invert_symbol(&spec, sf, t, g, opts, Provenance::fourier, false);
    const KernelField ps = invert_symbol(&spec, sf, s, g, opts, Provenance::fourier, false);
    const KernelField pts =
        invert_symbol(&spec, sf, t + s, g, opts, Provenance::fourier, false);

    const double radius = compare_radius > 0.0 ? compare_radius : 0.5 * g.half_width;
    const int n = g.nodes_per_axis;
    const double h = g.spacing();

    const auto convolve_at = [&](const KernelField& a, const KernelField& b, int i) {
        std::vector<double> terms(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const int k = i - j + n / 2;
            double bval;
            if (k >= 0 && k < n) {
                bval = b.field[static_cast<std::size_t>(k)];
            } else {
                bval = b.field.eval({g.axis_coord(i) - g.axis_coord(j), 0.0, 0.0});
            }
            terms[static_cast<std::size_t>(j)] = a.field[static_cast<std::size_t>(j)] * bval;
        }
        return h * pairwise_sum(terms);
    };

    SemigroupCheck out;
    std::vector<double> err_ts, err_comm;
    for (int i = 0; i < n; ++i) {
        if (std::abs(g.axis_coord(i)) > radius) continue;
        const double c1 = convolve_at(pt, ps, i);
        const double c2 = (t == s) ? c1 : convolve_at(ps, pt, i);
        err_ts.push_back(std::abs(c1 - pts.field[static_cast<std::size_t>(i)]));
        err_comm.push_back(std::abs(c1 - c2));
    }
    out.l1_error = h * pairwise_sum(err_ts);
    out.commutation = h * pairwise_sum(err_comm);
    return out;
}

double RatioEnvelope::constant() const {
    if (!(lower > 0.0)) return std::numeric_limits<double>::infinity();
    return std::max(upper, 1.0 / lower);
}

RatioEnvelope check_kernel_levy_comparability(const LevyKernelSpec& spec,
                                              const std::vector<double>& times,
                                              const Grid& g) {
    if (g.half_width < 8.0)
        throw std::invalid_argument("comparability: box half-width must be at least 8");
    const SymbolField sf = symbol_grid(spec, g);
    RatioEnvelope env{std::numeric_limits<double>::infinity(), 0.0};
    for (double t : times) {
        const KernelField pt =
            invert_symbol(&spec, sf, t, g, BuildOptions{}, Provenance::fourier, false);
        for (std::size_t i = 0; i < pt.field.size(); ++i) {
            const Vec x = g.node(i);
            const double r = norm(x, g.dim);
            if (r < 1.0 || r > 0.5 * g.half_width) continue;
            const double ratio = pt.field[i] / spec.density(x);
            env.lower = std::min(env.lower, ratio);
            env.upper = std::max(env.upper, ratio);
        }
    }
    return env;
}

RatioEnvelope check_time_comparability(const KernelField& pt, const KernelField& ps) {
    if (!(pt.grid() == ps.grid()))
        throw std::invalid_argument("time comparability: grids differ");
    RatioEnvelope env{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < pt.field.size(); ++i) {
        const double ratio = pt.field[i] / ps.field[i];
        env.lower = std::min(env.lower, ratio);
        env.upper = std::max(env.upper, ratio);
    }
    return env;
}

double check_slowly_changing(const KernelField& f, double rho1, double rho2) {
    if (!(rho1 > 0.0 && rho1 <= rho2))
        throw std::invalid_argument("slowly changing: need 0 < rho1 <= rho2");
    const Grid& g = f.grid();
    double worst = 1.0;
    const int n_factors = 9;
    for (std::size_t i = 0; i < f.field.size(); ++i) {
        const Vec x = g.node(i);
        const double r = norm(x, g.dim);
        if (r == 0.0) continue;
        if (r * std::max(rho2, 1.0) > g.half_width) continue;
        const double px = f.field[i];
        for (int k = 0; k < n_factors; ++k) {
            const double fac =
                rho1 * std::pow(rho2 / rho1, static_cast<double>(k) / (n_factors - 1));
            Vec y{0.0, 0.0, 0.0};
            for (int a = 0; a < g.dim; ++a) y[a] = x[a] * fac;
            const double py = f.field.eval(y);
            if (py <= 0.0 || px <= 0.0) continue;
            worst = std::max({worst, px / py, py / px});
        }
    }
    return worst;
}

double check_almost_decreasing(const KernelField& f) {
    const Grid& g = f.grid();
    std::vector<std::pair<double, double>> by_radius;  // (|x|, P)
    by_radius.reserve(f.field.size());
    for (std::size_t i = 0; i < f.field.size(); ++i)
        by_radius.emplace_back(norm(g.node(i), g.dim), f.field[i]);
    std::sort(by_radius.begin(), by_radius.end());
    double running_min = std::numeric_limits<double>::infinity();
    double c = 1.0;
    for (const auto& [r, p] : by_radius) {
        if (std::isfinite(running_min)) c = std::max(c, p / running_min);
        running_min = std::min(running_min, p);
    }
    return c;
}

double check_translation_bound(const KernelField& f, double R) {
    const Grid& g = f.grid();
    double c = 0.0;
    // x on a coarse sub-lattice of B_R, y over the grid
    const int per_axis = 9;
    std::vector<Vec> xs;
    if (R == 0.0) {
        xs.push_back({0.0, 0.0, 0.0});
    } else {
        std::vector<double> coords(per_axis);
        for (int k = 0; k < per_axis; ++k)
            coords[k] = -R + 2.0 * R * k / (per_axis - 1);
        if (g.dim == 1) {
            for (double a : coords) xs.push_back({a, 0.0, 0.0});
        } else if (g.dim == 2) {
            for (double a : coords)
                for (double b : coords)
                    if (a * a + b * b <= R * R) xs.push_back({a, b, 0.0});
        } else {
            for (double a : coords)
                for (double b : coords)
                    for (double cc : coords)
                        if (a * a + b * b + cc * cc <= R * R) xs.push_back({a, b, cc});
        }
    }
    for (std::size_t i = 0; i < f.field.size(); ++i) {
        const Vec y = g.node(i);
        const double py = f.field[i];
        if (py <= 0.0) continue;
        for (const Vec& x : xs) {
            Vec diff{0.0, 0.0, 0.0};
            for (int a = 0; a < g.dim; ++a) diff[a] = x[a] - y[a];
            const double pxy = f.field.eval(diff);
            c = std::max(c, pxy / py);
        }
    }
    return c;
}

bool DerivativeBounds::finite() const {
    for (double e : envelope)
        if (!std::isfinite(e)) return false;
    return true;
}

DerivativeBounds check_fractional_derivative_bounds(double alpha, const Grid& g,
                                                    const std::vector<double>& times) {
    const LevyKernelSpec spec = make_fractional(g.dim, alpha);
    const SymbolField sf = symbol_grid(spec, g);
    const BuildOptions opts;
    const KernelField p1 =
        invert_symbol(&spec, sf, 1.0, g, opts, Provenance::fourier, false);

    DerivativeBounds out;
    const double trusted = 0.5 * g.half_width;

    const auto sup_ratio = [&](const Field& num, const Field& den_weighted,
                               auto&& weight) {
        double sup = 0.0;
        for (std::size_t i = 0; i < num.size(); ++i) {
            const Vec x = g.node(i);
            const double r = norm(x, g.dim);
            if (r > trusted) continue;
            const double w = weight(r);
            if (w <= 0.0) continue;
            sup = std::max(sup, std::abs(num[i]) / (w * den_weighted[i]));
        }
        return sup;
    };

    // time 1 estimates
    for (int a = 0; a < g.dim; ++a) {
        const Field d1 = field_derivative(p1.field, a);
        out.envelope[0] = std::max(
            out.envelope[0],
            sup_ratio(d1, p1.field, [](double r) { return std::min(1.0, 1.0 / r); }));
        for (int b = a; b < g.dim; ++b) {
            const Field d2 = field_second_derivative(p1.field, a, b);
            out.envelope[1] = std::max(
                out.envelope[1], sup_ratio(d2, p1.field, [](double r) {
                    return std::min(1.0, 1.0 / (r * r));
                }));
        }
    }
    {
        Field radial(g);
        std::vector<Field> grads;
        for (int a = 0; a < g.dim; ++a) grads.push_back(field_derivative(p1.field, a));
        for (std::size_t i = 0; i < radial.size(); ++i) {
            const Vec x = g.node(i);
            double dot = 0.0;
            for (int a = 0; a < g.dim; ++a) dot += x[a] * grads[static_cast<std::size_t>(a)][i];
            radial[i] = dot;
        }
        out.envelope[2] = sup_ratio(radial, p1.field, [](double r) {
            return r == 0.0 ? 0.0 : std::min(r, 1.0);
        });
    }

    // time family estimates
    for (double t : times) {
        const KernelField pt =
            invert_symbol(&spec, sf, t, g, opts, Provenance::fourier, false);
        const Field dt = kernel_time_derivative(spec, t, g, false, &sf);
        double sup_iv = 0.0;
        for (std::size_t i = 0; i < dt.size(); ++i) {
            if (norm(g.node(i), g.dim) > trusted) continue;
            sup_iv = std::max(sup_iv, std::abs(dt[i]) * t / pt.field[i]);
        }
        out.envelope[3] = std::max(out.envelope[3], sup_iv);

        for (int a = 0; a < g.dim; ++a) {
            const Field d1 = field_derivative(pt.field, a);
            out.envelope[4] = std::max(
                out.envelope[4], sup_ratio(d1, p1.field, [&](double r) {
                    return std::min(std::pow(t, -alpha), r == 0.0 ? 1e300 : 1.0 / r);
                }));
            for (int b = a; b < g.dim; ++b) {
                const Field d2 = field_second_derivative(pt.field, a, b);
                out.envelope[5] = std::max(
                    out.envelope[5], sup_ratio(d2, p1.field, [&](double r) {
                        return std::min(std::pow(t, -2.0 * alpha),
                                        r == 0.0 ? 1e300 : 1.0 / r);
                    }));
            }
        }
    }
    return out;
}

bool ClassicalConditions::finite() const {
    return std::isfinite(dt_ratio) && std::isfinite(hessian_ratio) &&
           std::isfinite(increment_ratio);
}

ClassicalConditions check_classical_conditions(const OperatorSpec& op,
                                               const std::vector<double>& times,
                                               const Grid& g, int stride) {
    if (op.blocks.size() != 1)
        throw std::invalid_argument("classical conditions: single-kernel operators");
    const bool mixed = op.variant == OperatorVariant::mixed;
    const LevyKernelSpec& spec = op.blocks[0];
    const SymbolField sf = symbol_grid(spec, g);
    const BuildOptions opts;
    const KernelField p1 = invert_symbol(&spec, sf, 1.0, g, opts,
                                         mixed ? Provenance::convolution : Provenance::fourier,
                                         mixed);

    ClassicalConditions out;
    const double trusted = 0.5 * g.half_width;
    for (double t : times) {
        const KernelField pt = invert_symbol(
            &spec, sf, t, g, opts, mixed ? Provenance::convolution : Provenance::fourier,
            mixed);
        const Field dt = kernel_time_derivative(spec, t, g, mixed, &sf);
        for (std::size_t i = 0; i < dt.size(); ++i) {
            if (norm(g.node(i), g.dim) > trusted) continue;
            out.dt_ratio = std::max(out.dt_ratio, std::abs(dt[i]) / p1.field[i]);
        }
        for (int a = 0; a < g.dim; ++a)
            for (int b = a; b < g.dim; ++b) {
                const Field d2 = field_second_derivative(pt.field, a, b);
                for (std::size_t i = 0; i < d2.size(); ++i) {
                    if (norm(g.node(i), g.dim) > trusted) continue;
                    out.hessian_ratio =
                        std::max(out.hessian_ratio, std::abs(d2[i]) / p1.field[i]);
                }
            }

        OperatorSpec jump_only = op;
        jump_only.variant = OperatorVariant::pure_jump;
        jump_only.settings.delta = 2.0 * g.spacing();
        jump_only.settings.y_max = std::max(4.0 * g.half_width, 256.0);
        const Evaluand ue = evaluand_from_field(pt.field, true, false);
        for (std::size_t i = 0; i < pt.field.size(); ++i) {
            const auto idx = g.unflatten(i);
            bool on = true;
            for (int a = 0; a < g.dim; ++a) on = on && (idx[a] % stride == 0);
            if (!on) continue;
            const Vec x = g.node(i);
            if (norm(x, g.dim) > trusted) continue;
            const double val = apply_at(jump_only, ue, x, /*absolute=*/true);
            out.increment_ratio = std::max(out.increment_ratio, val / p1.field[i]);
        }
    }
    return out;
}

SelfSimilarity check_self_similarity(double alpha, double t, const Grid& g) {
    const LevyKernelSpec spec = make_fractional(g.dim, alpha);
    const SymbolField sf = symbol_grid(spec, g);
    const BuildOptions opts;
    const KernelField pt =
        invert_symbol(&spec, sf, t, g, opts, Provenance::fourier, false);
    const KernelField p1 =
        invert_symbol(&spec, sf, 1.0, g, opts, Provenance::fourier, false);

    SelfSimilarity out;
    const double trusted = 0.5 * g.half_width;
    const double peak = pt.field[g.center_index()];
    const double pref = std::pow(t, -g.dim / alpha);
    for (std::size_t i = 0; i < pt.field.size(); ++i) {
        const Vec x = g.node(i);
        if (norm(x, g.dim) > trusted) continue;
        Vec xa{0.0, 0.0, 0.0}, xb{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) {
            xa[a] = x[a] * std::pow(t, -1.0 / alpha);
            xb[a] = x[a] * std::pow(t, -alpha);
        }
        out.err_inv_alpha =
            std::max(out.err_inv_alpha, std::abs(pt.field[i] - pref * p1.field.eval(xa)));
        out.err_alpha =
            std::max(out.err_alpha, std::abs(pt.field[i] - pref * p1.field.eval(xb)));
    }
    out.err_inv_alpha /= peak;
    out.err_alpha /= peak;
    return out;
}

}  // namespace nlheat
