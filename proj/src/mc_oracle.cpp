#include "nlheat/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nlheat/fft.hpp"

namespace nlheat {

namespace {

// monotone cubic (Fritsch-Carlson) interpolant on ascending data
class Pchip {
  public:
    Pchip(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        slopes_.assign(n, 0.0);
        std::vector<double> d(n - 1), h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = xs_[i + 1] - xs_[i];
            d[i] = (ys_[i + 1] - ys_[i]) / h[i];
        }
        slopes_[0] = d.front();
        slopes_[n - 1] = d.back();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slopes_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double operator()(double x) const {
        if (x <= xs_.front()) return ys_.front();
        if (x >= xs_.back()) return ys_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double h = xs_[i + 1] - xs_[i];
        const double s = (x - xs_[i]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] +
               h11 * h * slopes_[i + 1];
    }

  private:
    std::vector<double> xs_, ys_, slopes_;
};

// inverse of the radial tail: quantile u in [0,1) -> jump radius above delta
class JumpRadiusSampler {
  public:
    JumpRadiusSampler(const LevyRadialTable& tbl, double delta) {
        const auto& radii = tbl.radii();
        const auto& tails = tbl.tail_masses();
        rate_ = tbl.tail_mass(delta);
        std::vector<double> xs, ys;  // ascending -log T vs log r
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (radii[i] < delta || tails[i] <= 0.0) continue;
            const double x = -std::log(tails[i]);
            if (!xs.empty() && x <= xs.back() + 1e-12) continue;
            xs.push_back(x);
            ys.push_back(std::log(radii[i]));
        }
        if (xs.size() < 8) throw std::runtime_error("jump sampler: tail table too short");
        const Pchip interp(xs, ys);

        // dense uniform resampling of the monotone cubic: the hot path is a
        // constant-time index plus one linear blend
        x_lo_ = xs.front();
        x_hi_ = xs.back();
        table_.resize(8193);
        for (std::size_t j = 0; j < table_.size(); ++j) {
            const double x = x_lo_ + (x_hi_ - x_lo_) * j / (table_.size() - 1.0);
            table_[j] = interp(x);
        }
        inv_step_ = (table_.size() - 1.0) / (x_hi_ - x_lo_);
    }

    double rate() const { return rate_; }
    double radius(double u) const {
        const double target = rate_ * (1.0 - u);
        const double x =
            std::clamp(target > 0.0 ? -std::log(target) : x_hi_, x_lo_, x_hi_);
        const double pos = (x - x_lo_) * inv_step_;
        const std::size_t j =
            std::min(static_cast<std::size_t>(pos), table_.size() - 2);
        const double s = pos - static_cast<double>(j);
        return std::exp(table_[j] * (1.0 - s) + table_[j + 1] * s);
    }

  private:
    double rate_ = 0.0;
    double x_lo_ = 0.0, x_hi_ = 1.0, inv_step_ = 1.0;
    std::vector<double> table_;
};

Vec random_direction(int dim, CounterRng& rng) {
    if (dim == 1) return {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0, 0.0};
    if (dim == 2) {
        const double a = 2.0 * pi * rng.uniform();
        return {std::cos(a), std::sin(a), 0.0};
    }
    // Marsaglia
    for (;;) {
        const double a = 2.0 * rng.uniform() - 1.0;
        const double b = 2.0 * rng.uniform() - 1.0;
        const double s = a * a + b * b;
        if (s >= 1.0) continue;
        const double f = 2.0 * std::sqrt(1.0 - s);
        return {a * f, b * f, 1.0 - 2.0 * s};
    }
}

}  // namespace

SampleSet simulate_levy(const SimulationPlan& plan) {
    if (plan.samples < 10000)
        throw std::invalid_argument("simulate_levy: need at least 1e4 samples");
    const int d = plan.spec.dim;
    LevyRadialTable tbl(plan.spec, std::min(1e-6, plan.truncation / 10.0));
    const JumpRadiusSampler sampler(tbl, plan.truncation);
    const double lambda = sampler.rate() * plan.horizon;
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::runtime_error("simulate_levy: jump intensity tabulation failed");

    const double sigma2 = tbl.second_moment(plan.truncation) / d * plan.horizon;
    const bool substitute = plan.treatment == SmallJumpTreatment::gaussian_substitute;
    const bool modulated = !plan.spec.radial && d >= 2;

    SampleSet out;
    out.dim = d;
    out.jump_rate = sampler.rate();
    out.substitute_sigma = std::sqrt(sigma2 / plan.horizon);
    out.positions.assign(plan.samples, Vec{0.0, 0.0, 0.0});

    parallel_for(plan.samples, plan.jobs, [&](std::size_t i) {
        CounterRng rng(plan.seed, i);
        std::poisson_distribution<long> pois(lambda);
        const long jumps = pois(rng);
        Vec pos{0.0, 0.0, 0.0};
        for (long j = 0; j < jumps; ++j) {
            const double r = sampler.radius(rng.uniform());
            Vec dir = random_direction(d, rng);
            if (modulated) {
                // accept against the angular profile of the kernel at radius r
                const double mean = plan.spec.radial_profile(r);
                for (int tries = 0; tries < 64; ++tries) {
                    Vec y{0.0, 0.0, 0.0};
                    for (int a = 0; a < d; ++a) y[a] = r * dir[a];
                    const double ratio = plan.spec.density(y) / (3.0 * mean);
                    if (rng.uniform() < ratio) break;
                    dir = random_direction(d, rng);
                }
            }
            for (int a = 0; a < d; ++a) pos[a] += r * dir[a];
        }
        if (substitute && sigma2 > 0.0) {
            std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
            for (int a = 0; a < d; ++a) pos[a] += normal(rng);
        }
        out.positions[i] = pos;
    });
    return out;
}

namespace {

std::vector<double> histogram_counts(const SampleSet& samples, const Grid& g) {
    std::vector<double> counts(g.total_nodes(), 0.0);
    const double h = g.spacing();
    for (const Vec& p : samples.positions) {
        std::array<int, 3> idx{0, 0, 0};
        bool in = true;
        for (int a = 0; a < g.dim; ++a) {
            const long k = std::lround((p[a] + g.half_width) / h);
            if (k < 0 || k >= g.nodes_per_axis) {
                in = false;
                break;
            }
            idx[a] = static_cast<int>(k);
        }
        if (in) counts[g.flatten(idx)] += 1.0;
    }
    return counts;
}

Field smooth_histogram(const std::vector<double>& counts, std::size_t n_samples,
                       const Grid& g, double bandwidth) {
    double cell = 1.0;
    for (int a = 0; a < g.dim; ++a) cell *= g.spacing();
    std::vector<double> density(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        density[i] = counts[i] / (static_cast<double>(n_samples) * cell);

    auto hat = centered_forward_transform(g, density);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double q = norm(g.dual_node(i), g.dim);
        hat[i] *= std::exp(-0.5 * bandwidth * bandwidth * q * q);
    }
    Field out(g);
    const auto vals = centered_inverse_transform(g, hat);
    std::copy(vals.begin(), vals.end(), out.values().begin());
    return out;
}

}  // namespace

Field empirical_density(const SampleSet& samples, const Grid& g, double bandwidth) {
    if (bandwidth < g.spacing())
        throw std::invalid_argument("empirical_density: bandwidth below grid spacing");
    return smooth_histogram(histogram_counts(samples, g), samples.positions.size(), g,
                            bandwidth);
}

DensityComparison compare_density(const SampleSet& samples, const Grid& g,
                                  double bandwidth, const KernelField& reference,
                                  std::uint64_t seed) {
    const auto counts = histogram_counts(samples, g);
    const std::size_t n = samples.positions.size();
    const Field emp = smooth_histogram(counts, n, g, bandwidth);

    DensityComparison out;
    out.l1_distance = l1_diff(emp, reference.field, g.half_width + 1.0);

    // multinomial bootstrap on the cell counts, chained binomials
    long total = 0;
    for (double c : counts) total += static_cast<long>(c);
    const int resamples = 200;
    std::vector<double> dists(resamples);
    for (int b = 0; b < resamples; ++b) {
        CounterRng rng(seed, static_cast<std::uint64_t>(b) + 1);
        std::vector<double> boot(counts.size(), 0.0);
        long remaining_draws = total;
        double remaining_mass = static_cast<double>(total);
        for (std::size_t c = 0; c < counts.size() && remaining_draws > 0; ++c) {
            if (counts[c] <= 0.0) continue;
            const double p = counts[c] / remaining_mass;
            long x;
            if (p >= 1.0) {
                x = remaining_draws;
            } else {
                std::binomial_distribution<long> bin(remaining_draws, p);
                x = bin(rng);
            }
            boot[c] = static_cast<double>(x);
            remaining_draws -= x;
            remaining_mass -= counts[c];
        }
        const Field boot_field = smooth_histogram(boot, n, g, bandwidth);
        dists[static_cast<std::size_t>(b)] =
            l1_diff(boot_field, reference.field, g.half_width + 1.0);
    }
    std::sort(dists.begin(), dists.end());
    out.ci_lower = dists[static_cast<std::size_t>(0.025 * resamples)];
    out.ci_upper = dists[static_cast<std::size_t>(0.975 * resamples) - 1];
    return out;
}

}  // namespace nlheat
