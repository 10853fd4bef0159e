#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlheat/kernels.hpp"

using namespace nlheat;

namespace {

// closed form for the fractional normalization, the oracle for the
// quadrature route: alpha 2^{alpha-1} Gamma((d+alpha)/2) / (pi^{d/2} Gamma(1-alpha/2))
double normalization_oracle(int d, double alpha) {
    return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(pi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
}

double halton(std::size_t i, int base) {
    double f = 1.0, r = 0.0;
    for (std::size_t n = i + 1; n > 0; n /= base) {
        f /= base;
        r += f * static_cast<double>(n % base);
    }
    return r;
}

}  // namespace

TEST_CASE("fractional normalization matches the closed form") {
    // d=1, alpha=1: the defining integral is exactly pi
    CHECK(fractional_normalization(1, 1.0) == doctest::Approx(1.0 / pi).epsilon(1e-9));
    for (int d : {1, 2, 3})
        for (double alpha : {0.3, 0.5, 1.0, 1.5, 1.9}) {
            const double got = fractional_normalization(d, alpha);
            const double want = normalization_oracle(d, alpha);
            CHECK(got == doctest::Approx(want).epsilon(1e-7));
        }
}

TEST_CASE("kernel evaluation examples") {
    const auto frac = make_fractional(1, 1.0);
    CHECK(eval_kernel(frac, {2.0, 0.0, 0.0}) ==
          doctest::Approx(1.0 / (pi * 4.0)).epsilon(1e-9));

    const auto logc = make_log_corrected(1, 1.0);
    CHECK(eval_kernel(logc, {1.0, 0.0, 0.0}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS((void)eval_kernel(frac, {0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("catalog symmetry and positivity at quasi-random points") {
    for (int d : {1, 2}) {
        for (const auto& spec : default_catalog(d)) {
            CAPTURE(spec.name);
            for (std::size_t i = 0; i < 2000; ++i) {
                Vec x{0.0, 0.0, 0.0};
                x[0] = 20.0 * (halton(i, 2) - 0.5);
                if (d > 1) x[1] = 20.0 * (halton(i, 3) - 0.5);
                if (norm(x, d) < 1e-6) continue;
                const double v = eval_kernel(spec, x);
                Vec mx{-x[0], -x[1], -x[2]};
                CHECK(v > 0.0);
                CHECK(v == doctest::Approx(eval_kernel(spec, mx)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("catalog satisfies the envelope comparability") {
    for (const auto& spec : default_catalog(1)) {
        CAPTURE(spec.name);
        for (std::size_t i = 0; i < 2000; ++i) {
            const double r = std::pow(10.0, -3.0 + 6.0 * halton(i, 2));
            const double v = eval_kernel(spec, {r, 0.0, 0.0});
            const double envelope = 1.0 / (r * spec.scale.eval(r));
            CHECK(v <= spec.comparability * envelope * (1.0 + 1e-9));
            CHECK(v >= envelope / spec.comparability * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("Levy integrability: fractional value has a closed form") {
    // alpha=1, d=1: C * (int_{|y|<=1} y^2 |y|^{-2} + int_{|y|>1} |y|^{-2}) = C * 4
    const auto res = check_levy_integrability(make_fractional(1, 1.0));
    CHECK(res.finite);
    CHECK(res.value == doctest::Approx(4.0 / pi).epsilon(1e-7));
}

TEST_CASE("Levy integrability: catalog members converge") {
    for (int d : {1, 2}) {
        for (const auto& spec : default_catalog(d)) {
            CAPTURE(spec.name);
            const auto res = check_levy_integrability(spec);
            CHECK(res.finite);
            CHECK(res.value > 0.0);
            CHECK(res.last_change < 1e-6);
        }
    }
}

TEST_CASE("Levy integrability: too-singular kernel raises the divergence flag") {
    // |y|^{-d-2} inside the unit ball: the inner integral is logarithmic log(1/r)
    // with no damping, i.e. divergent
    ScaleFunction sc{[](double r) { return r * r; }, 2.0, 2.0, 1.0, 1.0, std::nullopt};
    const auto bad = make_custom(
        "too_singular", 1, [](double r) { return r <= 1.0 ? std::pow(r, -3.0) : 0.0; },
        sc, 1.0);
    const auto res = check_levy_integrability(bad);
    CHECK_FALSE(res.finite);
    CHECK(res.inner_rate >= -1.0 - 1e-6);
}

TEST_CASE("sum of fractional kernels is integrable") {
    const auto res = check_levy_integrability(make_sum_fractional(1, 0.3, 0.7));
    CHECK(res.finite);
}

TEST_CASE("scaling check: fractional is a pure power") {
    const auto fit = check_scaling(make_fractional(1, 1.5));
    CHECK(fit.pass);
    CHECK(fit.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.lambda2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scaling check: log-corrected envelope sits between 2-eps and 2") {
    const auto spec = make_log_corrected(1, 1.0);
    const auto fit = check_scaling(spec);
    CHECK(fit.pass);
    CHECK(fit.lambda1 <= 1.0 + 1e-9);
    CHECK(fit.lambda2 <= 1.0 + 1e-9);
    CHECK(fit.lambda1 > 0.0);
}

TEST_CASE("scaling check: whole catalog passes with declared exponents") {
    for (int d : {1, 2}) {
        for (const auto& spec : default_catalog(d)) {
            CAPTURE(spec.name);
            const auto fit = check_scaling(spec);
            CHECK(fit.pass);
            CHECK(std::isfinite(fit.lambda2));
            CHECK(fit.lambda1 > 0.0);
        }
    }
}

TEST_CASE("smooth-bound check on the scale functions that declare one") {
    const auto frac = make_fractional(1, 1.0);
    const auto fit = check_smooth_bounds(frac.scale);
    // phi(r) = r: phi'/phi = 1/r <= 1/2 on [2, inf), phi'' = 0
    CHECK(fit.first_ratio <= 0.5 + 1e-6);
    CHECK(fit.second_ratio <= 1e-6);

    const auto logc = make_log_corrected(1, 1.0);
    const auto fit2 = check_smooth_bounds(logc.scale);
    CHECK(std::isfinite(fit2.first_ratio));
    CHECK(fit2.first_ratio < 2.0);
    CHECK(fit2.second_ratio < 2.0);
}

TEST_CASE("radial table: tail masses and second moments for the Cauchy kernel") {
    const auto spec = make_fractional(1, 1.0);
    LevyRadialTable tbl(spec);
    // T(r) = 2 C / r, M2(r) = 2 C r
    const double c = 1.0 / pi;
    CHECK(tbl.tail_mass(1.0) == doctest::Approx(2.0 * c).epsilon(1e-6));
    CHECK(tbl.tail_mass(256.0) == doctest::Approx(2.0 * c / 256.0).epsilon(1e-6));
    CHECK(tbl.second_moment(1.0) == doctest::Approx(2.0 * c).epsilon(1e-6));
    CHECK(tbl.second_moment(1e-3) == doctest::Approx(2.0 * c * 1e-3).epsilon(1e-5));
}

TEST_CASE("spec factory validates parameters") {
    CHECK_THROWS_AS((void)make_spec("fractional", 1, {{"alpha", 2.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)make_spec("unknown_kind", 1, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)make_sum_fractional(1, 0.7, 0.3), std::invalid_argument);
    const auto ok = make_spec("fractional", 2, {{"alpha", 0.5}});
    CHECK(ok.dim == 2);
}
