#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlheat/comparison_phi.hpp"

using namespace nlheat;

namespace {

std::vector<SpaceBump> psi_battery(int dim) {
    std::vector<SpaceBump> psis;
    psis.push_back({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, dim});
    psis.push_back({{1.5, 0.0, 0.0}, {2.0, 2.0, 2.0}, dim});
    psis.push_back({{-2.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, dim});
    return psis;
}

}  // namespace

TEST_CASE("phi values: plateau, envelope, continuity at the seams") {
    const auto spec = make_fractional(1, 1.0);
    const auto phi = build_phi(spec);

    CHECK(phi({0.5, 0, 0}) == doctest::Approx(1.0));
    CHECK(phi({4.0, 0, 0}) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));

    for (double seam : {1.0, 2.0}) {
        const double eps = 1e-7;
        const double below = phi({seam - eps, 0, 0});
        const double above = phi({seam + eps, 0, 0});
        CHECK(std::abs(below - above) < 1e-6 * below);
    }
}

TEST_CASE("phi bridge is twice continuously differentiable") {
    for (const auto& spec : default_catalog(1)) {
        CAPTURE(spec.name);
        const auto phi = build_phi(spec);
        for (double seam : {1.0, 2.0}) {
            const double eps = 1e-12;
            for (int order = 0; order <= 2; ++order) {
                const auto eval = [&](double r) {
                    if (order == 0) return phi.radial_value(0, r);
                    if (order == 1) return phi.radial_d1(0, r);
                    return phi.radial_d2(0, r);
                };
                const double inside = eval(seam - eps);
                const double outside = eval(seam + eps);
                const double scale = std::max({std::abs(inside), std::abs(outside), 1.0});
                CHECK(std::abs(inside - outside) / scale < 1e-8);
            }
        }
        for (int i = 0; i <= 100; ++i)
            CHECK(phi({1.0 + i / 100.0, 0, 0}) > 0.0);
    }
}

TEST_CASE("phi bounds: finite constants for fractional and log-corrected") {
    for (const auto& spec :
         {make_fractional(1, 1.0), make_log_corrected(1, 1.0)}) {
        CAPTURE(spec.name);
        const auto phi = build_phi(spec);
        const auto op = OperatorSpec::pure_jump(spec);
        const auto rep = verify_phi_bounds(phi, op, psi_battery(1));
        CHECK(rep.finite());
        CHECK(rep.levy_ratio > 0.0);
        CHECK(rep.levy_ratio < 100.0);
        CHECK(rep.bilinear_ratio < 100.0);
        CHECK(rep.near_ratio < 100.0);
        CHECK(rep.far_ratio < 100.0);
    }
}

TEST_CASE("psi identically zero gives a zero bilinear bound") {
    const auto spec = make_fractional(1, 1.0);
    const auto phi = build_phi(spec);
    const auto op = OperatorSpec::pure_jump(spec);
    SpaceBump zero{{0.0, 0, 0}, {1.0, 1, 1}, 1, 0.0};
    const double b = bilinear_at(op, zero.evaluand(), phi.evaluand(), {0.7, 0, 0});
    CHECK(b == doctest::Approx(0.0));
}

TEST_CASE("the alpha-kernel itself satisfies the phi estimates") {
    // |L P_1| <= C P_1 for the fractional kernel: the smooth comparison
    // function can be the kernel itself
    const Grid g = Grid::defaults(1);
    const auto spec = make_fractional(1, 1.0);
    const auto p1 = kernel_fourier_inversion(spec, 1.0, g);
    const auto op = OperatorSpec::pure_jump(spec);
    auto local = op;
    local.settings.delta = 2.0 * g.spacing();
    local.settings.y_max = 4.0 * g.half_width;
    const Evaluand ue = evaluand_from_field(p1.field, true, false);
    double worst = 0.0;
    for (double x : {0.0, 1.0, 3.7, 9.0, 17.0, 29.0}) {
        const double ratio =
            std::abs(apply_at(local, ue, {x, 0, 0})) / p1.field.eval({x, 0, 0});
        worst = std::max(worst, ratio);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("phi is comparable to P_1") {
    const Grid g = Grid::defaults(1);
    const auto spec = make_fractional(1, 1.0);
    const auto phi = build_phi(spec);
    const auto p1 = kernel_fourier_inversion(spec, 1.0, g);
    const double c = phi_comparability(phi, p1);
    CHECK(std::isfinite(c));
    CHECK(c < 10.0);
}

TEST_CASE("anisotropic phi: product structure and summed constant") {
    const auto spec = make_fractional(1, 1.0);
    const auto phi1 = build_phi(spec);
    const auto phi2 = build_phi_anisotropic({spec, spec});

    // product of factors
    CHECK(phi2({3.0, 4.0, 0}) ==
          doctest::Approx(phi1({3.0, 0, 0}) * phi1({4.0, 0, 0})).epsilon(1e-12));
    CHECK(phi2({0.5, 0.8, 0}) == doctest::Approx(1.0));

    const auto op1 = OperatorSpec::pure_jump(spec);
    const auto rep1 = verify_phi_bounds(phi1, op1, psi_battery(1));

    const auto op2 = OperatorSpec::anisotropic({spec, spec});
    const auto rep2 = verify_phi_bounds(phi2, op2, psi_battery(2));
    CHECK(rep2.finite());
    CHECK(rep2.levy_ratio <= 2.0 * rep1.levy_ratio * 1.1);
}

TEST_CASE("mixed operator: phi also controls the Laplacian part") {
    const auto spec = make_fractional(1, 1.0);
    const auto phi = build_phi(spec);
    const auto op = OperatorSpec::mixed(spec);
    const auto rep = verify_phi_bounds(phi, op, psi_battery(1));
    CHECK(rep.finite());
    CHECK(rep.levy_ratio < 100.0);
    // |Delta phi| <= C phi separately
    double worst = 0.0;
    for (double x : {0.0, 1.5, 3.0, 8.0, 20.0})
        worst = std::max(worst, std::abs(phi.laplacian({x, 0, 0})) / phi({x, 0, 0}));
    CHECK(worst < 50.0);
}
