#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlheat/bump.hpp"
#include "nlheat/heat_kernel.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/symbol.hpp"

using namespace nlheat;

TEST_CASE("second differences of simple fields") {
    const Grid g = Grid::defaults(1);
    const Field constant = Field::sample(g, [](const Vec&) { return 3.0; });
    CHECK(second_difference(constant, {0.3, 0, 0}, {1.7, 0, 0}) == doctest::Approx(0.0));

    // x^2 has the exact increment -y^2 wherever the stencil stays in the box
    const Field quad = Field::sample(g, [](const Vec& x) { return x[0] * x[0]; });
    for (double y : {0.25, 1.0, 7.5})
        CHECK(second_difference(quad, {2.0, 0, 0}, {y, 0, 0}) ==
              doctest::Approx(-y * y).epsilon(1e-10));

    const auto p1 = subordinated_fractional_kernel(1.0, 1.0, g);
    CHECK(second_difference(p1.field, {0, 0, 0}, {1, 0, 0}) ==
          doctest::Approx((1.0 / pi) * 0.5).epsilon(1e-6));
}

TEST_CASE("quadratic test function: the jump operator is spatially constant") {
    auto op = OperatorSpec::pure_jump(make_fractional(1, 1.0));
    op.settings.delta = 1e-3;
    op.settings.y_max = 50.0;  // fixed truncation so the value is x-free
    Evaluand quad;
    quad.value = [](const Vec& x) { return x[0] * x[0]; };
    quad.block_trace = [](const Vec&, int, int) { return 2.0; };
    const double v0 = apply_at(op, quad, {0.0, 0, 0});
    for (double x : {-3.0, 0.7, 11.0}) {
        const double v = apply_at(op, quad, {x, 0, 0});
        CHECK(v == doctest::Approx(v0).epsilon(1e-9));
    }
    // increments of x^2 are exactly -y^2; the far probe continues the tail
    const double want = -(op.table(0).second_moment(50.0) +
                          2500.0 * op.table(0).tail_mass(50.0));
    CHECK(v0 == doctest::Approx(want).epsilon(1e-6));

    Evaluand c;
    c.value = [](const Vec&) { return 42.0; };
    c.block_trace = [](const Vec&, int, int) { return 0.0; };
    CHECK(apply_at(op, c, {1.0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("plane waves are eigenfunctions with eigenvalue m(xi)") {
    const Grid g = Grid::defaults(1);
    const auto spec = make_fractional(1, 1.0);
    const auto op = OperatorSpec::pure_jump(spec);

    // golden-ratio placed frequencies in the resolved band [1, Nyquist/8]
    const double lo = 1.0, hi = g.nyquist() / 16.0;
    for (int k = 0; k < 20; ++k) {
        const double frac = std::fmod(0.6180339887498949 * (k + 1), 1.0);
        const double q = lo * std::pow(hi / lo, frac);
        const Field u =
            Field::sample(g, [q](const Vec& x) { return std::cos(q * x[0]); });
        const double m = symbol_eval(spec, {q, 0, 0}).value;

        const Evaluand ue = evaluand_from_field(u, true, false);
        auto local = op;
        local.settings.delta = 2.0 * g.spacing();
        local.settings.y_max = 4.0 * g.half_width;
        for (double x : {0.0, 3.218, -11.5}) {
            const double lu = apply_at(local, ue, {x, 0, 0});
            const double want = m * std::cos(q * x);
            CHECK(std::abs(lu - want) <= 2e-3 * m);
        }
    }
}

TEST_CASE("full-grid application against the spectral route") {
    const Grid g = Grid::defaults(1);
    const auto spec = make_fractional(1, 1.0);
    const auto sf = symbol_grid(spec, g);
    const auto pt = kernel_fourier_inversion(spec, 1.0, g, {}, &sf);
    const Field dt = kernel_time_derivative(spec, 1.0, g, false, &sf);

    const auto op = OperatorSpec::pure_jump(spec);
    const auto rep = heat_residual(op, pt.field, dt, pt.trusted_radius());
    CHECK(rep.sup_rel < 1e-3);
}

TEST_CASE("PDE residual: fractional and mixed kernels solve their equations") {
    const Grid g = Grid::defaults(1);
    for (double alpha : {1.0, 1.5}) {
        CAPTURE(alpha);
        const auto spec = make_fractional(1, alpha);
        const auto sf = symbol_grid(spec, g);
        const auto op = OperatorSpec::pure_jump(spec);
        for (double t : {0.5, 1.0, 2.0}) {
            const auto pt = kernel_fourier_inversion(spec, t, g, {}, &sf);
            const Field dt = kernel_time_derivative(spec, t, g, false, &sf);
            const auto rep = heat_residual(op, pt.field, dt, pt.trusted_radius());
            CHECK(rep.sup_rel < 1e-3);
        }
    }

    const auto spec = make_fractional(1, 1.0);
    const auto mop = OperatorSpec::mixed(spec);
    const auto pt = mixed_kernel(spec, 1.0, g);
    const Field dt = kernel_time_derivative(spec, 1.0, g, true);
    const auto rep = heat_residual(mop, pt.field, dt, pt.trusted_radius());
    CHECK(rep.sup_rel < 1e-3);

    // negative control: the Gaussian flow does not solve the jump equation
    const auto gk = gaussian_kernel(1.0, g);
    Field gdt(g);  // dt G = Laplacian G, exact
    for (std::size_t i = 0; i < gdt.size(); ++i) {
        const double x = g.node(i)[0];
        gdt[i] = (x * x / 4.0 - 0.5) * gk.field[i];
    }
    const auto op = OperatorSpec::pure_jump(spec);
    const auto bad = heat_residual(op, gk.field, gdt, gk.trusted_radius());
    CHECK(bad.sup_rel > 0.05);
}

TEST_CASE("residual halves under simultaneous grid and cutoff refinement") {
    const auto spec = make_fractional(1, 1.5);
    const auto run = [&](const Grid& g) {
        const auto sf = symbol_grid(spec, g);
        const auto pt = kernel_fourier_inversion(spec, 1.0, g, {}, &sf);
        const Field dt = kernel_time_derivative(spec, 1.0, g, false, &sf);
        // N doubles per unit length (so delta = 2h halves) and the box
        // doubles with it, shrinking the periodization floor as well
        return heat_residual(OperatorSpec::pure_jump(spec), pt.field, dt, 16.0).sup;
    };
    const double coarse = run({1, 64.0, 2048});
    const double fine = run({1, 128.0, 8192});
    CHECK(fine < 0.5 * coarse);
}

TEST_CASE("bilinear form: basic identities") {
    const auto op = OperatorSpec::pure_jump(make_fractional(1, 1.0));
    SpaceBump u{{0.0, 0, 0}, {2.0, 1, 1}, 1};
    SpaceBump v{{0.5, 0, 0}, {1.5, 1, 1}, 1};

    Evaluand ve = v.evaluand();
    Evaluand consts;
    consts.value = [](const Vec&) { return 1.0; };
    consts.gradient = [](const Vec&) { return Vec{0, 0, 0}; };
    consts.block_trace = [](const Vec&, int, int) { return 0.0; };
    CHECK(bilinear_at(op, u.evaluand(), consts, {0.3, 0, 0}) ==
          doctest::Approx(0.0).epsilon(1e-12));

    for (double x : {-1.0, 0.0, 0.8})
        CHECK(bilinear_at(op, u.evaluand(), u.evaluand(), {x, 0, 0}) >= 0.0);

    // nonlocal product rule: L(uv) = u Lv + v Lu - B(u,v)
    for (double x : {-0.9, 0.0, 0.4, 1.3}) {
        const double r = leibniz_residual_at(op, u.evaluand(), ve, {x, 0, 0});
        CHECK(std::abs(r) < 1e-3);
    }
}

TEST_CASE("anisotropic operator: plane waves see the summed symbol") {
    const Grid g{2, 16.0, 256};
    const auto spec = make_fractional(1, 1.0);
    const auto op = OperatorSpec::anisotropic({spec, spec});

    const double q1 = 1.5, q2 = 2.5;
    const Field u = Field::sample(
        g, [&](const Vec& x) { return std::cos(q1 * x[0] + q2 * x[1]); });
    const double want_m = q1 + q2;  // |xi1|^1 + |xi2|^1

    auto local = op;
    local.settings.delta = 2.0 * g.spacing();
    local.settings.y_max = 4.0 * g.half_width;
    const Evaluand ue = evaluand_from_field(u, true, false);
    for (const Vec x : {Vec{0.0, 0.0, 0.0}, Vec{1.2, -2.3, 0.0}}) {
        const double lu = apply_at(local, ue, x);
        const double want = want_m * std::cos(q1 * x[0] + q2 * x[1]);
        CHECK(std::abs(lu - want) <= 5e-3 * want_m);
    }
}
