#include "nlheat/nonlocal_op.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlheat/fft.hpp"
#include "nlheat/quadrature.hpp"

namespace nlheat {

int OperatorSpec::dim() const {
    int d = 0;
    for (const auto& b : blocks) d += b.dim;
    return d;
}

const LevyRadialTable& OperatorSpec::table(std::size_t block) const {
    if (!tables_)
        tables_ = std::make_shared<std::vector<std::shared_ptr<LevyRadialTable>>>();
    if (tables_->size() != blocks.size()) tables_->resize(blocks.size());
    if (!(*tables_)[block])
        (*tables_)[block] = std::make_shared<LevyRadialTable>(blocks[block]);
    return *(*tables_)[block];
}

OperatorSpec OperatorSpec::pure_jump(LevyKernelSpec spec) {
    OperatorSpec op;
    op.variant = OperatorVariant::pure_jump;
    op.blocks.push_back(std::move(spec));
    op.block_offsets = {0};
    return op;
}

OperatorSpec OperatorSpec::anisotropic(std::vector<LevyKernelSpec> specs) {
    OperatorSpec op;
    op.variant = OperatorVariant::anisotropic;
    int off = 0;
    for (auto& s : specs) {
        op.block_offsets.push_back(off);
        off += s.dim;
        op.blocks.push_back(std::move(s));
    }
    if (off > 3) throw std::invalid_argument("anisotropic: blocks exceed three axes");
    return op;
}

OperatorSpec OperatorSpec::mixed(LevyKernelSpec spec) {
    OperatorSpec op;
    op.variant = OperatorVariant::mixed;
    op.blocks.push_back(std::move(spec));
    op.block_offsets = {0};
    return op;
}

Evaluand evaluand_from_field(const Field& u, bool need_laplacian, bool need_gradient) {
    auto base = std::make_shared<Field>(u);
    Evaluand e;
    e.value = [base](const Vec& x) { return base->eval(x); };
    if (need_laplacian) {
        auto parts = std::make_shared<std::array<Field, 3>>();
        auto fourths = std::make_shared<std::array<Field, 3>>();
        for (int a = 0; a < u.grid().dim; ++a) {
            (*parts)[a] = field_second_derivative(u, a, a);
            (*fourths)[a] = field_second_derivative((*parts)[a], a, a);
        }
        e.block_trace = [parts](const Vec& x, int offset, int dim) {
            double acc = 0.0;
            for (int a = offset; a < offset + dim; ++a) acc += (*parts)[a].eval(x);
            return acc;
        };
        e.axis_fourth = [fourths](const Vec& x, int axis) {
            return (*fourths)[axis].eval(x);
        };
    }
    if (need_gradient) {
        std::array<std::shared_ptr<Field>, 3> parts;
        for (int a = 0; a < u.grid().dim; ++a)
            parts[a] = std::make_shared<Field>(field_derivative(u, a));
        const int dim = u.grid().dim;
        e.gradient = [parts, dim](const Vec& x) {
            Vec g{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) g[a] = parts[a]->eval(x);
            return g;
        };
    }
    return e;
}

double second_difference(const Field& u, const Vec& x, const Vec& y) {
    Vec xp = x, xm = x;
    for (int a = 0; a < 3; ++a) {
        xp[a] += y[a];
        xm[a] -= y[a];
    }
    return u.eval(x) - 0.5 * (u.eval(xp) + u.eval(xm));
}

namespace {

struct Direction {
    Vec v;
    double w;
};

// directions and weights averaging to the spherical mean in the block dim
std::vector<Direction> block_directions(int db) {
    std::vector<Direction> dirs;
    if (db == 1) {
        dirs.push_back({{1.0, 0.0, 0.0}, 1.0});
    } else if (db == 2) {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            const double g = 2.0 * pi * (i + 0.5) / n;
            dirs.push_back({{std::cos(g), std::sin(g), 0.0}, 1.0 / n});
        }
    } else {
        const double a1 = 1.0 / 21.0, a2 = 4.0 / 105.0, a3 = 9.0 / 280.0;
        const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0);
        for (int a = 0; a < 3; ++a)
            for (int sgn : {-1, 1}) {
                Vec v{0, 0, 0};
                v[a] = sgn;
                dirs.push_back({v, a1});
            }
        for (int a = 0; a < 3; ++a)
            for (int s0 : {-1, 1})
                for (int s1 : {-1, 1}) {
                    Vec v{0, 0, 0};
                    v[(a + 1) % 3] = s0 * s2;
                    v[(a + 2) % 3] = s1 * s2;
                    dirs.push_back({v, a2});
                }
        for (int s0 : {-1, 1})
            for (int s1 : {-1, 1})
                for (int s2i : {-1, 1})
                    dirs.push_back({{s0 * s3, s1 * s3, s2i * s3}, a3});
    }
    return dirs;
}

double default_delta(const ApplySettings& s) { return s.delta > 0.0 ? s.delta : 1e-3; }

// shift x by rho * dir placed in the axes of one block
inline Vec offset(const Vec& x, const Vec& dir, double rho, int axis_offset, int db) {
    Vec y = x;
    for (int a = 0; a < db; ++a) y[axis_offset + a] += rho * dir[a];
    return y;
}

// jump part of one block at x over jump sizes [r_lo, r_hi]; absolute
// integrates |increment| K. r_hi == 0 runs to the adaptive outer radius
// with the probed tail term; r_lo below delta includes the sub-delta cell.
double block_apply(const OperatorSpec& op, std::size_t bi, const Evaluand& u, const Vec& x,
                   bool absolute, double r_lo, double r_hi) {
    const auto& spec = op.blocks[bi];
    const int db = spec.dim;
    const int off = op.block_offsets[bi];
    const auto& tbl = op.table(bi);
    const ApplySettings& st = op.settings;
    const double delta = default_delta(st);
    const double area = sphere_area(db);
    const auto dirs = block_directions(db);

    const double ux = u.value(x);
    const bool unbounded = r_hi <= 0.0;
    const double y_max = unbounded ? (st.y_max > 0.0 ? st.y_max : 256.0) : r_hi;

    const double shell_lo = std::max(r_lo, delta);
    const Fn1 shell = [&](double rho) {
        double mean = 0.0;
        for (const auto& dir : dirs) {
            const Vec xp = offset(x, dir.v, rho, off, db);
            const Vec xm = offset(x, dir.v, -rho, off, db);
            const double lam = ux - 0.5 * (u.value(xp) + u.value(xm));
            Vec y{0, 0, 0};
            for (int a = 0; a < db; ++a) y[a] = rho * dir.v[a];
            const double k = spec.radial ? spec.radial_profile(rho) : spec.density(y);
            mean += dir.w * (absolute ? std::abs(lam) : lam) * k;
        }
        return area * std::pow(rho, db - 1.0) * mean;
    };
    const double shells = (y_max > shell_lo)
                              ? integrate_log(shell, shell_lo, y_max, st.shells_per_decade)
                              : 0.0;

    // sub-delta cell: Lambda u ~ -(1/2) y.D2u.y - (1/24) <y, del>^4 u; the
    // quartic term is carried on one-dimensional blocks
    double cell = 0.0;
    if (r_lo < delta && u.block_trace) {
        const double m2 = tbl.second_moment(delta) - tbl.second_moment(r_lo);
        const double tr = u.block_trace(x, off, db);
        cell = -(0.5 / db) * tr * m2;
        if (db == 1 && u.axis_fourth) {
            const double m4 = tbl.fourth_moment(delta) - tbl.fourth_moment(r_lo);
            cell -= u.axis_fourth(x, off) * m4 / 24.0;
        }
        if (absolute) cell = std::abs(cell);
    }

    // far tail: the increment settles at u(x) - u_far, with u_far probed at
    // distance y_max (zero for compact or decaying u, the constant for
    // constant u)
    double tail = 0.0;
    if (unbounded) {
        const Vec e1 = dirs.front().v;
        const double u_far = 0.5 * (u.value(offset(x, e1, y_max, off, db)) +
                                    u.value(offset(x, e1, -y_max, off, db)));
        const double lam_far = ux - u_far;
        tail = (absolute ? std::abs(lam_far) : lam_far) * tbl.tail_mass(y_max);
    }

    return shells + cell + tail;
}

}  // namespace

double apply_at(const OperatorSpec& op, const Evaluand& u, const Vec& x, bool absolute) {
    double acc = 0.0;
    for (std::size_t b = 0; b < op.blocks.size(); ++b)
        acc += block_apply(op, b, u, x, absolute, 0.0, 0.0);
    if (op.variant == OperatorVariant::mixed) {
        if (!u.block_trace)
            throw std::invalid_argument("apply_at: mixed operator needs a Laplacian");
        const double lap = -u.laplacian(x, op.dim());
        acc += absolute ? std::abs(lap) : lap;
    }
    return acc;
}

double apply_range(const OperatorSpec& op, const Evaluand& u, const Vec& x, double r_lo,
                   double r_hi, bool absolute) {
    double acc = 0.0;
    for (std::size_t b = 0; b < op.blocks.size(); ++b)
        acc += block_apply(op, b, u, x, absolute, r_lo, r_hi);
    return acc;
}

Field apply_levy(const OperatorSpec& op, const Field& u, int jobs, int stride) {
    const Grid& g = u.grid();
    if (op.dim() != g.dim) throw std::invalid_argument("apply_levy: dimension mismatch");

    OperatorSpec local = op;
    if (local.settings.delta <= 0.0) local.settings.delta = 2.0 * g.spacing();
    if (local.settings.y_max <= 0.0)
        local.settings.y_max = std::max(4.0 * g.half_width, 256.0);

    const bool mixed = op.variant == OperatorVariant::mixed;
    const Evaluand ue = evaluand_from_field(u, true, false);

    Field out(g);
    parallel_for(g.total_nodes(), jobs, [&](std::size_t i) {
        const auto idx = g.unflatten(i);
        for (int a = 0; a < g.dim; ++a)
            if (idx[a] % stride != 0) return;
        const Vec x = g.node(i);
        double acc = 0.0;
        for (std::size_t b = 0; b < local.blocks.size(); ++b)
            acc += block_apply(local, b, ue, x, false, 0.0, 0.0);
        out[i] = acc;
    });

    if (mixed) {
        // -Delta u through the dual grid
        auto hat = centered_forward_transform(g, u.values());
        for (std::size_t i = 0; i < hat.size(); ++i) {
            const double q = norm(g.dual_node(i), g.dim);
            hat[i] *= q * q;
        }
        const auto lap = centered_inverse_transform(g, hat);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto idx = g.unflatten(i);
            bool on = true;
            for (int a = 0; a < g.dim; ++a) on = on && (idx[a] % stride == 0);
            if (on) out[i] += lap[i];
        }
    }
    return out;
}

double bilinear_at(const OperatorSpec& op, const Evaluand& u, const Evaluand& v,
                   const Vec& x) {
    if (!u.gradient || !v.gradient)
        throw std::invalid_argument("bilinear_at: gradients required");
    const ApplySettings& st = op.settings;
    const double delta = default_delta(st);
    double acc = 0.0;

    const double ux = u.value(x), vx = v.value(x);
    const Vec gu = u.gradient(x), gv = v.gradient(x);

    for (std::size_t bi = 0; bi < op.blocks.size(); ++bi) {
        const auto& spec = op.blocks[bi];
        const int db = spec.dim;
        const int off = op.block_offsets[bi];
        const auto& tbl = op.table(bi);
        const double area = sphere_area(db);
        const auto dirs = block_directions(db);
        const double y_max = st.y_max > 0.0 ? st.y_max : 256.0;

        // first differences are odd to leading order, so both orientations
        const Fn1 shell = [&](double rho) {
            double mean = 0.0;
            for (const auto& dir : dirs) {
                for (int sgn : {-1, 1}) {
                    const Vec xm = offset(x, dir.v, sgn * -1.0 * rho, off, db);
                    Vec y{0, 0, 0};
                    for (int a = 0; a < db; ++a) y[a] = sgn * rho * dir.v[a];
                    const double k =
                        spec.radial ? spec.radial_profile(rho) : spec.density(y);
                    mean += 0.5 * dir.w * (ux - u.value(xm)) * (vx - v.value(xm)) * k;
                }
            }
            return area * std::pow(rho, db - 1.0) * mean;
        };
        acc += integrate_log(shell, delta, y_max, st.shells_per_decade);

        // sub-delta: <grad u, y><grad v, y> averages to <gu, gv> rho^2 / db
        double dot = 0.0;
        for (int a = 0; a < db; ++a) dot += gu[off + a] * gv[off + a];
        acc += dot / db * tbl.second_moment(delta);

        // far tail with probed far values, exact for compact and constant
        // factors alike
        const Vec e1 = dirs.front().v;
        const double u_far = 0.5 * (u.value(offset(x, e1, y_max, off, db)) +
                                    u.value(offset(x, e1, -y_max, off, db)));
        const double v_far = 0.5 * (v.value(offset(x, e1, y_max, off, db)) +
                                    v.value(offset(x, e1, -y_max, off, db)));
        acc += (ux - u_far) * (vx - v_far) * tbl.tail_mass(y_max);
    }

    if (op.variant == OperatorVariant::mixed) {
        double dot = 0.0;
        for (int a = 0; a < 3; ++a) dot += gu[a] * gv[a];
        acc += 2.0 * dot;
    }
    return acc;
}

Field bilinear_form(const OperatorSpec& op, const Field& u, const Field& v, int jobs,
                    int stride) {
    const Grid& g = u.grid();
    if (!(v.grid() == g)) throw std::invalid_argument("bilinear_form: grid mismatch");
    OperatorSpec local = op;
    if (local.settings.delta <= 0.0) local.settings.delta = 2.0 * g.spacing();
    if (local.settings.y_max <= 0.0)
        local.settings.y_max = std::max(4.0 * g.half_width, 256.0);
    const Evaluand ue = evaluand_from_field(u, true, true);
    const Evaluand ve = evaluand_from_field(v, true, true);
    Field out(g);
    parallel_for(g.total_nodes(), jobs, [&](std::size_t i) {
        const auto idx = g.unflatten(i);
        for (int a = 0; a < g.dim; ++a)
            if (idx[a] % stride != 0) return;
        out[i] = bilinear_at(local, ue, ve, g.node(i));
    });
    return out;
}

double leibniz_residual_at(const OperatorSpec& op, const Evaluand& u, const Evaluand& v,
                           const Vec& x) {
    Evaluand prod;
    prod.value = [&](const Vec& p) { return u.value(p) * v.value(p); };
    prod.block_trace = [&](const Vec& p, int offset, int dim) {
        const Vec gu = u.gradient(p), gv = v.gradient(p);
        double dot = 0.0;
        for (int a = offset; a < offset + dim; ++a) dot += gu[a] * gv[a];
        return u.block_trace(p, offset, dim) * v.value(p) +
               v.block_trace(p, offset, dim) * u.value(p) + 2.0 * dot;
    };
    const double luv = apply_at(op, prod, x);
    const double lu = apply_at(op, u, x);
    const double lv = apply_at(op, v, x);
    const double b = bilinear_at(op, u, v, x);
    return luv - u.value(x) * lv - v.value(x) * lu + b;
}

ResidualReport heat_residual(const OperatorSpec& op, const Field& P, const Field& dtP,
                             double trusted_radius, int stride, int jobs) {
    const Field lp = apply_levy(op, P, jobs, stride);
    const Grid& g = P.grid();
    ResidualReport rep;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const auto idx = g.unflatten(i);
        bool on = true;
        for (int a = 0; a < g.dim; ++a) on = on && (idx[a] % stride == 0);
        if (!on) continue;
        if (norm(g.node(i), g.dim) > trusted_radius) continue;
        rep.sup = std::max(rep.sup, std::abs(dtP[i] + lp[i]));
        rep.reference = std::max(rep.reference, std::abs(P[i]));
    }
    rep.sup_rel = rep.sup / std::max(rep.reference, 1e-300);
    return rep;
}

}  // namespace nlheat
