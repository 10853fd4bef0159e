#include "nlheat/comparison_phi.hpp"

#include <cmath>
#include <stdexcept>

namespace nlheat {

namespace {

// central differences with the same step policy as the smooth-bound checker
double diff1(const std::function<double(double)>& f, double r) {
    const double h = 1e-4 * r;
    return (f(r + h) - f(r - h)) / (2.0 * h);
}

double diff2(const std::function<double(double)>& f, double r) {
    const double h = 1e-4 * r;
    return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
}

std::array<double, 6> hermite_bridge(const std::function<double(double)>& outer) {
    // quintic on [1,2] in s = r - 1 matching (1, 0, 0) on the plateau side
    // and (g, g', g'') on the envelope side
    const double A = outer(2.0) - 1.0;
    const double B = diff1(outer, 2.0);
    const double C = diff2(outer, 2.0);
    std::array<double, 6> c{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    c[3] = 10.0 * A - 4.0 * B + 0.5 * C;
    c[4] = -15.0 * A + 7.0 * B - C;
    c[5] = 6.0 * A - 3.0 * B + 0.5 * C;
    return c;
}

double poly(const std::array<double, 6>& c, double s) {
    double acc = 0.0;
    for (int k = 5; k >= 0; --k) acc = acc * s + c[k];
    return acc;
}

double poly_d1(const std::array<double, 6>& c, double s) {
    double acc = 0.0;
    for (int k = 5; k >= 1; --k) acc = acc * s + k * c[k];
    return acc;
}

double poly_d2(const std::array<double, 6>& c, double s) {
    double acc = 0.0;
    for (int k = 5; k >= 2; --k) acc = acc * s + k * (k - 1) * c[k];
    return acc;
}

PhiFunction::Block make_block(const LevyKernelSpec& spec, int offset) {
    PhiFunction::Block b;
    b.dim = spec.dim;
    b.axis_offset = offset;
    const int d = spec.dim;
    const auto scale = spec.scale.eval;
    b.outer = [d, scale](double r) { return 1.0 / (std::pow(r, d) * scale(r)); };
    b.bridge = hermite_bridge(b.outer);
    for (int i = 0; i <= 1000; ++i) {
        const double s = static_cast<double>(i) / 1000.0;
        if (!(poly(b.bridge, s) > 0.0))
            throw std::runtime_error("build_phi: bridge lost positivity");
    }
    return b;
}

double block_radius(const PhiFunction::Block& b, const Vec& x) {
    double s = 0.0;
    for (int a = b.axis_offset; a < b.axis_offset + b.dim; ++a) s += x[a] * x[a];
    return std::sqrt(s);
}

}  // namespace

double PhiFunction::radial_value(std::size_t b, double r) const {
    const Block& blk = blocks_[b];
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return blk.outer(r);
    return poly(blk.bridge, r - 1.0);
}

double PhiFunction::radial_d1(std::size_t b, double r) const {
    const Block& blk = blocks_[b];
    if (r <= 1.0) return 0.0;
    if (r >= 2.0) return diff1(blk.outer, r);
    return poly_d1(blk.bridge, r - 1.0);
}

double PhiFunction::radial_d2(std::size_t b, double r) const {
    const Block& blk = blocks_[b];
    if (r <= 1.0) return 0.0;
    if (r >= 2.0) return diff2(blk.outer, r);
    return poly_d2(blk.bridge, r - 1.0);
}

int PhiFunction::dim() const {
    int d = 0;
    for (const auto& b : blocks_) d += b.dim;
    return d;
}

double PhiFunction::operator()(const Vec& x) const {
    double v = 1.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        v *= radial_value(b, block_radius(blocks_[b], x));
    return v;
}

Vec PhiFunction::gradient(const Vec& x) const {
    Vec g{0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Block& blk = blocks_[b];
        const double r = block_radius(blk, x);
        if (r == 0.0) continue;
        double others = 1.0;
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            if (k != b) others *= radial_value(k, block_radius(blocks_[k], x));
        const double d1 = radial_d1(b, r);
        for (int a = blk.axis_offset; a < blk.axis_offset + blk.dim; ++a)
            g[a] = others * d1 * x[a] / r;
    }
    return g;
}

double PhiFunction::block_trace(const Vec& x, int offset, int dim) const {
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Block& blk = blocks_[b];
        if (blk.axis_offset < offset || blk.axis_offset + blk.dim > offset + dim)
            continue;
        const double r = block_radius(blk, x);
        double others = 1.0;
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            if (k != b) others *= radial_value(k, block_radius(blocks_[k], x));
        const double tr =
            (r == 0.0) ? 0.0 : radial_d2(b, r) + (blk.dim - 1) * radial_d1(b, r) / r;
        acc += others * tr;
    }
    return acc;
}

double PhiFunction::laplacian(const Vec& x) const { return block_trace(x, 0, dim()); }

Evaluand PhiFunction::evaluand() const {
    Evaluand e;
    e.value = [p = *this](const Vec& x) { return p(x); };
    e.gradient = [p = *this](const Vec& x) { return p.gradient(x); };
    e.block_trace = [p = *this](const Vec& x, int offset, int dim) {
        return p.block_trace(x, offset, dim);
    };
    return e;
}

PhiFunction build_phi(const LevyKernelSpec& spec) {
    PhiFunction phi;
    phi.blocks_.push_back(make_block(spec, 0));
    return phi;
}

PhiFunction build_phi_anisotropic(const std::vector<LevyKernelSpec>& specs) {
    PhiFunction phi;
    int off = 0;
    for (const auto& s : specs) {
        phi.blocks_.push_back(make_block(s, off));
        off += s.dim;
    }
    if (off > 3) throw std::invalid_argument("build_phi_anisotropic: too many axes");
    return phi;
}

bool PhiBoundsReport::finite() const {
    return std::isfinite(levy_ratio) && std::isfinite(bilinear_ratio) &&
           std::isfinite(near_ratio) && std::isfinite(far_ratio);
}

namespace {

std::vector<Vec> sample_points(int dim, double radius) {
    const std::vector<double> radii = {0.0, 0.31, 0.72, 1.05, 1.33, 1.71, 1.97,
                                       2.21, 2.94, 4.1,  6.3,  8.2,  12.1, 16.3,
                                       20.2, radius};
    std::vector<Vec> pts;
    for (double r : radii) {
        if (dim == 1) {
            pts.push_back({r, 0.0, 0.0});
        } else if (dim == 2) {
            pts.push_back({r, 0.0, 0.0});
            pts.push_back({r / std::sqrt(2.0), r / std::sqrt(2.0), 0.0});
            pts.push_back({0.0, r, 0.0});
        } else {
            pts.push_back({r, 0.0, 0.0});
            pts.push_back({0.0, 0.0, r});
            const double s = r / std::sqrt(3.0);
            pts.push_back({s, s, s});
        }
    }
    return pts;
}

}  // namespace

PhiBoundsReport verify_phi_bounds(const PhiFunction& phi, const OperatorSpec& op,
                                  const std::vector<SpaceBump>& psis,
                                  double sample_radius) {
    PhiBoundsReport rep;
    const Evaluand pe = phi.evaluand();
    const auto pts = sample_points(op.dim(), sample_radius);

    for (const Vec& x : pts) {
        const double pv = phi(x);
        const double lp = apply_at(op, pe, x);
        rep.levy_ratio = std::max(rep.levy_ratio, std::abs(lp) / pv);
        const double near = apply_range(op, pe, x, 0.0, 1.0, true);
        const double far = apply_range(op, pe, x, 1.0, 0.0, true);
        rep.near_ratio = std::max(rep.near_ratio, near / pv);
        rep.far_ratio = std::max(rep.far_ratio, far / pv);
        for (const auto& psi : psis) {
            const double b = bilinear_at(op, psi.evaluand(), pe, x);
            const double scale = std::max(psi.sup_norm(), psi.grad_sup_norm());
            rep.bilinear_ratio = std::max(rep.bilinear_ratio, std::abs(b) / (scale * pv));
        }
    }
    return rep;
}

double phi_comparability(const PhiFunction& phi, const KernelField& p1) {
    const Grid& g = p1.grid();
    double c = 1.0;
    for (std::size_t i = 0; i < p1.field.size(); ++i) {
        const Vec x = g.node(i);
        if (norm(x, g.dim) > p1.trusted_radius()) continue;
        const double ratio = phi(x) / p1.field[i];
        c = std::max({c, ratio, 1.0 / ratio});
    }
    return c;
}

}  // namespace nlheat
