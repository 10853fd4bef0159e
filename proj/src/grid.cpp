#include "nlheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nlheat {

double norm(const Vec& x, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[a] * x[a];
    return std::sqrt(s);
}

double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::size_t Grid::total_nodes() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(nodes_per_axis);
    return n;
}

std::size_t Grid::center_index() const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) idx[a] = nodes_per_axis / 2;
    return flatten(idx);
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % nodes_per_axis);
        flat /= nodes_per_axis;
    }
    return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a)
        flat = flat * nodes_per_axis + static_cast<std::size_t>(idx[a]);
    return flat;
}

Vec Grid::node(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Vec x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = axis_coord(idx[a]);
    return x;
}

Vec Grid::dual_node(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Vec xi{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) xi[a] = dual_axis_coord(idx[a]);
    return xi;
}

bool Grid::inside(const Vec& x) const {
    for (int a = 0; a < dim; ++a)
        if (std::abs(x[a]) > half_width) return false;
    return true;
}

Grid Grid::defaults(int dim) {
    switch (dim) {
        case 1: return {1, 64.0, 4096};
        case 2: return {2, 32.0, 512};
        case 3: return {3, 16.0, 128};
        default: throw std::invalid_argument("Grid::defaults: dim must be 1, 2 or 3");
    }
}

bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.half_width == b.half_width &&
           a.nodes_per_axis == b.nodes_per_axis;
}

TailModel TailModel::radial(std::function<double(double)> profile) {
    TailModel t;
    t.eval = [p = std::move(profile)](const Vec& x) {
        double s = 0.0;
        for (double c : x) s += c * c;
        return p(std::sqrt(s));
    };
    return t;
}

namespace {

// 4-point Lagrange weights for local coordinate s in [0,1] relative to the
// second stencil node.
inline void cubic_weights(double s, double w[4]) {
    w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
    w[1] = (s - 1.0) * (s + 1.0) * (s - 2.0) / 2.0;
    w[2] = -s * (s + 1.0) * (s - 2.0) / 2.0;
    w[3] = s * (s - 1.0) * (s + 1.0) / 6.0;
}

}  // namespace

double Field::eval(const Vec& x) const {
    const Grid& g = grid_;
    for (int a = 0; a < g.dim; ++a) {
        if (std::abs(x[a]) > g.half_width)
            return tail_.eval ? tail_.eval(x) : 0.0;
    }
    const double h = g.spacing();
    const int n = g.nodes_per_axis;

    int base[3] = {0, 0, 0};
    double w[3][4];
    for (int a = 0; a < g.dim; ++a) {
        const double u = (x[a] + g.half_width) / h;
        int i1 = static_cast<int>(std::floor(u));
        double s = u - i1;
        // stencil nodes i1-1 .. i1+2, shifted into range at the edges
        int i0 = std::clamp(i1 - 1, 0, n - 4);
        s += static_cast<double>(i1 - 1 - i0);
        base[a] = i0;
        cubic_weights(s, w[a]);
    }

    double acc = 0.0;
    const int la = (g.dim > 0) ? 4 : 1;
    const int lb = (g.dim > 1) ? 4 : 1;
    const int lc = (g.dim > 2) ? 4 : 1;
    for (int ia = 0; ia < la; ++ia) {
        const double wa = w[0][ia];
        for (int ib = 0; ib < lb; ++ib) {
            const double wb = (g.dim > 1) ? w[1][ib] : 1.0;
            for (int ic = 0; ic < lc; ++ic) {
                const double wc = (g.dim > 2) ? w[2][ic] : 1.0;
                std::array<int, 3> idx{base[0] + ia, base[1] + ib, base[2] + ic};
                acc += wa * wb * wc * values_[g.flatten(idx)];
            }
        }
    }
    return acc;
}

double Field::integral() const {
    double cell = 1.0;
    for (int a = 0; a < grid_.dim; ++a) cell *= grid_.spacing();
    return cell * pairwise_sum(values_);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Field Field::sample(const Grid& g, const std::function<double(const Vec&)>& f) {
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.node(i));
    return out;
}

namespace {

// shifts a multi-index along an axis, clamped to the grid
inline std::size_t shifted(const Grid& g, std::array<int, 3> idx, int axis, int by) {
    idx[axis] = std::clamp(idx[axis] + by, 0, g.nodes_per_axis - 1);
    return g.flatten(idx);
}

double stencil_d1(const Field& f, const std::array<int, 3>& idx, int axis) {
    const Grid& g = f.grid();
    const double h = g.spacing();
    const int k = idx[axis];
    const int n = g.nodes_per_axis;
    if (k >= 2 && k <= n - 3) {
        const double m2 = f[shifted(g, idx, axis, -2)];
        const double m1 = f[shifted(g, idx, axis, -1)];
        const double p1 = f[shifted(g, idx, axis, +1)];
        const double p2 = f[shifted(g, idx, axis, +2)];
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    }
    const int dir = (k < 2) ? 1 : -1;
    const double f0 = f[g.flatten(idx)];
    const double f1 = f[shifted(g, idx, axis, dir)];
    const double f2 = f[shifted(g, idx, axis, 2 * dir)];
    return dir * (-1.5 * f0 + 2.0 * f1 - 0.5 * f2) / h;
}

double stencil_d2(const Field& f, const std::array<int, 3>& idx, int axis) {
    const Grid& g = f.grid();
    const double h = g.spacing();
    const int k = idx[axis];
    const int n = g.nodes_per_axis;
    if (k >= 2 && k <= n - 3) {
        const double m2 = f[shifted(g, idx, axis, -2)];
        const double m1 = f[shifted(g, idx, axis, -1)];
        const double c = f[g.flatten(idx)];
        const double p1 = f[shifted(g, idx, axis, +1)];
        const double p2 = f[shifted(g, idx, axis, +2)];
        return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    }
    const int dir = (k < 2) ? 1 : -1;
    const double f0 = f[g.flatten(idx)];
    const double f1 = f[shifted(g, idx, axis, dir)];
    const double f2 = f[shifted(g, idx, axis, 2 * dir)];
    return (f0 - 2.0 * f1 + f2) / (h * h);
}

}  // namespace

Field field_derivative(const Field& f, int axis) {
    Field out(f.grid());
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = stencil_d1(f, g.unflatten(i), axis);
    return out;
}

Field field_second_derivative(const Field& f, int axis_i, int axis_j) {
    const Grid& g = f.grid();
    if (axis_i == axis_j) {
        Field out(g);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = stencil_d2(f, g.unflatten(i), axis_i);
        return out;
    }
    return field_derivative(field_derivative(f, axis_i), axis_j);
}

double sup_diff(const Field& a, const Field& b, double radius) {
    const Grid& g = a.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (norm(g.node(i), g.dim) > radius) continue;
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double l1_diff(const Field& a, const Field& b, double radius) {
    const Grid& g = a.grid();
    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (norm(g.node(i), g.dim) > radius) continue;
        diffs.push_back(std::abs(a[i] - b[i]));
    }
    double cell = 1.0;
    for (int a2 = 0; a2 < g.dim; ++a2) cell *= g.spacing();
    return cell * pairwise_sum(diffs);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int workers = std::min<int>(jobs, static_cast<int>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < n;
                 i += static_cast<std::size_t>(workers))
                body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nlheat
