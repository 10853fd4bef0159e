#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlheat {

inline constexpr double pi = 3.14159265358979323846;

// Point in up to three dimensions; unused axes stay zero.
using Vec = std::array<double, 3>;

double norm(const Vec& x, int dim);

// Deterministic pairwise reduction; the fixed association order makes
// sums reproducible independently of how the work was scheduled.
double pairwise_sum(std::span<const double> v);

/// Uniform tensor grid on the centered box [-L, L)^d with N nodes per axis.
/// N is a power of two so that x = 0 is the node with axis index N/2, and
/// the dual grid has spacing pi/L with Nyquist frequency pi/h.
struct Grid {
    int dim = 1;
    double half_width = 64.0;
    int nodes_per_axis = 4096;

    double spacing() const { return 2.0 * half_width / nodes_per_axis; }
    double dual_spacing() const { return pi / half_width; }
    double nyquist() const { return pi / spacing(); }

    std::size_t total_nodes() const;
    std::size_t center_index() const;

    double axis_coord(int k) const { return -half_width + k * spacing(); }
    double dual_axis_coord(int k) const {
        return (k - nodes_per_axis / 2) * dual_spacing();
    }

    std::array<int, 3> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::array<int, 3>& idx) const;
    Vec node(std::size_t flat) const;
    Vec dual_node(std::size_t flat) const;

    bool inside(const Vec& x) const;

    Grid refined() const { return {dim, half_width, 2 * nodes_per_axis}; }
    Grid enlarged() const { return {dim, 2.0 * half_width, 2 * nodes_per_axis}; }

    // Grid sizes keeping desk-scale runs fast while resolving both the
    // near-origin peak and the heavy tail.
    static Grid defaults(int dim);
};

bool operator==(const Grid& a, const Grid& b);

/// Model for evaluating a sampled function outside its box. Heat-kernel
/// fields carry the power-law envelope fitted at the box edge; test
/// functions carry zero.
struct TailModel {
    std::function<double(const Vec&)> eval;  // empty means zero outside

    static TailModel zero() { return {}; }
    static TailModel radial(std::function<double(double)> profile);
};

/// Real-valued function sampled on a Grid, with cubic tensor interpolation
/// between nodes and a declared tail model outside the box.
class Field {
  public:
    Field() = default;
    explicit Field(const Grid& g) : grid_(g), values_(g.total_nodes(), 0.0) {}

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    void set_tail(TailModel t) { tail_ = std::move(t); }
    const TailModel& tail() const { return tail_; }

    /// Cubic (4-point Lagrange per axis) interpolation; outside the box the
    /// tail model decides the value.
    double eval(const Vec& x) const;

    /// h^d * sum of node values, pairwise-reduced.
    double integral() const;

    double max_abs() const;

    static Field sample(const Grid& g, const std::function<double(const Vec&)>& f);

  private:
    Grid grid_;
    std::vector<double> values_;
    TailModel tail_;
};

/// Fourth-order centered first derivative along an axis (one-sided at the
/// edges, second order there).
Field field_derivative(const Field& f, int axis);
/// Second partial derivative along axis i and j (centered stencils).
Field field_second_derivative(const Field& f, int axis_i, int axis_j);

/// sup |a - b| over nodes with |x| <= radius.
double sup_diff(const Field& a, const Field& b, double radius);
/// L1 distance h^d * sum |a - b| over nodes with |x| <= radius.
double l1_diff(const Field& a, const Field& b, double radius);

// Static partition of [0, n) over worker threads; every index is processed
// exactly once and writes must target disjoint slots. jobs <= 1 runs inline.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace nlheat
