#pragma once

#include <span>
#include <vector>

#include "nlheat/grid.hpp"

namespace nlheat {

/// P(x_j) = (dxi/2pi)^d sum_k S(xi_k) e^{-i <x_j, xi_k>} on the centered
/// grid pair; the trapezoidal dual-grid sum evaluated by an FFT.
std::vector<double> centered_inverse_transform(const Grid& g,
                                               std::span<const double> dual_values);

/// S(xi_k) = h^d sum_j P(x_j) e^{+i <x_j, xi_k>}; inverse of the above.
std::vector<double> centered_forward_transform(const Grid& g,
                                               std::span<const double> primal_values);

}  // namespace nlheat
