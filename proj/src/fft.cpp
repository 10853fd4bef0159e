#include "nlheat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace nlheat {

namespace {

std::mutex plan_mutex;  // FFTW planning is not thread-safe

// Phase bookkeeping for the centered grids: with x_j = (j - N/2) h and
// xi_k = (k - N/2) dxi, h dxi = 2pi/N, the centered exponential splits into
// (-1)^j (-1)^k (-1)^{N/2} factors around a plain DFT.
std::vector<double> centered_transform(const Grid& g, std::span<const double> in,
                                       int fftw_sign, double scale) {
    const int n = g.nodes_per_axis;
    const std::size_t total = g.total_nodes();
    if (in.size() != total) throw std::invalid_argument("centered_transform: size mismatch");

    fftw_complex* buf = fftw_alloc_complex(total);
    for (std::size_t i = 0; i < total; ++i) {
        const auto idx = g.unflatten(i);
        int parity = 0;
        for (int a = 0; a < g.dim; ++a) parity += idx[a];
        const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
        buf[i][0] = sign * in[i];
        buf[i][1] = 0.0;
    }

    fftw_plan plan;
    {
        std::scoped_lock lock(plan_mutex);
        int dims[3] = {n, n, n};
        plan = fftw_plan_dft(g.dim, dims, buf, buf, fftw_sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::scoped_lock lock(plan_mutex);
        fftw_destroy_plan(plan);
    }

    const double global = (g.dim * (n / 2)) % 2 == 0 ? 1.0 : -1.0;
    std::vector<double> out(total);
    for (std::size_t i = 0; i < total; ++i) {
        const auto idx = g.unflatten(i);
        int parity = 0;
        for (int a = 0; a < g.dim; ++a) parity += idx[a];
        const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
        out[i] = scale * global * sign * buf[i][0];
    }
    fftw_free(buf);
    return out;
}

}  // namespace

std::vector<double> centered_inverse_transform(const Grid& g,
                                               std::span<const double> dual_values) {
    const double scale = std::pow(g.dual_spacing() / (2.0 * pi), g.dim);
    return centered_transform(g, dual_values, FFTW_FORWARD, scale);
}

std::vector<double> centered_forward_transform(const Grid& g,
                                               std::span<const double> primal_values) {
    const double scale = std::pow(g.spacing(), g.dim);
    return centered_transform(g, primal_values, FFTW_BACKWARD, scale);
}

}  // namespace nlheat
