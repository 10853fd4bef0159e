#include "nlheat/bump.hpp"

#include "nlheat/quadrature.hpp"

namespace nlheat {

double eta_normalization() {
    static const double value = [] {
        const auto q = integrate_adaptive([](double s) { return Bump::value(s); }, -1.0,
                                          1.0, 0.0, 1e-14, 32);
        return 1.0 / q.value;
    }();
    return value;
}

double SpaceBump::operator()(const Vec& x) const {
    double v = amplitude;
    for (int a = 0; a < dim; ++a) v *= Bump::value((x[a] - center[a]) / width[a]);
    return v;
}

Vec SpaceBump::gradient(const Vec& x) const {
    Vec g{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        double v = amplitude;
        for (int b = 0; b < dim; ++b) {
            const double s = (x[b] - center[b]) / width[b];
            v *= (b == a) ? Bump::d1(s) / width[b] : Bump::value(s);
        }
        g[a] = v;
    }
    return g;
}

double SpaceBump::laplacian(const Vec& x) const {
    double acc = 0.0;
    for (int a = 0; a < dim; ++a) {
        double v = amplitude;
        for (int b = 0; b < dim; ++b) {
            const double s = (x[b] - center[b]) / width[b];
            v *= (b == a) ? Bump::d2(s) / (width[b] * width[b]) : Bump::value(s);
        }
        acc += v;
    }
    return acc;
}

double SpaceBump::grad_sup_norm() const {
    // |eta'| peaks just inside the support edge; a dense scan is exact enough
    // for the max-norm scaling of the bilinear bound
    double m = 0.0;
    for (int i = 0; i <= 400; ++i) m = std::max(m, std::abs(Bump::d1(-1.0 + i / 200.0)));
    double wmin = width[0];
    for (int a = 1; a < dim; ++a) wmin = std::min(wmin, width[a]);
    return amplitude * m / wmin;
}

Evaluand SpaceBump::evaluand() const {
    Evaluand e;
    e.value = [b = *this](const Vec& x) { return b(x); };
    e.gradient = [b = *this](const Vec& x) { return b.gradient(x); };
    e.block_trace = [b = *this](const Vec& x, int offset, int dim) {
        double acc = 0.0;
        for (int a = offset; a < offset + dim; ++a) {
            double v = b.amplitude;
            for (int c = 0; c < b.dim; ++c) {
                const double s = (x[c] - b.center[c]) / b.width[c];
                v *= (c == a) ? Bump::d2(s) / (b.width[c] * b.width[c]) : Bump::value(s);
            }
            acc += v;
        }
        return acc;
    };
    return e;
}

}  // namespace nlheat
