#include "heron/wigner.hpp"

#include <cmath>
#include <numbers>

namespace heron {

namespace {

// <m|D(beta)|n>: for m >= n, sqrt(n!/m!) beta^{m-n} e^{-|beta|^2/2} L_n^{m-n}(|beta|^2).
Mat displacement_elements(Complex beta, int dim) {
    const double b2 = std::norm(beta);
    const double gauss = std::exp(-0.5 * b2);
    std::vector<double> lf(dim);
    for (int n = 0; n < dim; ++n) lf[n] = std::lgamma(n + 1.0);

    Mat d(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n <= m; ++n) {
            const int k = m - n;
            const double lag = std::assoc_laguerre(n, k, b2);
            const double scale = std::exp(0.5 * (lf[n] - lf[m])) * gauss;
            d(m, n) = scale * std::pow(beta, k) * lag;
            if (m != n)
                d(n, m) = scale * std::pow(-std::conj(beta), k) * lag;
        }
    }
    return d;
}

}  // namespace

double WignerGrid::x_at(int i) const {
    return spec.nx == 1 ? spec.x_min
                        : spec.x_min + (spec.x_max - spec.x_min) * i / (spec.nx - 1);
}

double WignerGrid::p_at(int j) const {
    return spec.np == 1 ? spec.p_min
                        : spec.p_min + (spec.p_max - spec.p_min) * j / (spec.np - 1);
}

double WignerGrid::cell_area() const {
    const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
    const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
    return dx * dp;
}

double WignerGrid::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area();
}

double WignerGrid::min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

double WignerGrid::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double wigner_point(const DensityOperator& rho, double x, double p) {
    const int d = rho.dim();
    // W = (1/pi) Tr[rho D(2 alpha) P],  alpha = (x + ip)/sqrt(2)
    const Complex beta = std::sqrt(2.0) * Complex(x, p);
    const Mat dmat = displacement_elements(beta, d);
    Complex w = 0.0;
    for (int n = 0; n < d; ++n) {
        const double parity = (n % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < d; ++m) w += rho.mat(n, m) * dmat(m, n) * parity;
    }
    return w.real() / std::numbers::pi;
}

WignerGrid wigner_grid(const DensityOperator& rho, const GridSpec& spec) {
    if (spec.nx < 2 || spec.np < 2) throw RangeError("grid needs nx, np >= 2");
    if (spec.x_max <= spec.x_min || spec.p_max <= spec.p_min)
        throw RangeError("grid bounds are inverted");
    WignerGrid grid;
    grid.spec = spec;
    grid.values.resize(static_cast<std::size_t>(spec.nx) * spec.np);
    for (int j = 0; j < spec.np; ++j) {
        const double p = grid.p_at(j);
        for (int i = 0; i < spec.nx; ++i)
            grid.values[static_cast<std::size_t>(j) * spec.nx + i] =
                wigner_point(rho, grid.x_at(i), p);
    }
    return grid;
}

int count_negative_intervals(const DensityOperator& rho, double cut_angle,
                             double cut_range, int samples, double threshold) {
    if (samples < 100) throw RangeError("cut needs at least 100 samples");
    const double cx = std::cos(cut_angle), sx = std::sin(cut_angle);
    int count = 0;
    bool inside = false;
    for (int k = 0; k < samples; ++k) {
        const double t = -cut_range + 2.0 * cut_range * k / (samples - 1);
        const bool neg = wigner_point(rho, t * cx, t * sx) < -threshold;
        if (neg && !inside) ++count;
        inside = neg;
    }
    return count;
}

double negativity_volume(const DensityOperator& rho, const GridSpec& spec) {
    const WignerGrid grid = wigner_grid(rho, spec);
    double s = 0.0;
    for (double v : grid.values)
        if (v < 0.0) s -= v;
    return s * grid.cell_area();
}

}  // namespace heron
