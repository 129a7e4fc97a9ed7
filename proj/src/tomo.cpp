#include "heron/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace heron {

namespace {

double canonical_phase(double theta) {
    const double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    return t;
}

// Uniform double in [0,1) from the top 53 bits; stable across platforms.
double next_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Vec quadrature_projector(int dim, double theta, double x) {
    const Eigen::VectorXd psi = hermite_functions(dim, x);
    Vec v(dim);
    for (int n = 0; n < dim; ++n) v[n] = std::polar(psi[n], theta * n);
    return v;  // v_n = <n|x,theta> = e^{i n theta} psi_n(x)
}

struct QuadratureCdf {
    std::vector<double> xs;
    std::vector<double> cdf;  // normalized to 1

    double invert(double u) const {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.begin()) return xs.front();
        if (it == cdf.end()) return xs.back();
        const std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
        const std::size_t lo = hi - 1;
        const double span = cdf[hi] - cdf[lo];
        const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
        return xs[lo] + frac * (xs[hi] - xs[lo]);
    }
};

// Trapezoid CDF on a grid refined until its total mass is 1 within 1e-7
// (the pdf integrates to 1 exactly, so the deficit measures grid error).
QuadratureCdf build_cdf(const DensityOperator& rho, double theta) {
    const double reach = std::sqrt(2.0 * rho.dim()) + 6.0;
    int n = 4097;
    const int n_max = 1 << 17;
    for (;; n = 2 * n - 1) {
        QuadratureCdf c;
        c.xs.resize(n);
        c.cdf.resize(n);
        std::vector<double> pdf(n);
        for (int i = 0; i < n; ++i) {
            c.xs[i] = -reach + 2.0 * reach * i / (n - 1);
            pdf[i] = std::max(0.0, quadrature_pdf(rho, theta, c.xs[i]));
        }
        const double h = c.xs[1] - c.xs[0];
        c.cdf[0] = 0.0;
        for (int i = 1; i < n; ++i)
            c.cdf[i] = c.cdf[i - 1] + 0.5 * h * (pdf[i - 1] + pdf[i]);
        const double mass = c.cdf.back();
        if (std::abs(mass - 1.0) < 1e-7 || n >= n_max) {
            for (double& v : c.cdf) v /= mass;
            return c;
        }
    }
}

}  // namespace

PhaseSchedule PhaseSchedule::uniform_scan(int phase_count) {
    if (phase_count < 1) throw RangeError("phase count must be >= 1");
    PhaseSchedule s;
    s.phases.resize(phase_count);
    for (int k = 0; k < phase_count; ++k)
        s.phases[k] = std::numbers::pi * k / phase_count;
    return s;
}

PhaseSchedule PhaseSchedule::fixed(std::vector<double> thetas) {
    if (thetas.empty()) throw RangeError("phase schedule must be non-empty");
    for (double& t : thetas) t = canonical_phase(t);
    return PhaseSchedule{std::move(thetas)};
}

Eigen::VectorXd hermite_functions(int dim, double x) {
    Eigen::VectorXd psi(dim);
    const double g = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    psi[0] = g;
    if (dim > 1) psi[1] = std::sqrt(2.0) * x * g;
    for (int n = 2; n < dim; ++n)
        psi[n] = std::sqrt(2.0 / n) * x * psi[n - 1] -
                 std::sqrt((n - 1.0) / n) * psi[n - 2];
    return psi;
}

double quadrature_pdf(const DensityOperator& rho, double theta, double x) {
    const Vec v = quadrature_projector(rho.dim(), theta, x);
    return std::max(0.0, (v.adjoint() * rho.mat * v).value().real());
}

std::vector<QuadratureRecord> sample_quadratures(const DensityOperator& rho,
                                                 int n_samples,
                                                 const PhaseSchedule& schedule,
                                                 std::uint64_t seed) {
    if (n_samples < 1) throw RangeError("need at least one sample");
    const std::vector<double> phases =
        schedule.phases.empty() ? PhaseSchedule::uniform_scan().phases
                                : schedule.phases;

    std::map<double, QuadratureCdf> cdfs;
    for (double th : phases) {
        const double t = canonical_phase(th);
        if (!cdfs.count(t)) cdfs.emplace(t, build_cdf(rho, t));
    }

    std::mt19937_64 engine(seed);
    std::vector<QuadratureRecord> records;
    records.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double theta = canonical_phase(phases[i % phases.size()]);
        const double u = next_uniform(engine);
        records.push_back({theta, cdfs.at(theta).invert(u)});
    }
    return records;
}

TomoResult mle_reconstruct(const std::vector<QuadratureRecord>& records,
                           const TomoSettings& settings) {
    if (records.empty()) throw EmptyRecords("no quadrature records");
    if (settings.dim < 1 || settings.max_iters < 1 || settings.convergence_tol <= 0.0)
        throw RangeError("invalid tomography settings");

    const int d = settings.dim;
    const Eigen::Index n_rec = static_cast<Eigen::Index>(records.size());

    // Projector amplitudes, one column per record.
    Mat v(d, n_rec);
    for (Eigen::Index j = 0; j < n_rec; ++j) {
        double theta = canonical_phase(records[j].theta);
        if (settings.phase_bins) {
            const int bins = *settings.phase_bins;
            if (bins < 1) throw RangeError("phase_bins must be >= 1");
            const int b = std::min<int>(
                bins - 1, static_cast<int>(theta / std::numbers::pi * bins));
            theta = std::numbers::pi * (b + 0.5) / bins;
        }
        v.col(j) = quadrature_projector(d, theta, records[j].x);
    }

    Mat rho = Mat::Identity(d, d) / static_cast<double>(d);
    TomoResult result;
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int it = 0; it < settings.max_iters; ++it) {
        const Mat w = rho * v;
        Eigen::VectorXd p(n_rec);
        double ll = 0.0;
        for (Eigen::Index j = 0; j < n_rec; ++j) {
            const double pj =
                std::max(v.col(j).dot(w.col(j)).real(), 1e-300);
            p[j] = pj;
            ll += std::log(pj);
        }
        result.log_likelihood_trace.push_back(ll);
        result.log_likelihood = ll;
        result.iterations = it + 1;
        if (ll - prev_ll < settings.convergence_tol * static_cast<double>(n_rec) &&
            it > 0) {
            result.converged = true;
            rho = (rho + rho.adjoint()).eval() / 2.0;
            break;
        }
        prev_ll = ll;

        const Mat scaled = v * p.cwiseInverse().asDiagonal();
        const Mat r = (scaled * v.adjoint()) / static_cast<double>(n_rec);
        rho = r * rho * r;
        rho = ((rho + rho.adjoint()) / 2.0).eval();
        rho /= rho.trace().real();
    }

    result.rho = DensityOperator(std::move(rho));
    result.rho.normalize();
    return result;
}

MetricsReport metrics(const DensityOperator& rho) {
    const int d = rho.dim();
    MetricsReport report;
    report.populations.resize(d);
    for (int n = 0; n < d; ++n) report.populations[n] = rho.mat(n, n).real();
    report.purity = (rho.mat * rho.mat).trace().real();
    report.mean_photons = 0.0;
    for (int n = 0; n < d; ++n) report.mean_photons += n * report.populations[n];
    report.population_above_three = 0.0;
    for (int n = 4; n < d; ++n)
        report.population_above_three += report.populations[n];
    return report;
}

}  // namespace heron
