#include "heron/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace heron {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_dim(int dim) {
    if (dim < 1) throw RangeError("truncation dimension must be >= 1");
}

}  // namespace

// --- FockVector -----------------------------------------------------------

FockVector::FockVector(int dim) {
    check_dim(dim);
    amps = Vec::Zero(dim);
}

FockVector& FockVector::normalize() {
    const double n = amps.norm();
    if (n == 0.0) throw ZeroState("cannot normalize a zero state vector");
    amps /= n;
    return *this;
}

FockVector FockVector::basis(int n, int dim) {
    check_dim(dim);
    if (n < 0 || n >= dim) throw RangeError("basis index out of range");
    FockVector v(dim);
    v.amps[n] = 1.0;
    return v;
}

// --- DensityOperator ------------------------------------------------------

DensityOperator& DensityOperator::normalize() {
    const double tr = trace_real();
    if (tr <= 0.0) throw ZeroState("cannot normalize a traceless operator");
    mat /= tr;
    return *this;
}

DensityOperator DensityOperator::pure(const FockVector& psi) {
    return DensityOperator((psi.amps * psi.amps.adjoint()).eval());
}

double DensityOperator::hermiticity_error() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es((mat + mat.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

bool DensityOperator::valid(double herm_tol, double trace_tol,
                            double eig_floor) const {
    if (hermiticity_error() > herm_tol) return false;
    if (std::abs(trace_real() - 1.0) > trace_tol) return false;
    if (min_eigenvalue() < eig_floor) return false;
    return true;
}

// --- MultiModeState -------------------------------------------------------

MultiModeState::MultiModeState(std::vector<int> dims)
    : MultiModeState(std::move(dims), Vec()) {
    amps_ = Vec::Zero(static_cast<Eigen::Index>(strides_[0]) * dims_[0]);
    amps_[0] = 1.0;
}

MultiModeState::MultiModeState(std::vector<int> dims, Vec amps)
    : dims_(std::move(dims)) {
    if (dims_.empty()) throw RangeError("state needs at least one mode");
    for (int d : dims_) check_dim(d);
    strides_.resize(dims_.size());
    std::size_t s = 1;
    for (int k = static_cast<int>(dims_.size()) - 1; k >= 0; --k) {
        strides_[k] = s;
        s *= static_cast<std::size_t>(dims_[k]);
    }
    if (amps.size() > 0) {
        if (static_cast<std::size_t>(amps.size()) != s)
            throw DimensionError("amplitude tensor size does not match mode dims");
        amps_ = std::move(amps);
    }
}

MultiModeState MultiModeState::product(std::span<const FockVector> factors) {
    if (factors.empty()) throw RangeError("state needs at least one mode");
    std::vector<int> dims;
    dims.reserve(factors.size());
    for (const auto& f : factors) dims.push_back(f.dim());
    MultiModeState out(dims);
    Vec amps = factors[0].amps;
    for (std::size_t k = 1; k < factors.size(); ++k) {
        Vec next(amps.size() * factors[k].amps.size());
        Eigen::Index j = 0;
        for (Eigen::Index i = 0; i < amps.size(); ++i)
            for (Eigen::Index n = 0; n < factors[k].amps.size(); ++n)
                next[j++] = amps[i] * factors[k].amps[n];
        amps = std::move(next);
    }
    out.amps_ = std::move(amps);
    return out;
}

void MultiModeState::check_mode(int mode) const {
    if (mode < 0 || mode >= mode_count())
        throw DimensionError("mode index out of range");
}

std::size_t MultiModeState::flat_index(std::span<const int> idx) const {
    if (idx.size() != dims_.size())
        throw DimensionError("index rank does not match mode count");
    std::size_t f = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims_[k])
            throw DimensionError("mode occupation out of range");
        f += static_cast<std::size_t>(idx[k]) * strides_[k];
    }
    return f;
}

Complex MultiModeState::amplitude(std::span<const int> idx) const {
    return amps_[static_cast<Eigen::Index>(flat_index(idx))];
}

Eigen::VectorXd MultiModeState::mode_populations(int mode) const {
    check_mode(mode);
    const int d = dims_[mode];
    const std::size_t stride = strides_[mode];
    Eigen::VectorXd pops = Eigen::VectorXd::Zero(d);
    const std::size_t total = static_cast<std::size_t>(amps_.size());
    for (std::size_t f = 0; f < total; ++f) {
        const int n = static_cast<int>((f / stride) % static_cast<std::size_t>(d));
        pops[n] += std::norm(amps_[static_cast<Eigen::Index>(f)]);
    }
    return pops;
}

MultiModeState MultiModeState::with_vacuum_mode(int dim) const {
    check_dim(dim);
    std::vector<int> dims = dims_;
    dims.push_back(dim);
    Vec amps = Vec::Zero(amps_.size() * dim);
    for (Eigen::Index i = 0; i < amps_.size(); ++i) amps[i * dim] = amps_[i];
    return MultiModeState(std::move(dims), std::move(amps));
}

MultiModeState apply_operator(const MultiModeState& state, int mode,
                              const Mat& op) {
    state.check_mode(mode);
    const int d = state.dims_[mode];
    if (op.rows() != d || op.cols() != d)
        throw DimensionError("operator dimension does not match mode");

    const std::size_t inner = state.strides_[mode];
    const std::size_t outer =
        static_cast<std::size_t>(state.amps_.size()) /
        (inner * static_cast<std::size_t>(d));

    MultiModeState out = state;
    Vec scratch(d);
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * inner * static_cast<std::size_t>(d);
        for (std::size_t in = 0; in < inner; ++in) {
            for (int n = 0; n < d; ++n)
                scratch[n] = state.amps_[static_cast<Eigen::Index>(
                    base + static_cast<std::size_t>(n) * inner + in)];
            Vec res = op * scratch;
            for (int n = 0; n < d; ++n)
                out.amps_[static_cast<Eigen::Index>(
                    base + static_cast<std::size_t>(n) * inner + in)] = res[n];
        }
    }
    return out;
}

MultiModeState beamsplitter_apply(const MultiModeState& state, int mode_a,
                                  int mode_b, double transmittance) {
    state.check_mode(mode_a);
    state.check_mode(mode_b);
    if (mode_a == mode_b) throw DimensionError("beamsplitter needs two distinct modes");
    if (state.dims_[mode_a] != state.dims_[mode_b])
        throw DimensionError("coupled modes must share one truncation");
    if (transmittance < 0.0 || transmittance > 1.0)
        throw RangeError("transmittance must lie in [0,1]");

    const int d = state.dims_[mode_a];
    const Mat bs = beamsplitter_matrix(transmittance, d);

    const std::size_t sa = state.strides_[mode_a];
    const std::size_t sb = state.strides_[mode_b];
    const std::size_t total = static_cast<std::size_t>(state.amps_.size());

    MultiModeState out = state;
    Vec scratch(d * d);
    std::vector<std::size_t> bases;
    bases.reserve(total / static_cast<std::size_t>(d * d));
    // Flat indices with both coupled occupations at zero.
    for (std::size_t f = 0; f < total; ++f) {
        const bool a0 = (f / sa) % static_cast<std::size_t>(d) == 0;
        const bool b0 = (f / sb) % static_cast<std::size_t>(d) == 0;
        if (a0 && b0) bases.push_back(f);
    }
    for (std::size_t base : bases) {
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                scratch[m * d + n] = state.amps_[static_cast<Eigen::Index>(
                    base + static_cast<std::size_t>(m) * sa +
                    static_cast<std::size_t>(n) * sb)];
        Vec res = bs * scratch;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                out.amps_[static_cast<Eigen::Index>(
                    base + static_cast<std::size_t>(m) * sa +
                    static_cast<std::size_t>(n) * sb)] = res[m * d + n];
    }
    return out;
}

// --- constructions --------------------------------------------------------

FockVector coherent_state(Complex alpha, int dim) {
    check_dim(dim);
    FockVector v(dim);
    // c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), deliberately not renormalized:
    // the truncation deficit is the caller's diagnostic.
    const double pre = std::exp(-0.5 * std::norm(alpha));
    Complex c = pre;
    v.amps[0] = c;
    for (int n = 1; n < dim; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n));
        v.amps[n] = c;
    }
    return v;
}

Mat annihilation_operator(int dim) {
    check_dim(dim);
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Mat number_operator(int dim) {
    check_dim(dim);
    Mat n = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Mat quadrature_operator(double theta, int dim) {
    const Mat a = annihilation_operator(dim);
    const Complex phase = std::polar(1.0, theta);
    return (a * std::conj(phase) + a.adjoint() * phase) / std::sqrt(2.0);
}

Mat displacement_operator(Complex beta, int dim, int pad) {
    check_dim(dim);
    const int big = dim + std::max(pad, 0);
    const Mat a = annihilation_operator(big);
    Mat gen = beta * a.adjoint() - std::conj(beta) * a;
    Mat full = gen.exp();
    return full.topLeftCorner(dim, dim);
}

Mat squeeze_operator(double r, double phi, int dim, int pad) {
    check_dim(dim);
    if (r < 0.0) throw RangeError("squeeze magnitude must be >= 0");
    const int big = dim + std::max(pad, 0);
    const Mat a = annihilation_operator(big);
    const Complex e2 = std::polar(1.0, 2.0 * phi);
    Mat gen = 0.5 * r * (std::conj(e2) * (a * a) - e2 * (a.adjoint() * a.adjoint()));
    Mat full = gen.exp();
    return full.topLeftCorner(dim, dim);
}

Mat phase_rotation(double theta, int dim) {
    check_dim(dim);
    Mat r = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) r(n, n) = std::polar(1.0, theta * n);
    return r;
}

Mat beamsplitter_matrix(double transmittance, int dim) {
    check_dim(dim);
    const double t = std::sqrt(transmittance);
    const double r = std::sqrt(1.0 - transmittance);
    Mat bs = Mat::Zero(dim * dim, dim * dim);
    // |m,n> -> (t a† + r b†)^m (-r a† + t b†)^n |0,0> / sqrt(m! n!)
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            for (int j = 0; j <= m; ++j) {
                for (int k = 0; k <= n; ++k) {
                    const int p = j + k;
                    const int q = m + n - j - k;
                    if (p >= dim || q >= dim) continue;
                    const double lg =
                        0.5 * (log_factorial(p) + log_factorial(q) -
                               log_factorial(m) - log_factorial(n)) +
                        log_factorial(m) - log_factorial(j) - log_factorial(m - j) +
                        log_factorial(n) - log_factorial(k) - log_factorial(n - k);
                    double amp = std::exp(lg) * std::pow(t, j + n - k) *
                                 std::pow(r, m - j + k);
                    if (k % 2 == 1) amp = -amp;
                    bs(p * dim + q, m * dim + n) += amp;
                }
            }
        }
    }
    return bs;
}

// --- partial trace --------------------------------------------------------

namespace {

DensityOperator trace_out(const Vec& amps, const std::vector<int>& dims,
                          std::span<const int> keep) {
    if (keep.empty()) throw RangeError("keep set must be non-empty");
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size()))
            throw DimensionError("keep index out of range");
        if (kept[k]) throw DimensionError("duplicate keep index");
        kept[k] = true;
    }

    std::size_t keep_dim = 1, trace_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k)
        (kept[k] ? keep_dim : trace_dim) *= static_cast<std::size_t>(dims[k]);

    // Rearrange into a (keep, trace) matrix, then rho = M M†.
    Mat m = Mat::Zero(static_cast<Eigen::Index>(keep_dim),
                      static_cast<Eigen::Index>(trace_dim));
    const std::size_t total = static_cast<std::size_t>(amps.size());
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t tmp = f;
        for (std::size_t k = dims.size(); k-- > 0;) {
            idx[k] = tmp % static_cast<std::size_t>(dims[k]);
            tmp /= static_cast<std::size_t>(dims[k]);
        }
        std::size_t ki = 0, ti = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k])
                ki = ki * static_cast<std::size_t>(dims[k]) + idx[k];
            else
                ti = ti * static_cast<std::size_t>(dims[k]) + idx[k];
        }
        m(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(ti)) =
            amps[static_cast<Eigen::Index>(f)];
    }
    return DensityOperator((m * m.adjoint()).eval());
}

}  // namespace

DensityOperator partial_trace(const MultiModeState& state,
                              std::span<const int> keep) {
    return trace_out(state.amplitudes(), state.mode_dims(), keep);
}

DensityOperator partial_trace_density(const Mat& rho,
                                      const std::vector<int>& dims,
                                      std::span<const int> keep) {
    if (keep.empty()) throw RangeError("keep set must be non-empty");
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    if (rho.rows() != static_cast<Eigen::Index>(total) || rho.rows() != rho.cols())
        throw DimensionError("density dimension does not match mode dims");

    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size()))
            throw DimensionError("keep index out of range");
        kept[k] = true;
    }
    std::size_t keep_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (kept[k]) keep_dim *= static_cast<std::size_t>(dims[k]);

    auto split = [&](std::size_t f, std::size_t& ki, std::size_t& ti) {
        std::vector<std::size_t> idx(dims.size());
        std::size_t tmp = f;
        for (std::size_t k = dims.size(); k-- > 0;) {
            idx[k] = tmp % static_cast<std::size_t>(dims[k]);
            tmp /= static_cast<std::size_t>(dims[k]);
        }
        ki = 0;
        ti = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k])
                ki = ki * static_cast<std::size_t>(dims[k]) + idx[k];
            else
                ti = ti * static_cast<std::size_t>(dims[k]) + idx[k];
        }
    };

    Mat out = Mat::Zero(static_cast<Eigen::Index>(keep_dim),
                        static_cast<Eigen::Index>(keep_dim));
    for (std::size_t fr = 0; fr < total; ++fr) {
        std::size_t kr, tr;
        split(fr, kr, tr);
        for (std::size_t fc = 0; fc < total; ++fc) {
            std::size_t kc, tc;
            split(fc, kc, tc);
            if (tr == tc)
                out(static_cast<Eigen::Index>(kr), static_cast<Eigen::Index>(kc)) +=
                    rho(static_cast<Eigen::Index>(fr), static_cast<Eigen::Index>(fc));
        }
    }
    return DensityOperator(std::move(out));
}

// --- channels and fidelity -------------------------------------------------

DensityOperator loss_channel(const DensityOperator& rho, double eta) {
    if (eta < 0.0 || eta > 1.0) throw RangeError("loss efficiency must lie in [0,1]");
    const int d = rho.dim();
    Mat out = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        // A_k = sum_n sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k><n|
        Mat ak = Mat::Zero(d, d);
        for (int n = k; n < d; ++n) {
            const double binom = std::exp(log_factorial(n) - log_factorial(k) -
                                          log_factorial(n - k));
            ak(n - k, n) = std::sqrt(binom * std::pow(eta, n - k) *
                                     std::pow(1.0 - eta, k));
        }
        out += ak * rho.mat * ak.adjoint();
    }
    return DensityOperator(std::move(out));
}

double fidelity(const DensityOperator& rho, const FockVector& psi) {
    if (rho.dim() != psi.dim())
        throw DimensionError("state and density dimensions differ");
    const Complex f = psi.amps.adjoint() * rho.mat * psi.amps;
    return f.real();
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim())
        throw DimensionError("density dimensions differ");
    Eigen::SelfAdjointEigenSolver<Mat> es((rho.mat + rho.mat.adjoint()) / 2.0);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Mat sqrt_rho = es.eigenvectors() *
                   lam.cwiseSqrt().asDiagonal() *
                   es.eigenvectors().adjoint();
    Mat inner = sqrt_rho * sigma.mat * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Mat> es2((inner + inner.adjoint()) / 2.0);
    const double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

}  // namespace heron
