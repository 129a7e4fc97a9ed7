#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heron/fock.hpp"

using namespace heron;
using std::numbers::pi;

namespace {

// independent binomial, avoids the implementation's lgamma path
double binom(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

FockVector random_state(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g;
    FockVector v(dim);
    for (int n = 0; n < dim; ++n) v.amps[n] = Complex(g(rng), g(rng));
    return v.normalize();
}

}  // namespace

TEST_CASE("coherent state amplitudes") {
    const FockVector vac = coherent_state(0.0, 4);
    CHECK(vac.amps[0] == Complex(1.0, 0.0));
    CHECK(vac.amps[1] == Complex(0.0, 0.0));
    CHECK(vac.amps[3] == Complex(0.0, 0.0));

    // c_0 = e^{-0.845}, c_1 = 1.3 e^{-0.845}
    const FockVector c = coherent_state(1.3, 2);
    CHECK(c.amps[0].real() == doctest::Approx(0.42955735821073915).epsilon(1e-14));
    CHECK(c.amps[1].real() == doctest::Approx(0.55842456567396089).epsilon(1e-14));
    CHECK(c.amps[0].imag() == 0.0);

    // tail mass beyond n=25 is ~6e-21
    CHECK(coherent_state(1.3, 25).norm2() == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(coherent_state(1.0, 0), RangeError);
}

TEST_CASE("displacement operator") {
    const Mat id = displacement_operator(0.0, 6);
    CHECK((id - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);

    const Mat d = displacement_operator(0.5, 12);
    const FockVector coh = coherent_state(0.5, 12);
    Vec vac = Vec::Zero(12);
    vac[0] = 1.0;
    CHECK((d * vac - coh.amps).cwiseAbs().maxCoeff() < 1e-9);

    // identity on the populated subspace: states far below the cutoff
    const Complex beta(0.3, 0.2);
    const Mat prod =
        displacement_operator(beta, 10) * displacement_operator(-beta, 10);
    CHECK((prod.topLeftCorner(3, 3) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-8);
}

TEST_CASE("displacement composition picks up the symplectic phase") {
    const Complex a(0.21, -0.13), b(-0.05, 0.17);
    const int dim = 14;
    const Complex phase = std::exp((a * std::conj(b) - std::conj(a) * b) / 2.0);
    const Mat lhs = displacement_operator(a, dim) * displacement_operator(b, dim);
    const Mat rhs = phase * displacement_operator(a + b, dim);
    CHECK((lhs.topLeftCorner(6, 6) - rhs.topLeftCorner(6, 6))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
}

TEST_CASE("constructed unitaries are unitary on the populated subspace") {
    // the retained block rows/columns near the cutoff are deliberately
    // imperfect; check inputs whose image stays far from it
    auto defect = [](const Mat& u, int block) {
        const Mat p = u.adjoint() * u;
        return (p.topLeftCorner(block, block) - Mat::Identity(block, block))
            .cwiseAbs()
            .maxCoeff();
    };
    CHECK(defect(displacement_operator(Complex(0.4, 0.3), 12), 4) <= 1e-8);
    CHECK(defect(squeeze_operator(0.4, 0.7, 32), 4) <= 1e-8);
    CHECK(defect(phase_rotation(1.1, 12), 12) <= 1e-14);
}

TEST_CASE("squeeze operator") {
    CHECK((squeeze_operator(0.0, 0.0, 8) - Mat::Identity(8, 8))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    // Var(x) = e^{-2r}/2 on squeezed vacuum (Gaussian moment oracle)
    const int dim = 40;
    const Mat s = squeeze_operator(0.5, 0.0, dim);
    Vec vac = Vec::Zero(dim);
    vac[0] = 1.0;
    const Vec sq = s * vac;
    const Mat x = quadrature_operator(0.0, dim);
    const double mean = (sq.adjoint() * x * sq).value().real();
    const double var = (sq.adjoint() * x * x * sq).value().real() - mean * mean;
    CHECK(var == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-6));

    CHECK(std::abs(s(1, 0)) == 0.0);  // parity preserved
    CHECK_THROWS_AS(squeeze_operator(-0.1, 0.0, 8), RangeError);
}

TEST_CASE("phase rotation") {
    CHECK((phase_rotation(0.0, 5) - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() ==
          0.0);

    Vec v = Vec::Zero(4);
    v[0] = Complex(0.6, 0.0);
    v[3] = Complex(0.0, 0.8);
    const Vec rotated = phase_rotation(2.0 * pi / 3.0, 4) * v;
    CHECK((rotated - v).cwiseAbs().maxCoeff() < 1e-15);

    Vec one = Vec::Zero(3);
    one[1] = 1.0;
    const Vec flipped = phase_rotation(pi, 3) * one;
    CHECK(std::abs(flipped[1] - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("beamsplitter on single photon and T extremes") {
    FockVector one = FockVector::basis(1, 4);
    FockVector zero = FockVector::basis(0, 4);
    const FockVector pair[] = {one, zero};
    MultiModeState in = MultiModeState::product(pair);

    const MultiModeState out = beamsplitter_apply(in, 0, 1, 0.5);
    const int i10[] = {1, 0}, i01[] = {0, 1};
    // convention: |1,0> -> ( |1,0> + |0,1> )/sqrt(2)
    CHECK(out.amplitude(i10).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(out.amplitude(i01).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::norm(out.amplitude(i10)) == doctest::Approx(0.5));
    CHECK(std::norm(out.amplitude(i01)) == doctest::Approx(0.5));

    const MultiModeState identity = beamsplitter_apply(in, 0, 1, 1.0);
    CHECK((identity.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff() <
          1e-15);
}

TEST_CASE("beamsplitter splits |3,0> binomially") {
    FockVector three = FockVector::basis(3, 5);
    FockVector zero = FockVector::basis(0, 5);
    const FockVector pair[] = {three, zero};
    const MultiModeState out =
        beamsplitter_apply(MultiModeState::product(pair), 0, 1, 1.0 / 3.0);

    const int idx[] = {1, 2};
    const double expected = binom(3, 1) * (1.0 / 3.0) * std::pow(2.0 / 3.0, 2);
    CHECK(std::norm(out.amplitude(idx)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beamsplitter conserves photon number across the pair") {
    std::mt19937 rng(41);
    std::normal_distribution<double> g;
    const int d = 6;
    // random state supported on total photon number <= d-1, so no sector
    // is clipped by the truncation
    Vec amps = Vec::Zero(d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n + m < d; ++n)
            amps[m * d + n] = Complex(g(rng), g(rng));
    amps /= amps.norm();
    const MultiModeState in({d, d}, amps);
    const MultiModeState out = beamsplitter_apply(in, 0, 1, 0.37);

    // per-sector weight is untouched
    for (int total = 0; total < d; ++total) {
        double before = 0.0, after = 0.0;
        for (int m = 0; m <= total; ++m) {
            const int idx[] = {m, total - m};
            before += std::norm(in.amplitude(idx));
            after += std::norm(out.amplitude(idx));
        }
        CHECK(after == doctest::Approx(before).epsilon(1e-10));
    }
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("beamsplitter never moves weight between sectors") {
    // a clipped sector may lose weight past the cutoff but cannot gain
    const int d = 4;
    const FockVector pair[] = {FockVector::basis(3, d), FockVector::basis(3, d)};
    const MultiModeState in = MultiModeState::product(pair);
    const MultiModeState out = beamsplitter_apply(in, 0, 1, 0.5);
    for (int total = 0; total <= 2 * (d - 1); ++total) {
        double after = 0.0;
        for (int m = 0; m < d; ++m) {
            const int n = total - m;
            if (n < 0 || n >= d) continue;
            const int idx[] = {m, n};
            after += std::norm(out.amplitude(idx));
        }
        if (total != 6) CHECK(after < 1e-24);
    }
    CHECK(out.norm2() <= 1.0 + 1e-12);
}

TEST_CASE("partial trace") {
    std::mt19937 rng(7);
    const FockVector psi = random_state(5, rng);
    const FockVector phi = random_state(4, rng);
    const FockVector pair[] = {psi, phi};
    const MultiModeState prod = MultiModeState::product(pair);

    const int keep0[] = {0};
    const DensityOperator rho = partial_trace(prod, keep0);
    const Mat expected = psi.amps * psi.amps.adjoint();
    CHECK((rho.mat - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rho.trace_real() == doctest::Approx(prod.norm2()).epsilon(1e-12));

    const int keep1[] = {1};
    const DensityOperator rho1 = partial_trace(prod, keep1);
    CHECK((rho1.mat - phi.amps * phi.amps.adjoint()).cwiseAbs().maxCoeff() <
          1e-12);

    int empty[] = {0};
    CHECK_THROWS_AS(partial_trace(prod, std::span<const int>(empty, 0)),
                    RangeError);
}

TEST_CASE("two-mode squeezed reduced state is thermal-like") {
    // build sqrt(1-q^2) q^n |n,n> by hand; ratios rho_nn ~ q^{2n}
    const double q = 0.2;
    const int d = 6;
    Vec amps = Vec::Zero(d * d);
    for (int n = 0; n < d; ++n)
        amps[n * d + n] = std::sqrt(1 - q * q) * std::pow(q, n);
    const MultiModeState tmsv({d, d}, amps);
    const int keep[] = {0};
    const DensityOperator rho = partial_trace(tmsv, keep);
    for (int n = 1; n < d; ++n)
        CHECK(rho.mat(n, n).real() / rho.mat(0, 0).real() ==
              doctest::Approx(std::pow(q * q, n)).epsilon(1e-12));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            if (r != c) CHECK(std::abs(rho.mat(r, c)) < 1e-15);
}

TEST_CASE("partial trace of a multimode density operator") {
    std::mt19937 rng(13);
    const FockVector psi = random_state(3, rng);
    const FockVector phi = random_state(4, rng);
    const FockVector pair[] = {psi, phi};
    const MultiModeState prod = MultiModeState::product(pair);
    const Mat full = prod.amplitudes() * prod.amplitudes().adjoint();

    const int keep[] = {1};
    const DensityOperator rho = partial_trace_density(full, {3, 4}, keep);
    CHECK((rho.mat - phi.amps * phi.amps.adjoint()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("loss channel") {
    const DensityOperator three = DensityOperator::pure(FockVector::basis(3, 6));

    const DensityOperator same = loss_channel(three, 1.0);
    CHECK((same.mat - three.mat).cwiseAbs().maxCoeff() < 1e-15);

    const DensityOperator lossy = loss_channel(three, 0.78);
    CHECK(lossy.mat(3, 3).real() == doctest::Approx(0.474552).epsilon(1e-12));
    // full binomial populations
    for (int k = 0; k <= 3; ++k)
        CHECK(lossy.mat(3 - k, 3 - k).real() ==
              doctest::Approx(binom(3, k) * std::pow(0.78, 3 - k) *
                              std::pow(0.22, k))
                  .epsilon(1e-12));
    CHECK(lossy.trace_real() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(loss_channel(three, 1.2), RangeError);
}

TEST_CASE("loss channel semigroup and trace preservation") {
    std::mt19937 rng(3);
    const FockVector psi = random_state(7, rng);
    const DensityOperator rho = DensityOperator::pure(psi);

    const DensityOperator ab = loss_channel(loss_channel(rho, 0.9), 0.7);
    const DensityOperator combined = loss_channel(rho, 0.63);
    CHECK((ab.mat - combined.mat).cwiseAbs().maxCoeff() < 1e-10);

    for (double eta : {0.0, 0.3, 0.8, 1.0}) {
        const DensityOperator out = loss_channel(rho, eta);
        CHECK(out.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.min_eigenvalue() >= -1e-9);
    }
}

TEST_CASE("fidelity") {
    const FockVector three = FockVector::basis(3, 5);
    const DensityOperator rho = DensityOperator::pure(three);
    CHECK(fidelity(rho, three) == doctest::Approx(1.0).epsilon(1e-14));

    const DensityOperator lossy = loss_channel(rho, 0.78);
    CHECK(fidelity(lossy, three) == doctest::Approx(0.474552).epsilon(1e-12));

    const DensityOperator mixed(Mat(Mat::Identity(4, 4) / 4.0));
    CHECK(fidelity(mixed, FockVector::basis(1, 4)) ==
          doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(fidelity(rho, FockVector::basis(0, 4)), DimensionError);
}

TEST_CASE("mixed-state fidelity agrees with the pure overlap") {
    std::mt19937 rng(11);
    const FockVector a = random_state(5, rng);
    const FockVector b = random_state(5, rng);
    const DensityOperator ra = DensityOperator::pure(a);
    const DensityOperator rb = DensityOperator::pure(b);
    const double overlap = std::norm((a.amps.adjoint() * b.amps).value());
    // Uhlmann via eigendecomposition is sqrt(machine-eps) accurate
    CHECK(fidelity(ra, rb) == doctest::Approx(overlap).epsilon(1e-6));
    CHECK(fidelity(ra, ra) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("density operator invariants") {
    const DensityOperator rho = DensityOperator::pure(FockVector::basis(2, 4));
    CHECK(rho.valid());
    CHECK(rho.hermiticity_error() == 0.0);
    CHECK(rho.min_eigenvalue() >= -1e-12);

    DensityOperator bad(Mat(Mat::Identity(3, 3) * 2.0));
    CHECK_FALSE(bad.valid());
    bad.normalize();
    CHECK(bad.valid());
}

TEST_CASE("normalize rejects zero states") {
    FockVector zero(4);
    CHECK_THROWS_AS(zero.normalize(), ZeroState);
}
