#include "heron/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heron {

namespace {

constexpr double kDegenerateTol = 1e-9;

}  // namespace

TargetSuperposition TargetSuperposition::canonical(std::array<Complex, 4> raw) {
    double norm2 = 0.0;
    for (const Complex& c : raw) norm2 += std::norm(c);
    if (norm2 == 0.0) throw ZeroState("all four target coefficients vanish");
    const double inv = 1.0 / std::sqrt(norm2);

    int anchor = 3;
    while (anchor > 0 && raw[anchor] == Complex(0.0, 0.0)) --anchor;
    const Complex phase =
        std::abs(raw[anchor]) > 0.0 ? raw[anchor] / std::abs(raw[anchor])
                                    : Complex(1.0, 0.0);

    TargetSuperposition t;
    for (int n = 0; n < 4; ++n) t.coeffs[n] = raw[n] * inv / phase;
    return t;
}

FockVector TargetSuperposition::to_fock(int dim) const {
    if (dim < 4) throw RangeError("target needs dim >= 4");
    FockVector v(dim);
    for (int n = 0; n < 4; ++n) v.amps[n] = coeffs[n];
    return v;
}

DisplacementRecipe solve_displacements(const TargetSuperposition& target,
                                       double q) {
    if (q <= 0.0 || q >= 1.0) throw RangeError("q must lie in (0,1)");
    const Complex c0 = target.coeffs[0], c1 = target.coeffs[1];
    const Complex c2 = target.coeffs[2], c3 = target.coeffs[3];
    if (std::abs(c3) < kDegenerateTol)
        throw DegenerateTarget(
            "target has no |3> component; the three-click scheme fixes a "
            "nonzero |3> amplitude");

    const Complex e1 = q * c2 / c3;
    const Complex e2 = std::sqrt(2.0 / 3.0) * q * q * c1 / c3;
    const Complex e3 = std::sqrt(2.0) / 3.0 * q * q * q * c0 / c3;

    // Companion matrix of x^3 - e1 x^2 + e2 x - e3.
    Mat companion = Mat::Zero(3, 3);
    companion(0, 2) = e3;
    companion(1, 0) = 1.0;
    companion(1, 2) = -e2;
    companion(2, 1) = 1.0;
    companion(2, 2) = e1;
    Eigen::ComplexEigenSolver<Mat> es(companion);
    std::array<Complex, 3> roots;
    for (int k = 0; k < 3; ++k) roots[k] = es.eigenvalues()[k];
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return DisplacementRecipe{roots, q};
}

TargetSuperposition forward_map(const std::array<Complex, 3>& betas, double q) {
    const FockVector raw = perturbative_output(q, betas);
    return TargetSuperposition::canonical(
        {raw.amps[0], raw.amps[1], raw.amps[2], raw.amps[3]});
}

FockVector target_cat(Complex alpha, CatParity parity, int dim) {
    FockVector plus = coherent_state(alpha, dim);
    FockVector minus = coherent_state(-alpha, dim);
    FockVector out(dim);
    out.amps = parity == CatParity::odd ? (plus.amps - minus.amps).eval()
                                        : (plus.amps + minus.amps).eval();
    if (out.norm() < 1e-14)
        throw ZeroState("cat state has zero norm for this alpha/parity");
    return out.normalize();
}

FockVector target_qutrit_basis(Complex alpha, int index, int dim) {
    if (index < 0 || index > 2) throw RangeError("qutrit index must be 0, 1 or 2");
    if (dim < 6) throw RangeError("qutrit basis needs dim >= 6");
    FockVector out(dim);
    Complex c = 1.0;
    for (int n = 0; n < dim; ++n) {
        if (n % 3 == index) out.amps[n] = c;
        if (n + 1 < dim) c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    if (out.norm() < 1e-14)
        throw ZeroState("qutrit basis state has zero norm for this alpha/index");
    return out.normalize();
}

TargetSuperposition preset_target(std::string_view name) {
    if (name == "fock3")
        return TargetSuperposition::canonical({0.0, 0.0, 0.0, 1.0});
    if (name == "cat-odd")
        return TargetSuperposition::canonical({0.0, -std::sqrt(6.0), 0.0, 1.0});
    if (name == "zero-three") {
        // s = 0.86 q makes c0/c3 = i 0.86^3 / (sqrt(2)/3), independent of q.
        const double s3 = 0.86 * 0.86 * 0.86;
        return TargetSuperposition::canonical(
            {Complex(0.0, s3), 0.0, 0.0, std::sqrt(2.0) / 3.0});
    }
    throw RangeError("unknown preset (expected fock3, cat-odd or zero-three)");
}

double max_fidelity_over_rotation(const DensityOperator& rho,
                                  const FockVector& target,
                                  double* best_theta) {
    if (rho.dim() != target.dim())
        throw DimensionError("state and density dimensions differ");
    const int d = rho.dim();
    auto fid_at = [&](double theta) {
        Vec rotated(d);
        for (int n = 0; n < d; ++n)
            rotated[n] = std::polar(1.0, -theta * n) * target.amps[n];
        return (rotated.adjoint() * rho.mat * rotated).value().real();
    };

    const int coarse = 720;
    double best = -1.0, theta0 = 0.0;
    for (int k = 0; k < coarse; ++k) {
        const double th = 2.0 * std::numbers::pi * k / coarse;
        const double f = fid_at(th);
        if (f > best) {
            best = f;
            theta0 = th;
        }
    }
    // golden-section refinement around the coarse winner
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = theta0 - 2.0 * std::numbers::pi / coarse;
    double b = theta0 + 2.0 * std::numbers::pi / coarse;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = fid_at(x1), f2 = fid_at(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = fid_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = fid_at(x1);
        }
    }
    const double theta = (a + b) / 2.0;
    const double f = fid_at(theta);
    if (best_theta) *best_theta = theta;
    return std::max(f, best);
}

}  // namespace heron
