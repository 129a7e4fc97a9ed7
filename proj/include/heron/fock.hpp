#pragma once

// Truncated Fock-space linear algebra: states, operators, channels.
//
// Conventions used throughout the project (hbar = 1):
//   x = (a + a†)/√2,  p = (a - a†)/(i√2),  vacuum variance Var(x) = 1/2.
// A coherent state |alpha> is centered at x = √2 Re(alpha), p = √2 Im(alpha).
// Phase rotation R(θ) = exp(iθ a†a) maps |alpha> to |alpha e^{iθ}>.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "heron/errors.hpp"

namespace heron {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Operators built from a generator exponential are evaluated on a padded
// space of dim + kOperatorPad and then cropped, so matrix elements of the
// retained block are free of truncation artifacts.
inline constexpr int kOperatorPad = 10;

struct FockVector {
    Vec amps;

    FockVector() = default;
    explicit FockVector(int dim);
    explicit FockVector(Vec a) : amps(std::move(a)) {}

    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const { return amps.norm(); }
    double norm2() const { return amps.squaredNorm(); }

    FockVector& normalize();

    static FockVector basis(int n, int dim);
};

struct DensityOperator {
    Mat mat;

    DensityOperator() = default;
    explicit DensityOperator(Mat m) : mat(std::move(m)) {}

    int dim() const { return static_cast<int>(mat.rows()); }
    double trace_real() const { return mat.trace().real(); }

    DensityOperator& normalize();

    static DensityOperator pure(const FockVector& psi);

    double hermiticity_error() const;
    double min_eigenvalue() const;
    // Checks the density-operator contract: Hermitian, unit trace,
    // eigenvalues above the numerical floor.
    bool valid(double herm_tol = 1e-12, double trace_tol = 1e-10,
               double eig_floor = -1e-9) const;
};

// Dense state over several modes, each with its own truncation.
// Flat storage is row-major: the last mode varies fastest.
class MultiModeState {
  public:
    explicit MultiModeState(std::vector<int> dims);  // vacuum in every mode
    MultiModeState(std::vector<int> dims, Vec amps);

    static MultiModeState product(std::span<const FockVector> factors);

    int mode_count() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& mode_dims() const { return dims_; }
    const Vec& amplitudes() const { return amps_; }

    double norm() const { return amps_.norm(); }
    double norm2() const { return amps_.squaredNorm(); }

    std::size_t flat_index(std::span<const int> idx) const;
    Complex amplitude(std::span<const int> idx) const;

    // Photon-number populations of one mode (diagonal of its reduced state).
    Eigen::VectorXd mode_populations(int mode) const;

    MultiModeState with_vacuum_mode(int dim) const;

    friend MultiModeState apply_operator(const MultiModeState& state, int mode,
                                         const Mat& op);
    friend MultiModeState beamsplitter_apply(const MultiModeState& state,
                                             int mode_a, int mode_b,
                                             double transmittance);

  private:
    void check_mode(int mode) const;

    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    Vec amps_;
};

// --- single-mode constructions ------------------------------------------

FockVector coherent_state(Complex alpha, int dim);

Mat annihilation_operator(int dim);
Mat number_operator(int dim);
Mat quadrature_operator(double theta, int dim);  // (a e^{-iθ} + a† e^{iθ})/√2

Mat displacement_operator(Complex beta, int dim, int pad = kOperatorPad);
Mat squeeze_operator(double r, double phi, int dim, int pad = kOperatorPad);
Mat phase_rotation(double theta, int dim);

// Two-mode beamsplitter matrix on the combined index m*dim + n, following
// the substitution rule a† -> √T a† + √(1-T) b†, b† -> -√(1-T) a† + √T b†.
// Components pushed past the per-mode truncation are dropped.
Mat beamsplitter_matrix(double transmittance, int dim);

// --- multimode operations -----------------------------------------------

MultiModeState apply_operator(const MultiModeState& state, int mode,
                              const Mat& op);
MultiModeState beamsplitter_apply(const MultiModeState& state, int mode_a,
                                  int mode_b, double transmittance);

// Reduced operator on the kept modes (ascending order, row-major flattening).
// The trace of the result equals the squared norm of the input.
DensityOperator partial_trace(const MultiModeState& state,
                              std::span<const int> keep);
DensityOperator partial_trace_density(const Mat& rho,
                                      const std::vector<int>& dims,
                                      std::span<const int> keep);

// --- channels and figures of merit ---------------------------------------

DensityOperator loss_channel(const DensityOperator& rho, double eta);

double fidelity(const DensityOperator& rho, const FockVector& psi);
// Uhlmann fidelity (Tr√(√ρ σ √ρ))² between two density operators.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace heron
