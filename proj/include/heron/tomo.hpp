#pragma once

// Homodyne simulation and iterative maximum-likelihood reconstruction.

#include <cstdint>
#include <optional>
#include <vector>

#include "heron/fock.hpp"

namespace heron {

struct QuadratureRecord {
    double theta = 0.0;  // local-oscillator phase, canonicalized to [0, pi)
    double x = 0.0;      // measured quadrature, vacuum variance 1/2
};

struct TomoSettings {
    int dim = 6;
    int max_iters = 2000;
    double convergence_tol = 1e-10;  // log-likelihood gain per record
    std::optional<int> phase_bins;   // snap phases to bin centers when set
};

struct PhaseSchedule {
    std::vector<double> phases;  // empty means uniform scan

    // Evenly spaced phases over [0, pi), assigned round-robin.
    static PhaseSchedule uniform_scan(int phase_count = 24);
    static PhaseSchedule fixed(std::vector<double> thetas);
};

struct TomoResult {
    DensityOperator rho;
    int iterations = 0;
    double log_likelihood = 0.0;
    bool converged = false;
    std::vector<double> log_likelihood_trace;
};

struct MetricsReport {
    Eigen::VectorXd populations;
    double purity = 0.0;
    double mean_photons = 0.0;
    double population_above_three = 0.0;
};

// Harmonic-oscillator wavefunctions psi_n(x), n < dim, in the
// x = (a + a†)/sqrt(2) convention.
Eigen::VectorXd hermite_functions(int dim, double x);

// p(x|theta) = sum_mn rho_mn psi_m(x) psi_n(x) e^{i(n-m)theta}
double quadrature_pdf(const DensityOperator& rho, double theta, double x);

// Inverse-CDF draws from quadrature_pdf at the scheduled phases;
// deterministic for a fixed seed.
std::vector<QuadratureRecord> sample_quadratures(const DensityOperator& rho,
                                                 int n_samples,
                                                 const PhaseSchedule& schedule,
                                                 std::uint64_t seed);

// Iterates rho <- N[R(rho) rho R(rho)] until the likelihood gain per record
// drops below convergence_tol or max_iters is reached. Non-convergence is
// reported through the result, not thrown.
TomoResult mle_reconstruct(const std::vector<QuadratureRecord>& records,
                           const TomoSettings& settings);

MetricsReport metrics(const DensityOperator& rho);

}  // namespace heron
