#pragma once

// Heralded state preparation: two-mode squeezed input, three-way idler
// splitting with per-arm displacements, click-detector conditioning.

#include <array>

#include "heron/fock.hpp"

namespace heron {

struct HeraldConfig {
    double q = 0.05;                 // pump parameter, 0 <= q < 1
    std::array<Complex, 3> betas{};  // per-arm displacement amplitudes
    int signal_dim = 10;
    int idler_dim = 6;
    double eta_signal = 1.0;    // signal-path efficiency
    double eta_detector = 1.0;  // per-detector efficiency
    double dark_prob = 0.0;     // per-detector false-click probability

    void validate() const;  // throws RangeError on violations
};

struct DetectorPOVM {
    Mat pi_click;
    Mat pi_noclick;
};

struct HeraldOutcome {
    DensityOperator rho;      // signal state, normalized
    double probability = 0;   // triple-coincidence probability per trial
    bool truncation_warning = false;
    double max_tail_population = 0;  // worst top-two-level population seen
};

// Normalized-within-truncation sqrt(1-q^2) q^n |n,n> on (signal, idler).
MultiModeState two_mode_squeezed(double q, int dim);
MultiModeState two_mode_squeezed(double q, int signal_dim, int idler_dim);

// Takes a (signal, idler) state to (signal, i1, i2, i3): T=1/3 then T=1/2
// beamsplitter cascade (each arm gets amplitude 1/sqrt(3) per photon),
// followed by ideal displacements D(beta_k) on the arms.
MultiModeState build_idler_network(const MultiModeState& state,
                                   const std::array<Complex, 3>& betas);

// On/off detector: pi_noclick = (1 - dark) (1 - eta)^n, pi_click = I - that.
DetectorPOVM detector_povm(double eta_detector, double dark_prob, int dim);

// Exact conditional signal state for a three-fold coincidence, with the
// herald probability per trial; signal loss is applied after conditioning.
HeraldOutcome herald(const HeraldConfig& config);

// Small-q output coefficients on |0..3>, unnormalized:
//   (b1 b2 b3,  q/sqrt(3) e2,  sqrt(2)/3 q^2 e1,  sqrt(2)/3 q^3)
// with e1, e2 the elementary symmetric polynomials of the betas.
FockVector perturbative_output(double q, const std::array<Complex, 3>& betas);

}  // namespace heron
