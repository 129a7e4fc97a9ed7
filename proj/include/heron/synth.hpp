#pragma once

// Inverse design: target superposition of |0..3> -> displacement amplitudes,
// via elementary symmetric polynomials and a companion-matrix root solve.
// Also the ideal reference states (cat, qutrit-ladder) and preset targets.

#include <array>
#include <string_view>

#include "heron/fock.hpp"
#include "heron/herald.hpp"

namespace heron {

struct TargetSuperposition {
    std::array<Complex, 4> coeffs{};

    // Normalizes and fixes the global phase: c3 real >= 0 when c3 != 0,
    // otherwise the highest nonzero coefficient is made real positive.
    static TargetSuperposition canonical(std::array<Complex, 4> raw);

    FockVector to_fock(int dim = 4) const;
};

struct DisplacementRecipe {
    std::array<Complex, 3> betas{};
    double q = 0.0;
};

// Roots of x^3 - e1 x^2 + e2 x - e3 with the e_k read off the target's
// coefficient ratios; throws DegenerateTarget when |c3| < 1e-9. Roots are
// sorted by descending real part, then descending imaginary part.
DisplacementRecipe solve_displacements(const TargetSuperposition& target,
                                       double q);

// Normalized, canonicalized coefficients of the perturbative output.
TargetSuperposition forward_map(const std::array<Complex, 3>& betas, double q);

enum class CatParity { even, odd };

// Normalized truncation of |alpha> ± |-alpha>; odd keeps odd Fock terms.
FockVector target_cat(Complex alpha, CatParity parity, int dim = 20);

// Normalized projection of the coherent-state triple onto the Fock ladder
// n = index (mod 3): c_n proportional to alpha^n / sqrt(n!) on that ladder.
FockVector target_qutrit_basis(Complex alpha, int index, int dim = 20);

// Preset targets: "fock3", "cat-odd" (the |1>&|3> keystone), "zero-three"
// (the qutrit-basis state with s = 0.86 q).
TargetSuperposition preset_target(std::string_view name);

// Largest fidelity(R(θ)ρR(θ)†, target) over a scan plus local refinement.
double max_fidelity_over_rotation(const DensityOperator& rho,
                                  const FockVector& target,
                                  double* best_theta = nullptr);

}  // namespace heron
