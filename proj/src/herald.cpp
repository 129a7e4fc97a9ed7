#include "heron/herald.hpp"

#include <cmath>

namespace heron {

void HeraldConfig::validate() const {
    if (q < 0.0 || q >= 1.0) throw RangeError("pump parameter q must lie in [0,1)");
    if (signal_dim < 4 || idler_dim < 4)
        throw RangeError("truncations must be >= 4 to hold three-photon physics");
    if (eta_signal < 0.0 || eta_signal > 1.0)
        throw RangeError("eta_signal must lie in [0,1]");
    if (eta_detector < 0.0 || eta_detector > 1.0)
        throw RangeError("eta_detector must lie in [0,1]");
    if (dark_prob < 0.0 || dark_prob >= 1.0)
        throw RangeError("dark_prob must lie in [0,1)");
}

MultiModeState two_mode_squeezed(double q, int dim) {
    return two_mode_squeezed(q, dim, dim);
}

MultiModeState two_mode_squeezed(double q, int signal_dim, int idler_dim) {
    if (q < 0.0 || q >= 1.0) throw RangeError("pump parameter q must lie in [0,1)");
    Vec amps = Vec::Zero(static_cast<Eigen::Index>(signal_dim) * idler_dim);
    const double pre = std::sqrt(1.0 - q * q);
    double qn = 1.0;
    for (int n = 0; n < std::min(signal_dim, idler_dim); ++n) {
        amps[static_cast<Eigen::Index>(n) * idler_dim + n] = pre * qn;
        qn *= q;
    }
    return MultiModeState({signal_dim, idler_dim}, std::move(amps));
}

MultiModeState build_idler_network(const MultiModeState& state,
                                   const std::array<Complex, 3>& betas) {
    if (state.mode_count() != 2)
        throw DimensionError("expected a (signal, idler) two-mode state");
    const int di = state.mode_dims()[1];

    MultiModeState out = state.with_vacuum_mode(di).with_vacuum_mode(di);
    out = beamsplitter_apply(out, 1, 2, 1.0 / 3.0);
    out = beamsplitter_apply(out, 2, 3, 0.5);
    for (int arm = 0; arm < 3; ++arm) {
        if (betas[arm] != Complex(0.0, 0.0))
            out = apply_operator(out, 1 + arm, displacement_operator(betas[arm], di));
    }
    return out;
}

DetectorPOVM detector_povm(double eta_detector, double dark_prob, int dim) {
    if (eta_detector < 0.0 || eta_detector > 1.0)
        throw RangeError("eta_detector must lie in [0,1]");
    if (dark_prob < 0.0 || dark_prob >= 1.0)
        throw RangeError("dark_prob must lie in [0,1)");
    Mat noclick = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        noclick(n, n) = (1.0 - dark_prob) * std::pow(1.0 - eta_detector, n);
    DetectorPOVM povm;
    povm.pi_noclick = noclick;
    povm.pi_click = Mat::Identity(dim, dim) - noclick;
    return povm;
}

HeraldOutcome herald(const HeraldConfig& config) {
    config.validate();

    MultiModeState full = build_idler_network(
        two_mode_squeezed(config.q, config.signal_dim, config.idler_dim),
        config.betas);

    // Population near any mode's cutoff means the truncation is biting.
    double tail = 0.0;
    for (int mode = 0; mode < 4; ++mode) {
        const Eigen::VectorXd pops = full.mode_populations(mode);
        const Eigen::Index d = pops.size();
        tail = std::max(tail, pops[d - 1] + (d > 1 ? pops[d - 2] : 0.0));
    }

    // pi_click is diagonal positive, so conditioning on three clicks is the
    // same as applying sqrt(pi_click) per arm and tracing the arms out.
    const DetectorPOVM povm =
        detector_povm(config.eta_detector, config.dark_prob, config.idler_dim);
    Mat root_click = povm.pi_click.cwiseSqrt();
    for (int arm = 0; arm < 3; ++arm)
        full = apply_operator(full, 1 + arm, root_click);

    const int keep[] = {0};
    DensityOperator rho = partial_trace(full, keep);

    HeraldOutcome outcome;
    outcome.probability = rho.trace_real();
    outcome.max_tail_population = tail;
    outcome.truncation_warning = tail > 1e-4;
    if (outcome.probability <= 0.0)
        throw RangeError(
            "herald probability vanishes (q = 0 with no dark counts?); there "
            "is no conditional state");
    rho.normalize();
    if (config.eta_signal < 1.0) rho = loss_channel(rho, config.eta_signal);
    outcome.rho = std::move(rho);
    return outcome;
}

FockVector perturbative_output(double q, const std::array<Complex, 3>& betas) {
    const Complex b1 = betas[0], b2 = betas[1], b3 = betas[2];
    const Complex e1 = b1 + b2 + b3;
    const Complex e2 = b1 * b2 + b2 * b3 + b3 * b1;
    const double s23 = std::sqrt(2.0) / 3.0;
    FockVector out(4);
    out.amps[0] = b1 * b2 * b3;
    out.amps[1] = q / std::sqrt(3.0) * e2;
    out.amps[2] = s23 * q * q * e1;
    out.amps[3] = s23 * q * q * q;
    return out;
}

}  // namespace heron
