// heron: synthesize displacement recipes, herald states, export Wigner
// grids, and run homodyne tomography from the command line.

#include <chrono>
#include <complex>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heron/io.hpp"
#include "heron/version.hpp"

namespace fs = std::filesystem;
using namespace heron;
using heron::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

constexpr std::uint64_t kDefaultSeed = 12345;

std::string iso_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct OutputDir {
    std::optional<fs::path> dir;
    std::vector<std::string> written;

    bool enabled() const { return dir.has_value(); }

    void save(const json& j, const std::string& name) {
        if (!dir) return;
        io::save_json_file(j, (*dir / name).string());
        written.push_back(name);
    }

    template <typename Fn>
    void save_stream(const std::string& name, Fn&& writer) {
        if (!dir) return;
        std::ofstream out(*dir / name);
        if (!out) throw Error("cannot write " + (*dir / name).string());
        writer(out);
        written.push_back(name);
    }

    void manifest(const std::string& command,
                  const std::vector<std::string>& inputs, std::uint64_t seed) {
        if (!dir) return;
        json m = {{"command", command},
                  {"inputs", inputs},
                  {"outputs", written},
                  {"seed", seed},
                  {"version", kVersion},
                  {"timestamp", iso_timestamp()}};
        io::save_json_file(m, (*dir / "manifest.json").string());
    }
};

OutputDir make_output(const std::string& out) {
    OutputDir o;
    if (!out.empty()) {
        fs::create_directories(out);
        o.dir = fs::path(out);
    }
    return o;
}

std::string fmt_complex(const Complex& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.6f %+.6fi", c.real(), c.imag());
    return buf;
}

// Accepts either a density payload (dim*dim entries) or a state vector
// (dim entries), promoting the latter to a pure density operator.
DensityOperator load_density(const std::string& path) {
    const json j = io::load_json_file(path);
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw ParseError(path + ": expected {\"dim\", \"entries\"} payload");
    const std::size_t dim = j["dim"].is_number_integer() ? j["dim"].get<std::size_t>() : 0;
    const std::size_t n = j["entries"].is_array() ? j["entries"].size() : 0;
    if (dim > 0 && n == dim * dim) return io::density_from_json(j);
    if (dim > 0 && n == dim) {
        FockVector v = io::fock_from_json(j);
        const double norm = v.norm();
        if (norm == 0.0) throw ParseError(path + ": zero state vector");
        v.amps /= norm;
        return DensityOperator::pure(v);
    }
    throw ParseError(path + ": entry count matches neither a vector nor a matrix");
}

TargetSuperposition load_target(const std::string& path) {
    const FockVector v = io::fock_from_json(io::load_json_file(path));
    if (v.dim() != 4)
        throw ParseError(path + ": a target needs exactly four coefficients");
    return TargetSuperposition::canonical(
        {v.amps[0], v.amps[1], v.amps[2], v.amps[3]});
}

GridSpec parse_grid(const std::string& text) {
    GridSpec spec;
    if (text.empty()) return spec;
    double xmin, xmax, pmin, pmax;
    int nx, np;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf,%d,%d", &xmin, &xmax, &pmin,
                    &pmax, &nx, &np) != 6)
        throw ParseError("--grid expects \"xmin,xmax,pmin,pmax,nx,np\"");
    return GridSpec{xmin, xmax, pmin, pmax, nx, np};
}

void print_populations(const MetricsReport& report) {
    for (Eigen::Index n = 0; n < report.populations.size(); ++n)
        std::printf("  rho[%lld,%lld] = %.6f\n", static_cast<long long>(n),
                    static_cast<long long>(n), report.populations[n]);
    std::printf("  purity        = %.6f\n", report.purity);
    std::printf("  mean photons  = %.6f\n", report.mean_photons);
    std::printf("  pop above |3> = %.6f\n", report.population_above_three);
}

// --- subcommands ----------------------------------------------------------

int run_synth(const std::string& preset, const std::string& target_path,
              double q, const std::string& out) {
    TargetSuperposition target =
        target_path.empty() ? preset_target(preset) : load_target(target_path);

    const DisplacementRecipe recipe = solve_displacements(target, q);
    const TargetSuperposition predicted = forward_map(recipe.betas, q);

    std::printf("recipe for q = %.6f\n", q);
    for (int k = 0; k < 3; ++k)
        std::printf("  beta[%d] = %s\n", k, fmt_complex(recipe.betas[k]).c_str());
    std::printf("predicted heralded superposition:\n");
    for (int n = 0; n < 4; ++n)
        std::printf("  c[%d] = %s\n", n, fmt_complex(predicted.coeffs[n]).c_str());

    OutputDir output = make_output(out);
    output.save(io::to_json(recipe), "recipe.json");
    output.save(io::to_json(predicted.to_fock()), "predicted.json");
    std::vector<std::string> inputs;
    if (!target_path.empty()) inputs.push_back(target_path);
    output.manifest("synth", inputs, kDefaultSeed);
    return kExitOk;
}

int run_herald(const std::string& config_path, const std::string& preset,
               double q, std::optional<double> eta_signal,
               std::optional<double> eta_detector, std::optional<double> dark,
               std::optional<int> signal_dim, std::optional<int> idler_dim,
               bool strict, const std::string& out) {
    HeraldConfig config;
    if (!config_path.empty()) {
        config = io::herald_config_from_json(io::load_json_file(config_path));
    } else {
        config.q = q;
        config.betas = solve_displacements(preset_target(preset), q).betas;
    }
    if (eta_signal) config.eta_signal = *eta_signal;
    if (eta_detector) config.eta_detector = *eta_detector;
    if (dark) config.dark_prob = *dark;
    if (signal_dim) config.signal_dim = *signal_dim;
    if (idler_dim) config.idler_dim = *idler_dim;
    config.validate();

    const HeraldOutcome outcome = herald(config);

    std::printf("herald probability per trial: %.6e\n", outcome.probability);
    if (outcome.truncation_warning)
        std::printf("warning: truncation populated (top-two levels at %.2e); "
                    "results untrustworthy\n",
                    outcome.max_tail_population);
    if (config_path.empty()) {
        // preset runs know their ideal target; report the fidelity
        FockVector target =
            forward_map(config.betas, config.q).to_fock(config.signal_dim);
        std::printf("fidelity vs ideal %s target: %.6f\n", preset.c_str(),
                    fidelity(outcome.rho, target));
    }
    print_populations(metrics(outcome.rho));

    OutputDir output = make_output(out);
    output.save(io::to_json(config), "config.json");
    output.save(io::to_json(outcome.rho), "rho.json");
    output.save(io::to_json(outcome), "outcome.json");
    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);
    output.manifest("herald", inputs, kDefaultSeed);

    if (strict && outcome.truncation_warning) return kExitNumerical;
    return kExitOk;
}

int run_wigner(const std::string& rho_path, const std::string& grid_text,
               std::vector<double> cut_angles, double cut_range, int cut_samples,
               double threshold, const std::string& out) {
    const DensityOperator rho = load_density(rho_path);
    const GridSpec spec = parse_grid(grid_text);
    const WignerGrid grid = wigner_grid(rho, spec);

    if (cut_angles.empty())
        for (int k = 0; k < 8; ++k)
            cut_angles.push_back(k * std::numbers::pi / 8.0);

    const double volume = negativity_volume(rho, spec);
    json cuts = json::array();
    std::printf("grid %dx%d on [%g,%g]x[%g,%g]\n", spec.nx, spec.np, spec.x_min,
                spec.x_max, spec.p_min, spec.p_max);
    std::printf("integral = %.6f, min W = %.6f, negativity volume = %.6f\n",
                grid.integral(), grid.min_value(), volume);
    for (double angle : cut_angles) {
        const int count =
            count_negative_intervals(rho, angle, cut_range, cut_samples, threshold);
        std::printf("cut at %.4f rad: %d negative interval(s)\n", angle, count);
        cuts.push_back({{"angle", angle}, {"negative_intervals", count}});
    }

    OutputDir output = make_output(out);
    output.save_stream("grid.csv",
                       [&](std::ostream& s) { io::write_grid_csv(grid, s); });
    output.save(io::to_json(grid), "grid.json");
    output.save({{"volume", volume}, {"cuts", cuts}}, "negativity.json");
    output.manifest("wigner", {rho_path}, kDefaultSeed);
    return kExitOk;
}

int run_tomo(const std::string& rho_path, const std::string& records_path,
             int samples, int phases, std::uint64_t seed, int dim,
             int max_iters, double tol, std::optional<int> phase_bins,
             const std::string& out) {
    std::vector<QuadratureRecord> records;
    std::optional<DensityOperator> truth;
    std::vector<std::string> inputs;

    if (!records_path.empty()) {
        inputs.push_back(records_path);
        if (records_path.size() > 5 &&
            records_path.substr(records_path.size() - 5) == ".json") {
            records = io::records_from_json(io::load_json_file(records_path));
        } else {
            std::ifstream in(records_path);
            if (!in) throw ParseError("cannot open " + records_path);
            records = io::read_records_csv(in);
        }
    } else {
        inputs.push_back(rho_path);
        truth = load_density(rho_path);
        records = sample_quadratures(*truth, samples,
                                     PhaseSchedule::uniform_scan(phases), seed);
    }
    if (records.empty()) throw EmptyRecords("no quadrature records to fit");

    TomoSettings settings;
    settings.dim = dim;
    settings.max_iters = max_iters;
    settings.convergence_tol = tol;
    settings.phase_bins = phase_bins;
    const TomoResult result = mle_reconstruct(records, settings);

    std::printf("reconstructed %zu records at dim %d\n", records.size(), dim);
    std::printf("iterations = %d, converged = %s, log-likelihood = %.6f\n",
                result.iterations, result.converged ? "yes" : "no",
                result.log_likelihood);
    if (!result.converged)
        std::printf("note: stopped at max iterations before the likelihood "
                    "gain fell below tolerance\n");
    if (truth) {
        const int shared = std::min(dim, truth->dim());
        DensityOperator a(Mat(truth->mat.topLeftCorner(shared, shared)));
        DensityOperator b(Mat(result.rho.mat.topLeftCorner(shared, shared)));
        std::printf("fidelity vs sampled state (dim %d): %.6f\n", shared,
                    fidelity(a, b));
    }
    print_populations(metrics(result.rho));

    OutputDir output = make_output(out);
    if (truth)
        output.save_stream("records.csv", [&](std::ostream& s) {
            io::write_records_csv(records, s);
        });
    output.save(io::to_json(result.rho), "rho_mle.json");
    output.save(io::to_json(result), "diagnostics.json");
    output.save(io::to_json(metrics(result.rho)), "metrics.json");
    output.manifest("tomo", inputs, seed);
    return kExitOk;
}

int run_metrics(const std::string& rho_path, const std::string& target_path,
                const std::string& preset, const std::string& out) {
    const DensityOperator rho = load_density(rho_path);
    const MetricsReport report = metrics(rho);
    std::printf("metrics for %s (dim %d):\n", rho_path.c_str(), rho.dim());
    print_populations(report);

    json extra;
    if (!target_path.empty() || !preset.empty()) {
        FockVector target =
            !target_path.empty()
                ? io::fock_from_json(io::load_json_file(target_path))
                : preset_target(preset).to_fock();
        target.normalize();
        if (target.dim() < rho.dim()) {
            Vec padded = Vec::Zero(rho.dim());
            padded.head(target.dim()) = target.amps;
            target = FockVector(padded);
        } else if (target.dim() > rho.dim()) {
            throw ParseError("target dimension exceeds the state dimension");
        }
        const double direct = fidelity(rho, target);
        double theta = 0.0;
        const double best = max_fidelity_over_rotation(rho, target, &theta);
        std::printf("  fidelity      = %.6f\n", direct);
        std::printf("  max over R(theta) = %.6f at theta = %.6f\n", best, theta);
        extra = {{"fidelity", direct},
                 {"max_fidelity_over_rotation", best},
                 {"best_theta", theta}};
    }

    OutputDir output = make_output(out);
    json j = io::to_json(report);
    if (!extra.is_null()) j["target"] = extra;
    output.save(j, "metrics.json");
    std::vector<std::string> inputs = {rho_path};
    if (!target_path.empty()) inputs.push_back(target_path);
    output.manifest("metrics", inputs, kDefaultSeed);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heralded photon-superposition toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand(
        "synth", "displacement amplitudes for a target superposition");
    std::string synth_preset, synth_target, synth_out;
    double synth_q = 0.1;
    auto* preset_opt = synth->add_option(
        "--preset", synth_preset, "fock3, cat-odd or zero-three");
    synth->add_option("--target", synth_target, "target state JSON (dim 4)")
        ->excludes(preset_opt);
    synth->add_option("--q", synth_q, "pump parameter used in the inversion");
    synth->add_option("--out", synth_out, "output directory");

    // herald
    auto* her = app.add_subcommand("herald", "run the heralding simulation");
    std::string her_config, her_preset = "fock3", her_out;
    double her_q = 0.05;
    std::optional<double> her_eta_s, her_eta_d, her_dark;
    std::optional<int> her_sdim, her_idim;
    bool her_strict = false;
    her->add_option("--config", her_config, "herald config JSON");
    her->add_option("--preset", her_preset, "fock3, cat-odd or zero-three");
    her->add_option("--q", her_q, "pump parameter (with --preset)");
    her->add_option("--eta-signal", her_eta_s, "signal-path efficiency");
    her->add_option("--eta-detector", her_eta_d, "per-detector efficiency");
    her->add_option("--dark-prob", her_dark, "per-detector false-click probability");
    her->add_option("--signal-dim", her_sdim, "signal truncation");
    her->add_option("--idler-dim", her_idim, "idler truncation");
    her->add_flag("--strict", her_strict, "exit 3 on truncation warning");
    her->add_option("--out", her_out, "output directory");

    // wigner
    auto* wig = app.add_subcommand("wigner", "phase-space grid and negativity");
    std::string wig_rho, wig_grid, wig_out;
    std::vector<double> wig_angles;
    double wig_range = 4.0, wig_threshold = 1e-4;
    int wig_samples = 2001;
    wig->add_option("--rho", wig_rho, "density or state JSON")->required();
    wig->add_option("--grid", wig_grid, "\"xmin,xmax,pmin,pmax,nx,np\"");
    wig->add_option("--cut-angle", wig_angles,
                    "cut angle in radians (repeatable; default 8 spokes)");
    wig->add_option("--cut-range", wig_range, "cut extent (plus/minus)");
    wig->add_option("--cut-samples", wig_samples, "samples per cut");
    wig->add_option("--threshold", wig_threshold, "negativity threshold");
    wig->add_option("--out", wig_out, "output directory");

    // tomo
    auto* tom = app.add_subcommand(
        "tomo", "simulate homodyne records and/or reconstruct by MLE");
    std::string tom_rho, tom_records, tom_out;
    int tom_samples = 10000, tom_phases = 24, tom_dim = 6, tom_iters = 2000;
    double tom_tol = 1e-10;
    std::uint64_t tom_seed = kDefaultSeed;
    std::optional<int> tom_bins;
    auto* rho_opt = tom->add_option("--rho", tom_rho,
                                    "state to sample from (simulate mode)");
    tom->add_option("--records", tom_records,
                    "existing records CSV/JSON (fit mode)")
        ->excludes(rho_opt);
    tom->add_option("--samples", tom_samples, "records to draw in simulate mode");
    tom->add_option("--phases", tom_phases, "phases in the uniform scan");
    tom->add_option("--seed", tom_seed, "sampling seed");
    tom->add_option("--dim", tom_dim, "reconstruction dimension");
    tom->add_option("--max-iters", tom_iters, "iteration cap");
    tom->add_option("--tol", tom_tol, "log-likelihood gain per record to stop");
    tom->add_option("--phase-bins", tom_bins, "snap phases to this many bins");
    tom->add_option("--out", tom_out, "output directory");

    // metrics
    auto* met = app.add_subcommand("metrics", "populations, purity, fidelity");
    std::string met_rho, met_target, met_preset, met_out;
    met->add_option("--rho", met_rho, "density or state JSON")->required();
    met->add_option("--target", met_target, "target state JSON");
    met->add_option("--preset", met_preset, "preset target name");
    met->add_option("--out", met_out, "output directory");

    try {
        app.parse(argc, argv);
        if (synth->parsed()) {
            if (synth_preset.empty() && synth_target.empty())
                throw ParseError("synth needs --preset or --target");
            return run_synth(synth_preset, synth_target, synth_q, synth_out);
        }
        if (her->parsed())
            return run_herald(her_config, her_preset, her_q, her_eta_s,
                              her_eta_d, her_dark, her_sdim, her_idim,
                              her_strict, her_out);
        if (wig->parsed())
            return run_wigner(wig_rho, wig_grid, wig_angles, wig_range,
                              wig_samples, wig_threshold, wig_out);
        if (tom->parsed()) {
            if (tom_rho.empty() && tom_records.empty())
                throw ParseError("tomo needs --rho or --records");
            return run_tomo(tom_rho, tom_records, tom_samples, tom_phases,
                            tom_seed, tom_dim, tom_iters, tom_tol, tom_bins,
                            tom_out);
        }
        if (met->parsed())
            return run_metrics(met_rho, met_target, met_preset, met_out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const DegenerateTarget& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const EmptyRecords& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
