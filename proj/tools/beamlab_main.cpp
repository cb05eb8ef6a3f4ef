// beamlab: entropy-flow estimators for an ideal phase-diffusing laser beam.
//
// Subcommands map onto the library routes: asymptotic (closed form),
// spectral (ground eigenvalue), montecarlo (path-functional estimate), brute
// (small-scale number-basis oracle), thermal and compare (blackbody-beam
// reference), crosscheck (MC vs spectral consistency gate), sweep (parameter
// grids as CSV).
//
// Every artifact embeds the tool version, the fully resolved configuration,
// and the seed. Artifacts are byte-reproducible: rerunning with the same
// configuration and seed writes identical bytes for any thread count, so
// wall-clock timing goes to stderr, never into the artifact.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamlab/beam.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/fock.hpp"
#include "beamlab/io.hpp"
#include "beamlab/spectral.hpp"
#include "beamlab/stochastic.hpp"
#include "beamlab/thermal.hpp"
#include "beamlab/version.hpp"

namespace {

using beamlab::ConfigError;
using json = nlohmann::ordered_json;
using Params = std::map<std::string, nlohmann::json>;

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_numerical_error = 3;
constexpr int exit_crosscheck_fail = 4;

// ---------------------------------------------------------------- parameters

enum class ParamKind { number, text, toggle };

struct ParamSpec {
    const char* name;  // long option name, e.g. "photon-flow"
    ParamKind kind;
    const char* help;
    nlohmann::json fallback;  // null means no default (optional or required)
    bool required = false;
};

// Options shared by every subcommand.
const std::vector<ParamSpec>& common_specs() {
    static const std::vector<ParamSpec> specs{
        {"seed", ParamKind::number, "RNG seed for stochastic commands", 0.0},
        {"threads", ParamKind::number, "worker threads for path ensembles (0 = all cores)",
         nullptr},
        {"format", ParamKind::text, "output format: json or csv", "json"},
        {"output", ParamKind::text, "output file path (default: stdout)", ""},
        {"config", ParamKind::text, "flat key-value JSON config file; flags override it", ""},
        {"natural-units", ParamKind::toggle, "set k_B = hbar = 1", false},
    };
    return specs;
}

const std::map<std::string, std::vector<ParamSpec>>& command_specs() {
    static const std::map<std::string, std::vector<ParamSpec>> specs{
        {"asymptotic",
         {
             {"photon-flow", ParamKind::number, "photon flow Ndot [1/s]", nullptr},
             {"linewidth", ParamKind::number, "FWHM linewidth l [1/s]", nullptr},
             {"kappa", ParamKind::number, "cavity intensity-damping rate [1/s]", nullptr},
             {"mu", ParamKind::number, "mean intracavity photon number", nullptr},
             {"centre-frequency", ParamKind::number, "carrier frequency omega0 [rad/s]", nullptr},
             {"wavelength-nm", ParamKind::number, "carrier vacuum wavelength [nm]", 1064.0},
         }},
        {"spectral",
         {
             {"coherence", ParamKind::number, "beam coherence C = 4 Ndot/l", nullptr},
             {"photon-flow", ParamKind::number, "photon flow Ndot [1/s]", nullptr},
             {"linewidth", ParamKind::number, "FWHM linewidth l [1/s]", nullptr},
             {"grid", ParamKind::number, "grid points / basis size", 2048.0},
             {"basis", ParamKind::text, "discretisation: fd or cosine", "fd"},
             {"richardson", ParamKind::toggle, "add a two-grid Richardson value", false},
         }},
        {"montecarlo",
         {
             {"coherence", ParamKind::number, "beam coherence C = 4 Ndot/l", nullptr, true},
             {"paths", ParamKind::number, "number of Monte Carlo paths", 100000.0},
             {"step", ParamKind::number, "reduced time step", 0.01},
             {"horizon", ParamKind::number, "reduced time horizon", 6.0},
             {"times-count", ParamKind::number, "number of sample times", 24.0},
             {"times-from", ParamKind::number, "first sample time", 0.25},
             {"times-to", ParamKind::number, "last sample time (0 = horizon)", 0.0},
             {"window-lo", ParamKind::number, "fit window start (reduced time)", 2.0},
             {"window-hi", ParamKind::number, "fit window end (reduced time)", 6.0},
             {"initial-point", ParamKind::number, "start coordinate y(0)", 0.0},
             {"antithetic", ParamKind::toggle, "pair every path with its reflection", false},
         }},
        {"brute",
         {
             {"amplitude", ParamKind::number, "segment coherent amplitude r", nullptr, true},
             {"phase-variance", ParamKind::number, "single-copy phase variance per segment",
              nullptr, true},
             {"k-segments", ParamKind::number, "number of beam segments", 1.0},
             {"duration", ParamKind::number, "total duration spanned by the segments [s]", 1.0},
             {"samples", ParamKind::number, "Monte Carlo samples", 200000.0},
             {"n-max", ParamKind::number, "number-basis cutoff (0 = auto)", 0.0},
             {"n-grid", ParamKind::number, "phase quadrature points (0 = auto)", 0.0},
             {"export-rho", ParamKind::text, "write the density matrix JSON here", ""},
         }},
        {"thermal",
         {
             {"temperature", ParamKind::number, "beam temperature [K]", nullptr, true},
         }},
        {"compare",
         {
             {"power", ParamKind::number, "beam power [W]", nullptr, true},
             {"q-factor", ParamKind::number, "quality factor Q = omega0/l", nullptr, true},
         }},
        {"crosscheck",
         {
             {"coherence", ParamKind::number, "beam coherence C = 4 Ndot/l", 25.0},
             {"paths", ParamKind::number, "number of Monte Carlo paths", 100000.0},
             {"grid", ParamKind::number, "spectral grid points", 2048.0},
             {"step", ParamKind::number, "reduced time step", 0.01},
             {"window-lo", ParamKind::number, "fit window start", 2.0},
             {"window-hi", ParamKind::number, "fit window end (= MC horizon)", 6.0},
             {"max-sigma", ParamKind::number, "PASS threshold on |MC - spectral|/sigma", 3.0},
         }},
    };
    return specs;
}

double as_number(const nlohmann::json& value, const std::string& name) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        try {
            std::size_t used = 0;
            const std::string raw = value.get<std::string>();
            const double parsed = std::stod(raw, &used);
            if (used == raw.size()) return parsed;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("parameter '" + name + "' must be a number");
}

double num(const Params& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end() || it->second.is_null()) {
        throw ConfigError("missing required parameter '" + name + "'");
    }
    return as_number(it->second, name);
}

std::optional<double> num_opt(const Params& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end() || it->second.is_null()) return std::nullopt;
    return as_number(it->second, name);
}

std::string text(const Params& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end() || it->second.is_null()) return "";
    if (!it->second.is_string()) throw ConfigError("parameter '" + name + "' must be a string");
    return it->second.get<std::string>();
}

bool toggled(const Params& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end() || it->second.is_null()) return false;
    if (!it->second.is_boolean()) throw ConfigError("parameter '" + name + "' must be a boolean");
    return it->second.get<bool>();
}

std::size_t count_param(const Params& params, const std::string& name, std::size_t minimum) {
    const double value = num(params, name);
    if (!std::isfinite(value) || value < static_cast<double>(minimum) ||
        value != std::floor(value)) {
        throw ConfigError("parameter '" + name + "' must be an integer >= " +
                          std::to_string(minimum));
    }
    return static_cast<std::size_t>(value);
}

beamlab::PhysicalConstants constants_of(const Params& params) {
    return toggled(params, "natural-units") ? beamlab::PhysicalConstants::natural()
                                            : beamlab::PhysicalConstants::si();
}

int threads_of(const Params& params) {
    const auto value = num_opt(params, "threads");
    if (!value) {
        if (const char* env = std::getenv("BEAMLAB_THREADS")) {
            try {
                return std::max(0, std::stoi(env));
            } catch (const std::exception&) {
                throw ConfigError("BEAMLAB_THREADS must be an integer");
            }
        }
        return 0;  // all cores
    }
    if (*value < 0.0 || *value != std::floor(*value)) {
        throw ConfigError("parameter 'threads' must be a non-negative integer");
    }
    return static_cast<int>(*value);
}

std::uint64_t seed_of(const Params& params) {
    const double value = num(params, "seed");
    if (value < 0.0 || value != std::floor(value)) {
        throw ConfigError("parameter 'seed' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(value);
}

// ------------------------------------------------------------------ helpers

json advisories_json(const beamlab::BeamParams& beam) {
    json list = json::array();
    for (const auto advisory : beam.advisories()) list.push_back(beamlab::to_string(advisory));
    return list;
}

double carrier_frequency_of(const Params& params) {
    if (const auto omega = num_opt(params, "centre-frequency")) return *omega;
    const double wavelength_nm = num(params, "wavelength-nm");
    if (wavelength_nm <= 0.0) throw ConfigError("parameter 'wavelength-nm' must be positive");
    return 2.0 * std::numbers::pi * beamlab::speed_of_light_m_per_s / (wavelength_nm * 1e-9);
}

std::size_t recommended_phase_grid(double variance, std::size_t n_max) {
    double points = 2.0 * static_cast<double>(n_max) + 64.0;
    if (variance > 0.0 && std::isfinite(variance)) {
        points += 10.0 / std::sqrt(std::min(variance, 1e6));
    }
    std::size_t rounded = 64;
    while (rounded < static_cast<std::size_t>(points)) rounded *= 2;
    return rounded;
}

// Flatten scalar results for CSV rows; nested objects become dotted keys,
// arrays are skipped.
void flatten_scalars(const json& node, const std::string& prefix,
                     std::vector<std::pair<std::string, std::string>>& out) {
    for (const auto& [key, value] : node.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten_scalars(value, name, out);
        } else if (value.is_number_float()) {
            out.emplace_back(name, beamlab::format_scientific(value.get<double>()));
        } else if (value.is_number()) {
            out.emplace_back(name, value.dump());
        } else if (value.is_string()) {
            out.emplace_back(name, value.get<std::string>());
        } else if (value.is_boolean()) {
            out.emplace_back(name, value.dump());
        } else if (value.is_null()) {
            out.emplace_back(name, "");
        }
    }
}

std::vector<std::pair<std::string, std::string>> artifact_metadata(const json& artifact) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("tool", artifact.at("tool").get<std::string>());
    meta.emplace_back("version", artifact.at("version").get<std::string>());
    meta.emplace_back("command", artifact.at("command").get<std::string>());
    std::vector<std::pair<std::string, std::string>> config;
    flatten_scalars(artifact.at("config"), "config", config);
    for (auto& [key, value] : config) meta.emplace_back(key, value);
    return meta;
}

json make_envelope(const std::string& command, const Params& params) {
    json config = json::object();
    for (const auto& [key, value] : params) {
        // Execution details (worker count, destination paths, rendering) do
        // not influence results; keeping them out makes artifacts
        // byte-identical across thread counts and output locations.
        if (key == "threads" || key == "output" || key == "config" || key == "format") continue;
        config[key] = value;
    }
    return json{{"tool", beamlab::tool_name},
                {"version", beamlab::tool_version},
                {"command", command},
                {"config", std::move(config)},
                {"results", json::object()}};
}

// ------------------------------------------------------------------ runners

json run_asymptotic(const Params& params) {
    const auto constants = constants_of(params);
    const double omega0 = carrier_frequency_of(params);

    const auto kappa = num_opt(params, "kappa");
    const auto mu = num_opt(params, "mu");
    const auto photon_flow = num_opt(params, "photon-flow");
    const auto linewidth = num_opt(params, "linewidth");
    const beamlab::BeamParams beam = [&] {
        if (kappa || mu) {
            if (!kappa || !mu) {
                throw ConfigError("parameters 'kappa' and 'mu' must be given together");
            }
            if (photon_flow || linewidth) {
                throw ConfigError(
                    "give either 'kappa'/'mu' or 'photon-flow'/'linewidth', not both");
            }
            return beamlab::beam_from_cavity(*kappa, *mu, omega0);
        }
        if (!photon_flow || !linewidth) {
            throw ConfigError("parameters 'photon-flow' and 'linewidth' are required");
        }
        return beamlab::beam_from_rates(*photon_flow, *linewidth, omega0);
    }();

    json artifact = make_envelope("asymptotic", params);
    json& results = artifact["results"];
    results["photon_flow_per_s"] = beam.photon_flow();
    results["linewidth_per_s"] = beam.linewidth();
    results["centre_frequency_rad_per_s"] = beam.centre_frequency();
    results["power_W"] = beam.power(constants);
    if (beam.coherence().is_infinite()) {
        results["coherence"] = nullptr;
        results["coherence_infinite"] = true;
    } else {
        results["coherence"] = beam.coherence().value();
        results["coherence_infinite"] = false;
    }
    results["S2_per_kB_per_s"] = beamlab::asymptotic_entropy_flow_per_kb(beam);
    results["S2_W_per_K"] = beamlab::asymptotic_entropy_flow(beam, constants);
    results["S2_power_form_W_per_K"] =
        beamlab::asymptotic_entropy_flow_power_form(beam, constants);
    results["advisories"] = advisories_json(beam);
    if (beam.photon_flow() > 0.0 && beam.linewidth() > 0.0) {
        const auto h = beamlab::heuristic_branching(beam, constants);
        results["heuristic"] = json{{"segment_duration_s", h.segment_duration},
                                    {"segment_amplitude", h.segment_amplitude},
                                    {"phase_step_rad", h.phase_step},
                                    {"amplitude_displacement", h.amplitude_displacement},
                                    {"rate_W_per_K", h.heuristic_rate},
                                    {"rate_log2_W_per_K", h.heuristic_rate_log2}};
    }
    return artifact;
}

beamlab::SpectralConfig spectral_config_of(const Params& params) {
    beamlab::SpectralConfig config;
    config.grid_points = count_param(params, "grid", 16);
    const std::string basis = text(params, "basis");
    if (basis == "fd" || basis.empty()) {
        config.discretization = beamlab::Discretization::finite_difference;
    } else if (basis == "cosine") {
        config.discretization = beamlab::Discretization::fourier_cosine;
    } else {
        throw ConfigError("parameter 'basis' must be 'fd' or 'cosine'");
    }
    return config;
}

json run_spectral(const Params& params) {
    const auto constants = constants_of(params);
    const auto config = spectral_config_of(params);

    const auto coherence_param = num_opt(params, "coherence");
    const auto photon_flow = num_opt(params, "photon-flow");
    const auto linewidth = num_opt(params, "linewidth");
    std::optional<beamlab::ReducedProblem> reduced;
    double coherence = 0.0;
    if (coherence_param) {
        coherence = *coherence_param;
    } else if (photon_flow && linewidth) {
        reduced = beamlab::reduce(beamlab::beam_from_rates(*photon_flow, *linewidth, 1.0e15));
        coherence = reduced->coherence;
    } else {
        throw ConfigError("give 'coherence', or both 'photon-flow' and 'linewidth'");
    }

    const auto solution = beamlab::reduced_ground_eigenvalue(coherence, config);
    json artifact = make_envelope("spectral", params);
    json& results = artifact["results"];
    results["coherence"] = coherence;
    results["epsilon"] = std::pow(4.0 * coherence, -0.25);
    results["grid_points"] = solution.grid_points;
    results["lambda_tilde"] = solution.reduced_eigenvalue;
    results["operator_eigenvalue"] = solution.operator_eigenvalue;
    results["residual_norm"] = solution.residual_norm;
    if (toggled(params, "richardson")) {
        results["lambda_tilde_richardson"] =
            beamlab::richardson_reduced_eigenvalue(coherence, config);
    }
    if (reduced) {
        results["rate_scale_per_s"] = reduced->rate_scale;
        results["S2_spectral_W_per_K"] =
            constants.boltzmann * reduced->rate_scale * solution.reduced_eigenvalue;
        results["S2_asymptotic_W_per_K"] = constants.boltzmann * reduced->rate_scale;
    }
    return artifact;
}

std::vector<double> sample_times_of(const Params& params, double horizon) {
    const double from = num(params, "times-from");
    double to = num(params, "times-to");
    if (to == 0.0) to = horizon;
    const std::size_t count = count_param(params, "times-count", 2);
    if (!(from > 0.0) || !(to > from)) {
        throw ConfigError("sample times need 0 < times-from < times-to");
    }
    std::vector<double> times(count);
    for (std::size_t i = 0; i < count; ++i) {
        times[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return times;
}

json ucurve_json(const beamlab::UCurve& curve) {
    return json{{"times", curve.times},
                {"u_mean", curve.u_mean},
                {"u_stderr", curve.u_stderr},
                {"n_paths", curve.n_paths},
                {"seed", curve.seed}};
}

json run_montecarlo(const Params& params) {
    beamlab::PathConfig config;
    config.step = num(params, "step");
    config.horizon = num(params, "horizon");
    if (config.horizon > 50.0) {
        throw ConfigError("horizon above 50 reduced time units is not sampleable by plain MC");
    }
    config.n_paths = count_param(params, "paths", 1);
    config.seed = seed_of(params);
    config.initial_point = num(params, "initial-point");
    config.antithetic = toggled(params, "antithetic");
    const double coherence = num(params, "coherence");

    const auto times = sample_times_of(params, config.horizon);
    const auto curve = beamlab::estimate_u(config, coherence, times, threads_of(params));

    const double window_lo = num(params, "window-lo");
    const double window_hi = std::min(num(params, "window-hi"), config.horizon);
    const auto fit = beamlab::fit_decay_rate(curve, {window_lo, window_hi});

    json artifact = make_envelope("montecarlo", params);
    json& results = artifact["results"];
    results["coherence"] = coherence;
    results.update(beamlab::fk_estimate_json(fit));
    results["curve"] = ucurve_json(curve);
    return artifact;
}

json run_brute(const Params& params) {
    const double amplitude = num(params, "amplitude");
    const double variance = num(params, "phase-variance");
    const std::size_t segments = count_param(params, "k-segments", 1);
    const double duration = num(params, "duration");
    const std::size_t samples = count_param(params, "samples", 1);
    const std::uint64_t seed = seed_of(params);
    if (!(duration > 0.0)) throw ConfigError("parameter 'duration' must be positive");
    if (variance < 0.0) throw ConfigError("parameter 'phase-variance' must be non-negative");

    std::size_t n_max = count_param(params, "n-max", 0);
    if (n_max == 0) n_max = beamlab::default_fock_cutoff(amplitude);
    std::size_t n_grid = count_param(params, "n-grid", 0);
    if (n_grid == 0) n_grid = recommended_phase_grid(variance, n_max);

    // Rates such that each of the K segments carries amplitude r and
    // single-copy phase variance 'phase-variance'.
    const double dt = duration / static_cast<double>(segments);
    const auto beam =
        beamlab::beam_from_rates(amplitude * amplitude / dt, variance / dt, 1.0e15);
    const auto natural = beamlab::PhysicalConstants::natural();

    json artifact = make_envelope("brute", params);
    json& results = artifact["results"];
    results["n_max"] = n_max;
    results["n_grid"] = n_grid;
    results["segments"] = segments;

    const auto mc = beamlab::segment_purity_mc(beam, segments, duration, samples, seed);
    results["purity_mc"] = mc.mean;
    results["purity_mc_stderr"] = mc.std_error;
    results["S2_mc_per_kB"] = -std::log(mc.mean);

    if (segments == 1) {
        const auto rho = beamlab::phase_averaged_state(amplitude, variance, n_grid, n_max);
        const double fock_purity = beamlab::purity(rho);
        const double quadrature =
            beamlab::single_segment_purity_quadrature(amplitude, 2.0 * variance);
        results["purity_fock"] = fock_purity;
        results["purity_quadrature"] = quadrature;
        results["S2_fock_per_kB"] = beamlab::renyi2_entropy(rho, natural);
        results["S2_quadrature_per_kB"] = -std::log(quadrature);
        results["truncation_deficit"] = rho.truncation_deficit();
        results["fock_vs_quadrature"] = fock_purity - quadrature;
        results["mc_vs_quadrature_sigma"] =
            mc.std_error > 0.0 ? (mc.mean - quadrature) / mc.std_error : 0.0;
        const std::string rho_path = text(params, "export-rho");
        if (!rho_path.empty()) {
            std::ofstream out(rho_path, std::ios::binary);
            if (!out) throw ConfigError("cannot open '" + rho_path + "' for writing");
            out << beamlab::density_matrix_json(rho).dump(2) << '\n';
        }
    }
    return artifact;
}

json run_thermal(const Params& params) {
    const auto constants = constants_of(params);
    const double theta = num(params, "temperature");
    const auto beam = beamlab::make_thermal_beam(theta, constants);
    const double power_quad = beamlab::thermal_power_quadrature(theta, constants);
    const double renyi2_quad =
        beamlab::thermal_entropy_flow_renyi2_quadrature(theta, constants);

    json artifact = make_envelope("thermal", params);
    json& results = artifact["results"];
    results["temperature_K"] = beam.temperature;
    results["power_W"] = beam.power;
    results["renyi2_flow_W_per_K"] = beam.renyi2_flow;
    results["vn_flow_W_per_K"] = beam.vn_flow;
    results["quadrature"] = json{{"power_W", power_quad},
                                 {"renyi2_flow_W_per_K", renyi2_quad},
                                 {"power_rel_diff", power_quad / beam.power - 1.0},
                                 {"renyi2_rel_diff", renyi2_quad / beam.renyi2_flow - 1.0}};
    return artifact;
}

json run_compare(const Params& params) {
    const auto constants = constants_of(params);
    const auto comparison = beamlab::compare_laser_thermal(num(params, "power"),
                                                           num(params, "q-factor"), constants);
    json artifact = make_envelope("compare", params);
    artifact["results"] = json{{"laser_S2_W_per_K", comparison.laser_flow},
                               {"thermal_S2_W_per_K", comparison.thermal_flow},
                               {"ratio", comparison.ratio},
                               {"equivalent_temperature_K", comparison.equivalent_temperature}};
    return artifact;
}

json run_crosscheck(const Params& params) {
    const double coherence = num(params, "coherence");
    const double window_lo = num(params, "window-lo");
    const double window_hi = num(params, "window-hi");
    const double max_sigma = num(params, "max-sigma");

    beamlab::SpectralConfig spectral_config;
    spectral_config.grid_points = count_param(params, "grid", 32);
    const double lambda_tilde =
        beamlab::richardson_reduced_eigenvalue(coherence, spectral_config);

    beamlab::PathConfig path_config;
    path_config.step = num(params, "step");
    path_config.horizon = window_hi;
    path_config.n_paths = count_param(params, "paths", 2);
    path_config.seed = seed_of(params);
    std::vector<double> times;
    for (double t = 0.25; t <= window_hi + 1e-9; t += 0.25) times.push_back(t);
    const auto curve = beamlab::estimate_u(path_config, coherence, times, threads_of(params));
    const auto fit = beamlab::fit_decay_rate(curve, {window_lo, window_hi});

    const double distance = std::abs(fit.lambda_hat - lambda_tilde);
    const double sigma_distance = fit.std_error > 0.0
                                      ? distance / fit.std_error
                                      : std::numeric_limits<double>::infinity();
    const bool pass = sigma_distance < max_sigma;

    json artifact = make_envelope("crosscheck", params);
    json& results = artifact["results"];
    results["coherence"] = coherence;
    results["mc"] = json{{"lambda_hat", fit.lambda_hat},
                         {"lambda_std_error", fit.std_error},
                         {"r_squared", fit.r_squared},
                         {"n_paths", path_config.n_paths},
                         {"seed", path_config.seed}};
    results["spectral"] = json{{"lambda_tilde", lambda_tilde},
                               {"grid_points", spectral_config.grid_points},
                               {"richardson", true}};
    results["abs_difference"] = distance;
    results["sigma_distance"] = sigma_distance;
    results["threshold_sigma"] = max_sigma;
    results["status"] = pass ? "PASS" : "FAIL";
    return artifact;
}

using Runner = json (*)(const Params&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"asymptotic", run_asymptotic}, {"spectral", run_spectral},
        {"montecarlo", run_montecarlo}, {"brute", run_brute},
        {"thermal", run_thermal},       {"compare", run_compare},
        {"crosscheck", run_crosscheck},
    };
    return table;
}

// -------------------------------------------------------------------- sweep

struct SweepRange {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
    bool log_scale = false;
};

SweepRange parse_range(const std::string& spec) {
    const auto equals = spec.find('=');
    if (equals == std::string::npos) {
        throw ConfigError("range '" + spec + "' must look like name=start:stop:points[:scale]");
    }
    SweepRange range;
    range.name = spec.substr(0, equals);
    std::vector<std::string> pieces;
    const std::string rest = spec.substr(equals + 1);
    std::size_t position = 0;
    while (true) {
        const auto colon = rest.find(':', position);
        pieces.push_back(rest.substr(position, colon - position));
        if (colon == std::string::npos) break;
        position = colon + 1;
    }
    if (pieces.size() < 3 || pieces.size() > 4) {
        throw ConfigError("range '" + spec + "' must look like name=start:stop:points[:scale]");
    }
    try {
        range.start = std::stod(pieces[0]);
        range.stop = std::stod(pieces[1]);
        range.points = static_cast<std::size_t>(std::stoul(pieces[2]));
    } catch (const std::exception&) {
        throw ConfigError("range '" + spec + "' has non-numeric fields");
    }
    if (pieces.size() == 4) {
        if (pieces[3] == "log") {
            range.log_scale = true;
        } else if (pieces[3] != "linear") {
            throw ConfigError("range scale must be 'linear' or 'log'");
        }
    }
    if (range.points < 1 || (range.points > 1 && range.stop == range.start)) {
        throw ConfigError("range '" + spec + "' is degenerate");
    }
    if (range.log_scale && (range.start <= 0.0 || range.stop <= 0.0)) {
        throw ConfigError("log-scale range '" + spec + "' needs positive endpoints");
    }
    return range;
}

double range_value(const SweepRange& range, std::size_t index) {
    if (range.points == 1) return range.start;
    const double fraction = static_cast<double>(index) / static_cast<double>(range.points - 1);
    if (range.log_scale) {
        return std::exp(std::log(range.start) +
                        fraction * (std::log(range.stop) - std::log(range.start)));
    }
    return range.start + fraction * (range.stop - range.start);
}

void emit(const std::string& payload, const std::string& output_path) {
    if (output_path.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + output_path + "' for writing");
    out << payload;
}

int run_sweep(const Params& sweep_params, const std::vector<std::string>& range_specs,
              const std::vector<std::string>& set_specs, const std::string& base_command) {
    const auto runner_it = runners().find(base_command);
    if (runner_it == runners().end()) {
        throw ConfigError("sweep base command '" + base_command + "' is unknown");
    }
    const auto& base_specs = command_specs().at(base_command);
    if (range_specs.empty()) throw ConfigError("sweep needs at least one --range");

    std::map<std::string, const ParamSpec*> by_name;
    for (const auto& spec : base_specs) by_name[spec.name] = &spec;
    for (const auto& spec : common_specs()) by_name[spec.name] = &spec;

    Params base;
    for (const auto& [name, spec] : by_name) base[name] = spec->fallback;
    for (const auto& key : {"seed", "threads", "natural-units"}) {
        // These sweep-level options apply to every grid point.
        const auto it = sweep_params.find(key);
        if (it != sweep_params.end()) base[key] = it->second;
    }
    for (const auto& spec : set_specs) {
        const auto equals = spec.find('=');
        if (equals == std::string::npos) {
            throw ConfigError("--set '" + spec + "' must look like name=value");
        }
        const std::string name = spec.substr(0, equals);
        const std::string raw = spec.substr(equals + 1);
        const auto known = by_name.find(name);
        if (known == by_name.end()) {
            throw ConfigError("--set parameter '" + name + "' is unknown for '" + base_command +
                              "'");
        }
        if (known->second->kind == ParamKind::number) {
            base[name] = as_number(raw, name);
        } else if (known->second->kind == ParamKind::toggle) {
            base[name] = raw == "true" || raw == "1";
        } else {
            base[name] = raw;
        }
    }

    std::vector<SweepRange> ranges;
    ranges.reserve(range_specs.size());
    for (const auto& spec : range_specs) {
        auto range = parse_range(spec);
        if (by_name.find(range.name) == by_name.end()) {
            throw ConfigError("--range parameter '" + range.name + "' is unknown for '" +
                              base_command + "'");
        }
        ranges.push_back(std::move(range));
    }

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> index(ranges.size(), 0);
    for (;;) {
        Params point = base;
        std::vector<std::pair<std::string, std::string>> swept;
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            const double value = range_value(ranges[i], index[i]);
            point[ranges[i].name] = value;
            swept.emplace_back(ranges[i].name, beamlab::format_scientific(value));
        }
        const json artifact = runner_it->second(point);
        std::vector<std::pair<std::string, std::string>> flat;
        flatten_scalars(artifact.at("results"), "", flat);
        if (header.empty()) {
            for (const auto& [key, value] : swept) header.push_back(key);
            for (const auto& [key, value] : flat) header.push_back(key);
        }
        std::vector<std::string> row;
        for (const auto& [key, value] : swept) row.push_back(value);
        for (const auto& [key, value] : flat) row.push_back(value);
        row.resize(header.size());
        rows.push_back(std::move(row));

        // Advance the last range fastest; deterministic row order.
        std::size_t level = ranges.size();
        bool done = true;
        while (level > 0) {
            --level;
            if (++index[level] < ranges[level].points) {
                done = false;
                break;
            }
            index[level] = 0;
        }
        if (done) break;
    }

    std::vector<std::pair<std::string, std::string>> meta{
        {"tool", beamlab::tool_name},
        {"version", beamlab::tool_version},
        {"command", "sweep"},
        {"base_command", base_command},
    };
    for (const auto& spec : range_specs) meta.emplace_back("range", spec);
    for (const auto& spec : set_specs) meta.emplace_back("set", spec);
    emit(beamlab::csv_table(meta, header, rows), text(sweep_params, "output"));
    return exit_ok;
}

std::string render(const json& artifact, const std::string& format) {
    if (format == "json" || format.empty()) return artifact.dump(2) + "\n";
    if (format != "csv") throw ConfigError("parameter 'format' must be 'json' or 'csv'");
    const auto meta = artifact_metadata(artifact);
    if (artifact.at("command") == "montecarlo") {
        beamlab::UCurve curve;
        const json& c = artifact.at("results").at("curve");
        curve.times = c.at("times").get<std::vector<double>>();
        curve.u_mean = c.at("u_mean").get<std::vector<double>>();
        curve.u_stderr = c.at("u_stderr").get<std::vector<double>>();
        return beamlab::ucurve_csv(curve, meta);
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten_scalars(artifact.at("results"), "", flat);
    std::vector<std::string> header;
    std::vector<std::string> row;
    for (auto& [key, value] : flat) {
        header.push_back(key);
        row.push_back(value);
    }
    return beamlab::csv_table(meta, header, {row});
}

// ---------------------------------------------------------------- CLI setup

struct CommandOptions {
    std::map<std::string, std::string> values;  // raw text as typed
    std::map<std::string, bool> toggles;
    std::map<std::string, CLI::Option*> options;
};

void register_specs(CLI::App* sub, const std::vector<ParamSpec>& specs, CommandOptions& store) {
    for (const auto& spec : specs) {
        const std::string flag = "--" + std::string(spec.name);
        if (spec.kind == ParamKind::toggle) {
            store.toggles[spec.name] = false;
            store.options[spec.name] = sub->add_flag(flag, store.toggles[spec.name], spec.help);
        } else {
            store.values[spec.name] = "";
            store.options[spec.name] = sub->add_option(flag, store.values[spec.name], spec.help);
        }
    }
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json config;
    try {
        in >> config;
    } catch (const std::exception& error) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " +
                          std::string(error.what()));
    }
    if (!config.is_object()) throw ConfigError("config file must hold a flat JSON object");
    return config;
}

// Resolve precedence flag > config file > built-in default, and validate
// config-file keys against the known parameters.
Params resolve_params(const std::vector<ParamSpec>& specs, const CommandOptions& store) {
    std::map<std::string, const ParamSpec*> by_name;
    for (const auto& spec : specs) by_name[spec.name] = &spec;
    for (const auto& spec : common_specs()) by_name[spec.name] = &spec;

    nlohmann::json file = nlohmann::json::object();
    const auto config_option = store.options.find("config");
    if (config_option != store.options.end() && config_option->second->count() > 0) {
        file = load_config_file(store.values.at("config"));
        for (const auto& item : file.items()) {
            if (by_name.find(item.key()) == by_name.end()) {
                throw ConfigError("config file key '" + item.key() +
                                  "' is not a known parameter");
            }
        }
    }

    Params params;
    for (const auto& [name, spec] : by_name) {
        const auto option = store.options.find(name);
        const bool flag_set = option != store.options.end() && option->second->count() > 0;
        if (spec->kind == ParamKind::toggle) {
            bool value = spec->fallback.is_boolean() && spec->fallback.get<bool>();
            if (file.contains(name)) {
                if (!file[name].is_boolean()) {
                    throw ConfigError("config file key '" + name + "' must be a boolean");
                }
                value = file[name].get<bool>();
            }
            if (flag_set) value = store.toggles.at(name);
            params[name] = value;
            continue;
        }
        nlohmann::json value = spec->fallback;
        if (file.contains(name)) value = file[name];
        if (flag_set) {
            const std::string& raw = store.values.at(name);
            value = spec->kind == ParamKind::number ? nlohmann::json(as_number(raw, name))
                                                    : nlohmann::json(raw);
        } else if (!value.is_null() && spec->kind == ParamKind::number) {
            value = as_number(value, name);
        }
        if (spec->required && value.is_null()) {
            throw ConfigError("missing required parameter '" + std::string(spec->name) + "'");
        }
        params[name] = value;
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-flow estimators for an ideal phase-diffusing laser beam"};
    app.require_subcommand(1);

    std::map<std::string, CommandOptions> stores;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, specs] : command_specs()) {
        CLI::App* sub = app.add_subcommand(name, "");
        register_specs(sub, specs, stores[name]);
        register_specs(sub, common_specs(), stores[name]);
        subs[name] = sub;
    }
    CLI::App* sweep = app.add_subcommand("sweep", "run a command over parameter ranges (CSV)");
    std::string sweep_command;
    std::vector<std::string> sweep_ranges;
    std::vector<std::string> sweep_sets;
    sweep->add_option("--command", sweep_command, "base command to sweep")->required();
    sweep->add_option("--range", sweep_ranges,
                      "parameter range name=start:stop:points[:linear|log] (repeatable)");
    sweep->add_option("--set", sweep_sets, "fixed parameter name=value (repeatable)");
    CommandOptions sweep_store;
    register_specs(sweep, common_specs(), sweep_store);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        if (error.get_exit_code() == 0) return app.exit(error);  // --help
        app.exit(error);
        return exit_config_error;
    }

    const auto started = std::chrono::steady_clock::now();
    int status = exit_ok;
    try {
        if (sweep->parsed()) {
            const Params params = resolve_params({}, sweep_store);
            status = run_sweep(params, sweep_ranges, sweep_sets, sweep_command);
        } else {
            for (const auto& [name, sub] : subs) {
                if (!sub->parsed()) continue;
                const Params params = resolve_params(command_specs().at(name), stores[name]);
                const json artifact = runners().at(name)(params);
                emit(render(artifact, text(params, "format")), text(params, "output"));
                if (name == "crosscheck" &&
                    artifact.at("results").at("status").get<std::string>() != "PASS") {
                    status = exit_crosscheck_fail;
                }
            }
        }
    } catch (const beamlab::ConfigError& error) {
        const json report{{"error", {{"type", "config"}, {"message", error.what()}}}};
        std::fprintf(stderr, "%s\n", report.dump().c_str());
        return exit_config_error;
    } catch (const beamlab::DomainError& error) {
        const json report{{"error", {{"type", "domain"}, {"message", error.what()}}}};
        std::fprintf(stderr, "%s\n", report.dump().c_str());
        return exit_config_error;
    } catch (const beamlab::Error& error) {
        const json report{{"error", {{"type", "numerical"}, {"message", error.what()}}}};
        std::fprintf(stderr, "%s\n", report.dump().c_str());
        return exit_numerical_error;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::fprintf(stderr, "# %s finished in %.3f s\n", beamlab::tool_name, elapsed);
    return status;
}
