// Acceptance suite: one hard gate per headline claim, each printed as a
// single [PASS]/[FAIL] line. Run with the path to the beamlab binary as
// argv[1] (needed by the artifact-determinism gate).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "beamlab/beam.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/fock.hpp"
#include "beamlab/spectral.hpp"
#include "beamlab/stochastic.hpp"
#include "beamlab/thermal.hpp"

using namespace beamlab;

namespace {

namespace fs = std::filesystem;

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

// 1. Spectral/asymptotic consistency: lambda_tilde(C) within 1/(4 sqrt(C))
//    of 1 for C in {1e2, 1e3, 1e4}, under 10 s per point at M = 2048.
void criterion_1() {
    const auto natural = PhysicalConstants::natural();
    const SpectralConfig config{2048, Discretization::finite_difference};
    bool ok = true;
    std::string detail = "|lambda_tilde - 1| <= 1/(4 sqrt(C)):";
    for (double coherence : {1e2, 1e3, 1e4}) {
        const auto beam = beam_from_rates(coherence / 4.0, 1.0, 1e15);
        const auto start = std::chrono::steady_clock::now();
        const double ratio = entropy_flow_spectral(beam, config, natural) /
                             asymptotic_entropy_flow(beam, natural);
        const double elapsed = seconds_since(start);
        const double bound = 1.0 / (4.0 * std::sqrt(coherence));
        const bool point_ok = std::abs(ratio - 1.0) <= bound && elapsed < 10.0;
        ok = ok && point_ok;
        detail += fmt(" C=%g: dev=%.3e bound=%.3e t=%.1fs", coherence, std::abs(ratio - 1.0),
                      bound, elapsed);
    }
    report(1, ok, detail);
}

// 2. Three-way agreement at C = 100: Richardson spectral vs MC fit
//    (1e5 paths, window [2,6]) vs the asymptotic value 1.
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    const double coherence = 100.0;
    const SpectralConfig config{2048, Discretization::finite_difference};
    const double lambda_spectral = richardson_reduced_eigenvalue(coherence, config);

    PathConfig path_config;
    path_config.step = 0.01;
    path_config.horizon = 6.0;
    path_config.n_paths = 100000;
    path_config.seed = 2025;
    std::vector<double> times;
    for (double t = 0.25; t <= 6.0 + 1e-9; t += 0.25) times.push_back(t);
    const auto curve = estimate_u(path_config, coherence, times, 0);
    const auto fit = fit_decay_rate(curve, {2.0, 6.0});

    const double elapsed = seconds_since(start);
    const double mc_gap = std::abs(fit.lambda_hat - lambda_spectral);
    const double deviation = std::abs(lambda_spectral - 1.0);
    const double lo = 0.5 / (8.0 * std::sqrt(coherence));
    const double hi = 2.0 / (8.0 * std::sqrt(coherence));
    const bool ok = mc_gap < 3.0 * fit.std_error && deviation >= lo && deviation <= hi &&
                    elapsed < 120.0;
    report(2, ok,
           fmt("three-way at C=100: MC %.5f+-%.5f, spectral %.6f, |MC-spec|=%.1e (3sig=%.1e), "
               "1-spec=%.5f in [%.5f, %.5f], t=%.0fs",
               fit.lambda_hat, fit.std_error, lambda_spectral, mc_gap, 3.0 * fit.std_error,
               deviation, lo, hi, elapsed));
}

// 3. K = 1 oracle equivalence across (r, variance) in {0.5,1,2}x{0.1,0.5,2}:
//    MC within 3 sigma of the quadrature, quadrature within 1e-4 of the
//    number-basis purity, MC within 3 sigma + 1e-4 of the number basis.
void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_quad_gap = 0.0;
    double worst_mc_sigma = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        for (double variance : {0.1, 0.5, 2.0}) {
            const auto beam = beam_from_rates(r * r, variance, 1e15);
            const auto mc = segment_purity_mc(beam, 1, 1.0, 2000000, 814);
            const double quadrature = single_segment_purity_quadrature(r, 2.0 * variance);
            const std::size_t n_max = default_fock_cutoff(r);
            const double fock =
                purity(phase_averaged_state(r, variance, 512, n_max));
            const double mc_sigma = std::abs(mc.mean - quadrature) / mc.std_error;
            const double quad_gap = std::abs(quadrature - fock);
            worst_mc_sigma = std::max(worst_mc_sigma, mc_sigma);
            worst_quad_gap = std::max(worst_quad_gap, quad_gap);
            ok = ok && mc_sigma < 3.0 && quad_gap <= 1e-4 &&
                 std::abs(mc.mean - fock) <= 3.0 * mc.std_error + 1e-4;
        }
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 60.0;
    report(3, ok,
           fmt("K=1 oracle equivalence over 9 (r, variance) points: worst |MC-quad|=%.2f"
               " sigma, worst |quad-fock|=%.1e (<=1e-4), t=%.0fs",
               worst_mc_sigma, worst_quad_gap, elapsed));
}

// 4. Coherent-overlap exactness in the truncated number basis.
void criterion_4() {
    bool ok = true;
    double worst = 0.0;
    for (double ra : {0.5, 1.0, 2.0}) {
        for (double rb : {0.5, 1.0, 2.0}) {
            for (double dphi : {0.0, 0.3, std::numbers::pi / 2, std::numbers::pi, 5.0}) {
                const auto va = coherent_fock_vector({ra, 0.0}, 40);
                const auto vb = coherent_fock_vector({rb, dphi}, 40);
                const double overlap = std::norm(va.amplitudes.dot(vb.amplitudes));
                const double exact = coherent_overlap_sq({ra, 0.0}, {rb, dphi});
                worst = std::max(worst, std::abs(overlap - exact));
                ok = ok && std::abs(overlap - exact) <= 1e-10;
            }
        }
    }
    report(4, ok, fmt("Fock inner products vs exp(-|alpha-beta|^2), r<=2, n_max=40: "
                      "worst |diff|=%.2e (<=1e-10)",
                      worst));
}

// 5. Thermal closed forms: quadrature reproduces pi/12 and pi/8 to 1e-6
//    relative; vn/renyi2 = 4/3 to 1e-12.
void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    const double power_rel =
        std::abs(unidirectional_power_constant() / (std::numbers::pi / 12.0) - 1.0);
    const double entropy_rel =
        std::abs(unidirectional_entropy_constant() / (std::numbers::pi / 8.0) - 1.0);
    const auto si = PhysicalConstants::si();
    const double ratio_err = std::abs(thermal_entropy_flow_vn(300.0, si) /
                                          thermal_entropy_flow_renyi2(300.0, si) -
                                      4.0 / 3.0);
    const double elapsed = seconds_since(start);
    const bool ok =
        power_rel <= 1e-6 && entropy_rel <= 1e-6 && ratio_err <= 1e-12 && elapsed < 1.0;
    report(5, ok,
           fmt("thermal constants: |quad/(pi/12)-1|=%.1e, |quad/(pi/8)-1|=%.1e (<=1e-6), "
               "|vn/renyi2-4/3|=%.1e (<=1e-12), t=%.2fs",
               power_rel, entropy_rel, ratio_err, elapsed));
}

// 6. The headline numerical example: 0.5 W at Q = 1e10 lands within a factor
//    of 10 of 1e-12 W/K.
void criterion_6() {
    const auto comparison = compare_laser_thermal(0.5, 1e10, PhysicalConstants::si());
    const bool ok = comparison.laser_flow >= 1e-13 && comparison.laser_flow <= 1e-11;
    report(6, ok,
           fmt("laser S2(P=0.5 W, Q=1e10) = %.4e W/K, within [1e-13, 1e-11] around 1e-12",
               comparison.laser_flow));
}

// 7. Trivial limits: zero flow or zero linewidth give exactly zero entropy
//    flow on every accepting path, and the documented rejections elsewhere.
void criterion_7() {
    const auto si = PhysicalConstants::si();
    const auto no_flow = beam_from_rates(0.0, 1e3, 1e15);
    const auto no_width = beam_from_rates(1e14, 0.0, 1e15);
    bool ok = asymptotic_entropy_flow(no_flow, si) == 0.0 &&
              asymptotic_entropy_flow(no_width, si) == 0.0 &&
              asymptotic_entropy_flow_power_form(no_flow, si) == 0.0 &&
              asymptotic_entropy_flow_power_form(no_width, si) == 0.0 &&
              asymptotic_entropy_flow_per_kb(no_flow) == 0.0 &&
              asymptotic_entropy_flow_per_kb(no_width) == 0.0;
    // Pure states keep purity 1 in the segment sampler (S2 = 0).
    ok = ok && segment_purity_mc(no_flow, 2, 1.0, 50, 1).mean == 1.0;
    ok = ok && segment_purity_mc(no_width, 2, 1.0, 50, 1).mean == 1.0;

    int rejections = 0;
    const SpectralConfig config{64, Discretization::finite_difference};
    for (const auto* beam : {&no_flow, &no_width}) {
        try {
            (void)reduce(*beam);
        } catch (const DegenerateProblemError&) {
            ++rejections;
        }
        try {
            (void)heuristic_branching(*beam, si);
        } catch (const DegenerateProblemError&) {
            ++rejections;
        }
        try {
            (void)entropy_flow_spectral(*beam, config, si);
        } catch (const DegenerateProblemError&) {
            ++rejections;
        }
    }
    try {
        std::vector<double> path(3, 0.0);
        (void)fk_weight(path, 0.1, 0.0);
    } catch (const DomainError&) {
        ++rejections;
    }
    ok = ok && rejections == 7;
    report(7, ok, fmt("zero-limit flows exactly 0, degenerate rejections %d/7", rejections));
}

// 8. Determinism: repeated CLI runs with the same seed produce byte-identical
//    artifacts for 1 and 4 threads, across JSON and CSV formats.
void criterion_8(const std::string& binary) {
    const fs::path dir =
        fs::temp_directory_path() / ("beamlab-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    const auto run = [&](const std::string& args, const std::string& out) {
        const std::string command = "'" + binary + "' " + args + " --output '" +
                                    (dir / out).string() + "' > /dev/null 2>&1";
        const int raw = std::system(command.c_str());
        return WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
    };

    const std::string mc =
        "montecarlo --coherence 25 --paths 20000 --step 0.02 --horizon 4 --times-count 8 "
        "--window-lo 1 --window-hi 4 --seed 99";
    bool ok = run(mc + " --threads 1", "a.json") && run(mc + " --threads 1", "b.json") &&
              run(mc + " --threads 4", "c.json");
    ok = ok && run(mc + " --threads 1 --format csv", "a.csv") &&
         run(mc + " --threads 4 --format csv", "b.csv");
    ok = ok && run("spectral --coherence 100 --grid 256", "s1.json") &&
         run("spectral --coherence 100 --grid 256", "s2.json");
    bool identical = false;
    if (ok) {
        identical = slurp(dir / "a.json") == slurp(dir / "b.json") &&
                    slurp(dir / "a.json") == slurp(dir / "c.json") &&
                    slurp(dir / "a.csv") == slurp(dir / "b.csv") &&
                    slurp(dir / "s1.json") == slurp(dir / "s2.json") &&
                    !slurp(dir / "a.json").empty() && !slurp(dir / "a.csv").empty();
    }
    std::error_code ignore;
    fs::remove_all(dir, ignore);
    report(8, ok && identical,
           fmt("CLI artifacts byte-identical across reruns and threads {1,4}: runs %s, "
               "bytes %s",
               ok ? "ok" : "failed", identical ? "identical" : "differ"));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-beamlab-binary>\n");
        return 2;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(argv[1]);
    std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
