#ifndef BEAMLAB_STOCHASTIC_HPP
#define BEAMLAB_STOCHASTIC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "beamlab/beam.hpp"

namespace beamlab {

// Reduced-unit convention used throughout this module.
//
// Two independent realisations of the diffusing phase carry independent
// Wiener processes; the squared-overlap functional depends on them only
// through the difference process X = (W - V)/sqrt(2), itself a standard
// Wiener process in physical time. Times are measured in units of
// 1/sqrt(Ndot*l) and positions in the dimensionless coordinate y in which
// the decay operator reads
//     2*sqrt(Ndot*l) * [ -1/2 d^2/dy^2 + sin^2(eps*y)/(2*eps^2) ].
// In that coordinate the difference process picks up a diffusion coefficient
// of 2: over a reduced interval dtau, y spreads with variance 2*dtau.
// estimate_u therefore evaluates the potential
//     V(y) = sin^2(eps*y)/eps^2
// along y(tau) = y0 + sqrt(2)*w(tau), with w the standard Wiener path
// produced by simulate_difference_paths. This bookkeeping makes the fitted
// decay rate equal to lambda_tilde = lambda0/sqrt(Ndot*l) directly (-> 1 in
// the high-coherence limit); a cross check against the spectral module pins
// the convention.

struct PathConfig {
    double step = 0.01;          // reduced time increment
    double horizon = 6.0;        // total reduced time (snapped to the step grid)
    std::size_t n_paths = 100000;
    std::uint64_t seed = 0;
    double initial_point = 0.0;  // y(0)
    bool antithetic = false;     // pair every path with its reflection about y0
};

struct PathBatch {
    double step = 0.0;
    std::size_t n_steps = 0;  // increments per path; each path has n_steps+1 values
    std::size_t n_paths = 0;
    std::vector<double> values;  // row-major, n_paths x (n_steps+1)

    std::span<const double> path(std::size_t i) const {
        return std::span<const double>(values).subspan(i * (n_steps + 1), n_steps + 1);
    }
};

// Standard Wiener trajectories started at initial_point, with exact
// N(0, step) Gaussian increments. Path i is a pure function of (seed, i).
PathBatch simulate_difference_paths(const PathConfig& config);

// exp(-integral V(y) dtau) along one trajectory, trapezoid rule on the
// trajectory grid, with V(y) = sin^2(eps*y)/eps^2 and eps = (4*C)^(-1/4).
// The trajectory must already be in the y convention described above.
double fk_weight(std::span<const double> path, double step, double coherence);

struct UCurve {
    std::vector<double> times;     // reduced horizons, snapped to the step grid
    std::vector<double> u_mean;    // ensemble mean of the path weight
    std::vector<double> u_stderr;  // standard error of the mean
    // Covariance of the u_mean estimates (row-major n x n, n = times.size()).
    // Estimates at different horizons share paths and are strongly
    // correlated; ignoring this understates fitted-slope errors severalfold.
    // Left empty above 128 sample times (quadratic storage) or for a single
    // path; fits then fall back to the diagonal standard errors.
    std::vector<double> u_cov;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of u(y0, tau) at each requested sample time: the mean
// of fk_weight over n_paths difference trajectories. All sample times come
// from the same ensemble, so u_mean is non-increasing pathwise, not just in
// expectation. Workers split the ensemble in fixed blocks with a cascade
// reduction, so the result is byte-identical for any thread count.
UCurve estimate_u(const PathConfig& config, double coherence,
                  std::span<const double> sample_times, int threads = 1);

struct FKEstimate {
    double lambda_hat = 0.0;   // reduced decay rate, -slope of log u
    double std_error = 0.0;    // propagated from the curve's standard errors
    std::pair<double, double> fit_window{0.0, 0.0};  // sample times actually used
    double r_squared = 0.0;
};

// Weighted least-squares line fit of log u against reduced time over the
// window (weights 1/Var[log u]); the intercept absorbs the ground-mode
// projection constant. The slope error is propagated through the full
// covariance of the curve when the curve carries one, and through the
// diagonal standard errors otherwise.
FKEstimate fit_decay_rate(const UCurve& curve, std::pair<double, double> window);

struct PurityEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Pre-continuum purity of K consecutive beam segments spanning [0, T): the
// product over segments of squared coherent-state overlaps between two
// independently diffused phase histories, each sampled at its segment end,
// averaged over n_samples draws. Converges to estimate_u's continuum value
// as K -> infinity at fixed T.
PurityEstimate segment_purity_mc(const BeamParams& beam, std::size_t segments, double duration,
                                 std::size_t n_samples, std::uint64_t seed);

}  // namespace beamlab

#endif  // BEAMLAB_STOCHASTIC_HPP
