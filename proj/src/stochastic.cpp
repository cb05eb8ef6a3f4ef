#include "beamlab/stochastic.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "beamlab/errors.hpp"
#include "beamlab/util.hpp"

namespace beamlab {

namespace {

constexpr std::size_t block_size = 2048;  // paths per reduction block
// Cross-moment storage grows as blocks * n_times^2; past this many sample
// times the covariance is dropped and fits fall back to diagonal errors.
constexpr std::size_t max_cov_times = 128;

void validate_path_config(const PathConfig& config) {
    if (!(config.step > 0.0) || !std::isfinite(config.step)) {
        throw ConfigError("step must be positive and finite");
    }
    if (!std::isfinite(config.horizon) || config.horizon < config.step) {
        throw ConfigError("horizon must be finite and at least one step");
    }
    if (config.n_paths < 1) throw ConfigError("n_paths must be at least 1");
    if (!std::isfinite(config.initial_point)) throw ConfigError("initial_point must be finite");
}

std::size_t step_count(const PathConfig& config) {
    return static_cast<std::size_t>(std::llround(config.horizon / config.step));
}

// Reduced potential V(y) = sin^2(eps*y)/eps^2.
struct ReducedPotential {
    double eps;
    double inv_eps_sq;  // = sqrt(4*C)
    explicit ReducedPotential(double coherence)
        : eps(std::pow(4.0 * coherence, -0.25)), inv_eps_sq(std::sqrt(4.0 * coherence)) {}
    double operator()(double y) const {
        const double s = std::sin(eps * y);
        return inv_eps_sq * s * s;
    }
};

double validated_coherence(double coherence) {
    if (!std::isfinite(coherence) || coherence <= 0.0) {
        throw DomainError("coherence must be finite and positive");
    }
    return coherence;
}

// Sample-time grid indices, snapped to the nearest step.
std::vector<std::size_t> sample_indices(std::span<const double> sample_times,
                                        const PathConfig& config, std::size_t n_steps) {
    if (sample_times.empty()) throw ConfigError("sample_times must not be empty");
    std::vector<std::size_t> indices;
    indices.reserve(sample_times.size());
    double previous = -1.0;
    for (double t : sample_times) {
        if (!std::isfinite(t) || t < 0.0) throw ConfigError("sample times must be non-negative");
        if (t <= previous) throw ConfigError("sample times must be strictly ascending");
        previous = t;
        const auto index = static_cast<std::size_t>(std::llround(t / config.step));
        if (index > n_steps) {
            throw ConfigError("sample time " + std::to_string(t) + " exceeds the horizon");
        }
        if (!indices.empty() && index <= indices.back()) {
            throw ConfigError("sample times collide on the step grid; reduce step or thin times");
        }
        indices.push_back(index);
    }
    return indices;
}

double column_mean_stderr(std::span<const double> sums, std::span<const double> sums_sq,
                          std::size_t n, double& mean) {
    const double total = detail::pairwise_sum(sums);
    const double total_sq = detail::pairwise_sum(sums_sq);
    mean = total / static_cast<double>(n);
    if (n < 2) return 0.0;
    const double variance =
        std::max(0.0, (total_sq - static_cast<double>(n) * mean * mean) /
                          static_cast<double>(n - 1));
    return std::sqrt(variance / static_cast<double>(n));
}

}  // namespace

PathBatch simulate_difference_paths(const PathConfig& config) {
    validate_path_config(config);
    const std::size_t n_steps = step_count(config);
    PathBatch batch;
    batch.step = config.step;
    batch.n_steps = n_steps;
    batch.n_paths = config.n_paths;
    batch.values.resize(config.n_paths * (n_steps + 1));
    const double sd = std::sqrt(config.step);
    for (std::size_t i = 0; i < config.n_paths; ++i) {
        std::mt19937_64 engine(detail::stream_seed(config.seed, i));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double* out = batch.values.data() + i * (n_steps + 1);
        double w = 0.0;
        out[0] = config.initial_point;
        for (std::size_t k = 1; k <= n_steps; ++k) {
            w += sd * gauss(engine);
            out[k] = config.initial_point + w;
        }
    }
    return batch;
}

double fk_weight(std::span<const double> path, double step, double coherence) {
    if (path.size() < 2) throw ConfigError("trajectory needs at least 2 points");
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step must be positive");
    const ReducedPotential potential(validated_coherence(coherence));
    double interior = 0.0;
    for (std::size_t k = 1; k + 1 < path.size(); ++k) interior += potential(path[k]);
    const double integral =
        step * (0.5 * (potential(path.front()) + potential(path.back())) + interior);
    return std::exp(-integral);
}

UCurve estimate_u(const PathConfig& config, double coherence,
                  std::span<const double> sample_times, int threads) {
    validate_path_config(config);
    const ReducedPotential potential(validated_coherence(coherence));
    const std::size_t n_steps = step_count(config);
    const std::vector<std::size_t> indices = sample_indices(sample_times, config, n_steps);
    const std::size_t n_times = indices.size();
    const std::size_t n_paths = config.n_paths;
    const std::size_t n_blocks = (n_paths + block_size - 1) / block_size;

    // Per-block partial sums, indexed by block; filled independently of which
    // worker runs the block, then combined in fixed order.
    const bool want_cov = n_times <= max_cov_times && n_paths >= 2;
    std::vector<double> block_sums(n_blocks * n_times, 0.0);
    std::vector<double> block_sums_sq(n_blocks * n_times, 0.0);
    std::vector<double> block_cross(want_cov ? n_blocks * n_times * n_times : 0, 0.0);

    const double sd = std::sqrt(config.step);
    const double diffusion_scale = std::sqrt(2.0);  // variance 2 per unit reduced time
    const double y0 = config.initial_point;

    const auto run_block = [&](std::size_t block) {
        const std::size_t begin = block * block_size;
        const std::size_t end = std::min(begin + block_size, n_paths);
        const std::size_t count = end - begin;
        std::vector<double> weights(count * n_times);
        for (std::size_t i = begin; i < end; ++i) {
            std::mt19937_64 engine(detail::stream_seed(config.seed, i));
            std::normal_distribution<double> gauss(0.0, 1.0);
            double w = 0.0;
            double integral = 0.0;
            double integral_reflected = 0.0;
            double v_prev = potential(y0);
            double v_prev_reflected = v_prev;
            std::size_t next = 0;
            double* row = weights.data() + (i - begin) * n_times;
            if (indices[next] == 0) {
                row[next] = 1.0;  // empty integral: u(y0, 0) = 1 exactly
                ++next;
            }
            for (std::size_t k = 1; k <= n_steps && next < n_times; ++k) {
                w += sd * gauss(engine);
                const double displacement = diffusion_scale * w;
                const double v = potential(y0 + displacement);
                integral += 0.5 * (v_prev + v) * config.step;
                v_prev = v;
                if (config.antithetic) {
                    const double v_r = potential(y0 - displacement);
                    integral_reflected += 0.5 * (v_prev_reflected + v_r) * config.step;
                    v_prev_reflected = v_r;
                }
                if (k == indices[next]) {
                    row[next] = config.antithetic
                                    ? 0.5 * (std::exp(-integral) + std::exp(-integral_reflected))
                                    : std::exp(-integral);
                    ++next;
                }
            }
        }
        for (std::size_t j = 0; j < n_times; ++j) {
            std::vector<double> column(count);
            std::vector<double> column_sq(count);
            for (std::size_t i = 0; i < count; ++i) {
                column[i] = weights[i * n_times + j];
                column_sq[i] = column[i] * column[i];
            }
            block_sums[block * n_times + j] = detail::pairwise_sum(column);
            block_sums_sq[block * n_times + j] = detail::pairwise_sum(column_sq);
        }
        // Cross products feed only the covariance estimate; plain in-block
        // accumulation in path order keeps them deterministic.
        if (want_cov) {
            double* cross = block_cross.data() + block * n_times * n_times;
            for (std::size_t i = 0; i < count; ++i) {
                const double* row = weights.data() + i * n_times;
                for (std::size_t a = 0; a < n_times; ++a) {
                    for (std::size_t b = a; b < n_times; ++b) {
                        cross[a * n_times + b] += row[a] * row[b];
                    }
                }
            }
        }
    };

    int n_workers = threads;
    if (n_workers <= 0) n_workers = static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    n_workers = std::min<int>(n_workers, static_cast<int>(n_blocks));
    if (n_workers == 1) {
        for (std::size_t block = 0; block < n_blocks; ++block) run_block(block);
    } else {
        std::atomic<std::size_t> next_block{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t block = next_block.fetch_add(1);
                    if (block >= n_blocks) return;
                    run_block(block);
                }
            });
        }
        for (auto& worker : pool) worker.join();
    }

    UCurve curve;
    curve.n_paths = n_paths;
    curve.seed = config.seed;
    curve.times.resize(n_times);
    curve.u_mean.resize(n_times);
    curve.u_stderr.resize(n_times);
    std::vector<double> sums(n_blocks);
    std::vector<double> sums_sq(n_blocks);
    for (std::size_t j = 0; j < n_times; ++j) {
        for (std::size_t block = 0; block < n_blocks; ++block) {
            sums[block] = block_sums[block * n_times + j];
            sums_sq[block] = block_sums_sq[block * n_times + j];
        }
        curve.times[j] = static_cast<double>(indices[j]) * config.step;
        curve.u_stderr[j] = column_mean_stderr(sums, sums_sq, n_paths, curve.u_mean[j]);
    }
    if (want_cov) {
        curve.u_cov.assign(n_times * n_times, 0.0);
        const auto n = static_cast<double>(n_paths);
        for (std::size_t a = 0; a < n_times; ++a) {
            for (std::size_t b = a; b < n_times; ++b) {
                for (std::size_t block = 0; block < n_blocks; ++block) {
                    sums[block] = block_cross[block * n_times * n_times + a * n_times + b];
                }
                const double cross_sum = detail::pairwise_sum(sums);
                // Covariance of the two means: sample covariance / n.
                const double cov =
                    (cross_sum - n * curve.u_mean[a] * curve.u_mean[b]) / ((n - 1.0) * n);
                curve.u_cov[a * n_times + b] = cov;
                curve.u_cov[b * n_times + a] = cov;
            }
        }
    }
    return curve;
}

FKEstimate fit_decay_rate(const UCurve& curve, std::pair<double, double> window) {
    if (!(window.first < window.second)) {
        throw ConfigError("fit window must satisfy lo < hi");
    }
    std::vector<double> t, z, sigma, u_used;
    std::vector<std::size_t> used;
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        const double time = curve.times[j];
        if (time < window.first - 1e-12 || time > window.second + 1e-12) continue;
        const double u = curve.u_mean[j];
        if (!(u > 0.0)) {
            throw FitDomainError("non-positive u inside the fit window; the horizon is too "
                                 "long for this path count");
        }
        t.push_back(time);
        z.push_back(std::log(u));
        sigma.push_back(curve.u_stderr[j] / u);  // delta method for log u
        u_used.push_back(u);
        used.push_back(j);
    }
    if (t.size() < 3) {
        throw FitDomainError("fit window must contain at least 3 sample times");
    }

    double sigma_max = 0.0;
    for (double s : sigma) sigma_max = std::max(sigma_max, s);
    const bool noiseless = sigma_max <= 0.0;

    std::vector<double> weight(t.size(), 1.0);
    if (!noiseless) {
        const double floor = 1e-12 * sigma_max;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double s = std::max(sigma[i], floor);
            weight[i] = 1.0 / (s * s);
        }
    }

    double w_sum = 0.0, tw = 0.0, zw = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        w_sum += weight[i];
        tw += weight[i] * t[i];
        zw += weight[i] * z[i];
    }
    const double t_bar = tw / w_sum;
    const double z_bar = zw / w_sum;
    double s_tt = 0.0, s_tz = 0.0, s_zz = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dt = t[i] - t_bar;
        const double dz = z[i] - z_bar;
        s_tt += weight[i] * dt * dt;
        s_tz += weight[i] * dt * dz;
        s_zz += weight[i] * dz * dz;
    }
    const double slope = s_tz / s_tt;
    if (!(slope < 0.0)) {
        throw FitDomainError("fitted decay rate is non-positive; the window lacks decay signal");
    }

    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double fitted = z_bar + slope * (t[i] - t_bar);
        ss_res += weight[i] * (z[i] - fitted) * (z[i] - fitted);
    }

    // Propagated slope variance. The slope is sum_i a_i z_i with
    // a_i = w_i (t_i - t_bar)/s_tt; use the full curve covariance when
    // available, since u estimates at different horizons share paths.
    double slope_variance = 0.0;
    if (!noiseless) {
        const std::size_t n_curve = curve.times.size();
        const bool have_cov = curve.u_cov.size() == n_curve * n_curve;
        std::vector<double> a(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) a[i] = weight[i] * (t[i] - t_bar) / s_tt;
        if (have_cov) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                for (std::size_t j = 0; j < t.size(); ++j) {
                    const double cov_z = curve.u_cov[used[i] * n_curve + used[j]] /
                                         (u_used[i] * u_used[j]);
                    slope_variance += a[i] * a[j] * cov_z;
                }
            }
            slope_variance = std::max(slope_variance, 0.0);
        } else {
            for (std::size_t i = 0; i < t.size(); ++i) {
                slope_variance += a[i] * a[i] * sigma[i] * sigma[i];
            }
        }
    }

    FKEstimate estimate;
    estimate.lambda_hat = -slope;
    estimate.std_error = std::sqrt(slope_variance);
    estimate.fit_window = {t.front(), t.back()};
    estimate.r_squared = s_zz > 0.0 ? 1.0 - ss_res / s_zz : 1.0;
    return estimate;
}

PurityEstimate segment_purity_mc(const BeamParams& beam, std::size_t segments, double duration,
                                 std::size_t n_samples, std::uint64_t seed) {
    if (segments < 1) throw ConfigError("segments must be at least 1");
    if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw DomainError("duration must be positive and finite");
    }
    const double dt = duration / static_cast<double>(segments);
    const double r_sq = beam.photon_flow() * dt;           // segment mean photon number
    const double phase_sd = std::sqrt(beam.linewidth() * dt);  // per walk, per segment

    std::vector<double> values(n_samples);
    std::vector<double> values_sq(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::mt19937_64 engine(detail::stream_seed(seed, i));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double phase_w = 0.0;
        double phase_v = 0.0;
        double log_product = 0.0;
        for (std::size_t k = 0; k < segments; ++k) {
            phase_w += phase_sd * gauss(engine);
            phase_v += phase_sd * gauss(engine);
            const double half_delta = 0.5 * (phase_w - phase_v);
            const double s = std::sin(half_delta);
            log_product -= 4.0 * r_sq * s * s;  // log |<r e^{i phi_w}|r e^{i phi_v}>|^2
        }
        values[i] = std::exp(log_product);
        values_sq[i] = values[i] * values[i];
    }

    PurityEstimate estimate;
    estimate.n_samples = n_samples;
    estimate.seed = seed;
    estimate.std_error = column_mean_stderr(values, values_sq, n_samples, estimate.mean);
    return estimate;
}

}  // namespace beamlab
