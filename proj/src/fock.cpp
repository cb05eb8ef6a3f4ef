#include "beamlab/fock.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "beamlab/errors.hpp"
#include "beamlab/quadrature.hpp"
#include "beamlab/util.hpp"

namespace beamlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Poisson tail mass beyond n_max for mean r^2, via the stable recurrence.
double poisson_tail(double r, std::size_t n_max) {
    const double mean = r * r;
    double p = std::exp(-mean);
    double cumulative = p;
    for (std::size_t n = 0; n < n_max; ++n) {
        p *= mean / static_cast<double>(n + 1);
        cumulative += p;
    }
    return std::max(0.0, 1.0 - cumulative);
}

}  // namespace

CoherentAmplitude::CoherentAmplitude(double modulus_in, double phase_in)
    : modulus(modulus_in), phase(detail::wrap_phase(phase_in)) {
    if (!std::isfinite(modulus_in) || modulus_in < 0.0) {
        throw DomainError("coherent amplitude modulus must be finite and non-negative");
    }
    if (!std::isfinite(phase_in)) {
        throw DomainError("coherent amplitude phase must be finite");
    }
}

double coherent_overlap_sq(const CoherentAmplitude& a, const CoherentAmplitude& b) {
    const double distance_sq = a.modulus * a.modulus + b.modulus * b.modulus -
                               2.0 * a.modulus * b.modulus * std::cos(a.phase - b.phase);
    return std::exp(-distance_sq);
}

FockVector coherent_fock_vector(const CoherentAmplitude& a, std::size_t n_max) {
    FockVector result;
    result.amplitudes.resize(static_cast<Eigen::Index>(n_max) + 1);
    const std::complex<double> alpha = std::polar(a.modulus, a.phase);
    std::complex<double> c = std::exp(-0.5 * a.modulus * a.modulus);
    result.amplitudes(0) = c;
    for (std::size_t n = 0; n < n_max; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
        result.amplitudes(static_cast<Eigen::Index>(n + 1)) = c;
    }
    result.truncation_deficit = poisson_tail(a.modulus, n_max);
    return result;
}

std::size_t default_fock_cutoff(double r) {
    const double mean = r * r;
    return static_cast<std::size_t>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0)));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double truncation_deficit)
    : entries_(std::move(entries)), truncation_deficit_(truncation_deficit) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw ConfigError("density matrix must be square and non-empty");
    }
    const double hermiticity = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (hermiticity > 1e-12) {
        throw NumericalError("density matrix not Hermitian: max deviation " +
                             std::to_string(hermiticity));
    }
    const double tr = trace();
    if (tr > 1.0 + 1e-10 || tr < 1.0 - truncation_deficit_ - 1e-10) {
        throw NumericalError("density matrix trace " + std::to_string(tr) +
                             " outside [1 - deficit, 1]");
    }
    if (eigenvalues()(0) < -1e-10) {
        throw NumericalError("density matrix has eigenvalue below -1e-10");
    }
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("density matrix eigensolve failed");
    }
    return es.eigenvalues();
}

double wrapped_gaussian_pdf(double phi, double variance) {
    if (!(variance > 0.0)) {
        throw DomainError("wrapped_gaussian_pdf: variance must be positive");
    }
    if (std::isinf(variance)) return 1.0 / two_pi;
    if (variance < 1.0) {
        // Image sum: fastest when the Gaussian is narrow on the circle.
        const double sigma = std::sqrt(variance);
        const int n_images = 2 + static_cast<int>(std::ceil(9.5 * sigma / two_pi));
        const double norm = 1.0 / (sigma * std::sqrt(two_pi));
        double density = 0.0;
        for (int j = -n_images; j <= n_images; ++j) {
            const double x = phi - two_pi * j;
            density += norm * std::exp(-0.5 * x * x / variance);
        }
        return density;
    }
    // Fourier sum: coefficients e^{-k^2 v/2} die fast for wide Gaussians.
    double density = 1.0;
    for (int k = 1;; ++k) {
        const double coefficient = std::exp(-0.5 * k * k * variance);
        if (coefficient < 1e-18) break;
        density += 2.0 * coefficient * std::cos(k * phi);
    }
    return density / two_pi;
}

DensityMatrix phase_averaged_state(double r, double phase_variance, std::size_t n_grid,
                                   std::size_t n_max) {
    if (!std::isfinite(r) || r < 0.0) throw DomainError("r must be finite and non-negative");
    if (std::isnan(phase_variance) || phase_variance < 0.0) {
        throw DomainError("phase_variance must be non-negative");
    }
    if (n_grid < 32) throw ConfigError("n_grid must be at least 32");

    const double deficit = poisson_tail(r, n_max);
    if (deficit > 1e-6) {
        throw TruncationError("n_max=" + std::to_string(n_max) + " leaves deficit " +
                              std::to_string(deficit) + " > 1e-6 for r=" + std::to_string(r));
    }

    const Eigen::Index dim = static_cast<Eigen::Index>(n_max) + 1;

    if (phase_variance == 0.0) {
        const FockVector pure = coherent_fock_vector(CoherentAmplitude(r, 0.0), n_max);
        Eigen::MatrixXcd rho = pure.amplitudes * pure.amplitudes.adjoint();
        return DensityMatrix(std::move(rho), deficit);
    }

    // rho_{mn} = A_m A_n chi_{m-n} with A_n the real coherent amplitudes at
    // phi = 0 and chi_k the quadrature of the phase density against cos(k phi)
    // (the density is even, so the sine part vanishes identically).
    const Eigen::VectorXcd base = coherent_fock_vector(CoherentAmplitude(r, 0.0), n_max).amplitudes;
    Eigen::VectorXd character(dim);
    const double h = two_pi / static_cast<double>(n_grid);
    for (Eigen::Index k = 0; k < dim; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_grid; ++j) {
            const double phi = h * static_cast<double>(j);
            acc += wrapped_gaussian_pdf(phi, phase_variance) * std::cos(k * phi);
        }
        character(k) = acc * h;
    }
    Eigen::MatrixXcd rho(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            rho(m, n) = base(m).real() * base(n).real() * character(std::abs(m - n));
        }
    }
    return DensityMatrix(std::move(rho), deficit);
}

double purity(const DensityMatrix& rho) { return rho.entries().squaredNorm(); }

double renyi2_entropy(const DensityMatrix& rho, const PhysicalConstants& constants) {
    return -constants.boltzmann * std::log(purity(rho));
}

double single_segment_purity_quadrature(double r, double phase_difference_variance) {
    if (!std::isfinite(r) || r < 0.0) throw DomainError("r must be finite and non-negative");
    if (std::isnan(phase_difference_variance) || phase_difference_variance < 0.0) {
        throw DomainError("phase_difference_variance must be non-negative");
    }
    if (r == 0.0 || phase_difference_variance == 0.0) return 1.0;

    const double four_r_sq = 4.0 * r * r;
    const auto overlap = [four_r_sq](double delta) {
        const double s = std::sin(0.5 * delta);
        return std::exp(-four_r_sq * s * s);
    };
    if (std::isinf(phase_difference_variance)) {
        // Uniform phase difference: integrate over one period.
        return detail::periodic_integral(overlap, 1e-10) / two_pi;
    }
    if (phase_difference_variance > 16.0) {
        // The Gaussian covers several periods and Gauss-Hermite convergence
        // degrades; fold the density onto the circle, where the periodic
        // trapezoid rule is spectrally accurate.
        const double v = phase_difference_variance;
        const auto folded = [&](double delta) {
            return wrapped_gaussian_pdf(delta, v) * overlap(delta);
        };
        return detail::periodic_integral(folded, 1e-10);
    }
    return detail::gaussian_expectation(overlap, phase_difference_variance, 1e-9);
}

}  // namespace beamlab
