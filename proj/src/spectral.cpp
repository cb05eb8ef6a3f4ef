#include "beamlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

double epsilon_of(double coherence) { return std::pow(4.0 * coherence, -0.25); }

void validate_problem(double coherence, const SpectralConfig& config) {
    if (!std::isfinite(coherence) || coherence <= 0.0) {
        throw DomainError("coherence must be finite and positive");
    }
    if (config.grid_points < 16) {
        throw ConfigError("grid_points must be at least 16");
    }
}

Eigen::MatrixXd build_finite_difference(double coherence, std::size_t m) {
    const double eps = epsilon_of(coherence);
    const double period = std::numbers::pi / eps;
    const double h = period / static_cast<double>(m);
    const double kinetic_diag = 1.0 / (h * h);
    const double kinetic_off = -0.5 / (h * h);
    const double v_scale = 1.0 / (2.0 * eps * eps);

    const Eigen::Index n = static_cast<Eigen::Index>(m);
    Eigen::VectorXd potential(n);
    // sin^2(eps*y) is symmetric about the half period; mirroring makes the
    // sampled potential exactly reflection-symmetric on the grid.
    for (Eigen::Index j = 0; j <= n / 2; ++j) {
        const double s = std::sin(eps * h * static_cast<double>(j));
        potential(j) = v_scale * s * s;
    }
    for (Eigen::Index j = n / 2 + 1; j < n; ++j) potential(j) = potential(n - j);

    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        op(j, j) = kinetic_diag + potential(j);
        const Eigen::Index next = (j + 1) % n;
        op(j, next) = kinetic_off;
        op(next, j) = kinetic_off;
    }
    return op;
}

// Basis phi_0 = 1/sqrt(L), phi_n = sqrt(2/L) cos(2 eps n y). The potential
// sin^2(eps y)/(2 eps^2) = 1/(4 eps^2) (1 - cos(2 eps y)) couples adjacent
// modes only, so the matrix is tridiagonal in this basis.
Eigen::MatrixXd build_fourier_cosine(double coherence, std::size_t m) {
    const double eps = epsilon_of(coherence);
    const double v0 = 1.0 / (4.0 * eps * eps);
    const Eigen::Index n = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double wave = 2.0 * eps * static_cast<double>(k);
        op(k, k) = 0.5 * wave * wave + v0;
    }
    op(0, 1) = op(1, 0) = -v0 / std::sqrt(2.0);
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        op(k, k + 1) = op(k + 1, k) = -0.5 * v0;
    }
    return op;
}

Eigen::VectorXd cosine_coefficients_to_grid(const Eigen::VectorXd& coefficients, double eps,
                                            std::size_t m) {
    const double period = std::numbers::pi / eps;
    const double h = period / static_cast<double>(m);
    const Eigen::Index n = coefficients.size();
    Eigen::VectorXd values(static_cast<Eigen::Index>(m));
    const double norm0 = 1.0 / std::sqrt(period);
    const double normk = std::sqrt(2.0 / period);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
        const double y = h * static_cast<double>(j);
        double acc = coefficients(0) * norm0;
        for (Eigen::Index k = 1; k < n; ++k) {
            acc += coefficients(k) * normk * std::cos(2.0 * eps * static_cast<double>(k) * y);
        }
        values(j) = acc;
    }
    return values;
}

void fix_sign_and_normalise(Eigen::VectorXd& v) {
    Eigen::Index max_index = 0;
    v.cwiseAbs().maxCoeff(&max_index);
    if (v(max_index) < 0.0) v = -v;
    v.normalize();
}

}  // namespace

Eigen::MatrixXd build_operator(double coherence, const SpectralConfig& config) {
    validate_problem(coherence, config);
    return config.discretization == Discretization::finite_difference
               ? build_finite_difference(coherence, config.grid_points)
               : build_fourier_cosine(coherence, config.grid_points);
}

GroundSolution ground_eigenvalue(const Eigen::MatrixXd& op) {
    if (op.rows() != op.cols() || op.rows() < 2) {
        throw ConfigError("operator matrix must be square with dimension >= 2");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver failed to converge (n=" +
                             std::to_string(op.rows()) + ")");
    }
    GroundSolution solution;
    solution.operator_eigenvalue = solver.eigenvalues()(0);
    solution.reduced_eigenvalue = 2.0 * solution.operator_eigenvalue;
    solution.eigenfunction = solver.eigenvectors().col(0);
    fix_sign_and_normalise(solution.eigenfunction);
    solution.grid_points = static_cast<std::size_t>(op.rows());

    const double op_scale = std::max(op.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    const double residual =
        (op * solution.eigenfunction - solution.operator_eigenvalue * solution.eigenfunction)
            .norm();
    solution.residual_norm = residual / op_scale;
    return solution;
}

GroundSolution reduced_ground_eigenvalue(double coherence, const SpectralConfig& config) {
    GroundSolution solution = ground_eigenvalue(build_operator(coherence, config));
    if (config.discretization == Discretization::fourier_cosine) {
        solution.eigenfunction = cosine_coefficients_to_grid(
            solution.eigenfunction, epsilon_of(coherence), config.grid_points);
        fix_sign_and_normalise(solution.eigenfunction);
    }
    if (solution.residual_norm > 1e-10) {
        throw NumericalError("ground eigenpair residual " +
                             std::to_string(solution.residual_norm) + " exceeds 1e-10");
    }
    // Nodeless ground state: entries may underflow to zero in the far tail,
    // but none may be meaningfully negative.
    if (solution.eigenfunction.minCoeff() < -1e-12) {
        throw NumericalError("ground eigenfunction has negative entries beyond tolerance");
    }
    return solution;
}

double richardson_reduced_eigenvalue(double coherence, const SpectralConfig& config) {
    if (config.discretization != Discretization::finite_difference) {
        throw ConfigError("Richardson extrapolation applies to the finite-difference grid");
    }
    if (config.grid_points < 32 || config.grid_points % 2 != 0) {
        throw ConfigError("Richardson extrapolation needs an even grid of at least 32 points");
    }
    SpectralConfig coarse = config;
    coarse.grid_points = config.grid_points / 2;
    const double lambda_coarse = reduced_ground_eigenvalue(coherence, coarse).reduced_eigenvalue;
    const double lambda_fine = reduced_ground_eigenvalue(coherence, config).reduced_eigenvalue;
    return lambda_fine + (lambda_fine - lambda_coarse) / 3.0;
}

double entropy_flow_spectral(const BeamParams& beam, const SpectralConfig& config,
                             const PhysicalConstants& constants) {
    const ReducedProblem reduced = reduce(beam);  // rejects zero flow/linewidth
    const GroundSolution solution = reduced_ground_eigenvalue(reduced.coherence, config);
    return constants.boltzmann * reduced.rate_scale * solution.reduced_eigenvalue;
}

}  // namespace beamlab
