#ifndef BEAMLAB_TESTS_ORACLES_HPP
#define BEAMLAB_TESTS_ORACLES_HPP

// Test-only oracles, kept independent of the implementation paths they
// check: a Mathieu characteristic-value route to the reduced decay rate, a
// Bessel-series route to the single-segment purity, Poisson sums, and a
// tensor-product Gauss-Hermite route to few-segment purities.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Lowest characteristic value a0(q) of the even pi-periodic Mathieu problem,
// from the standard cosine-mode recurrence written as a symmetric
// tridiagonal matrix: diag (2k)^2, off-diagonal sqrt(2)q then q.
inline double mathieu_a0(double q, int size = 0) {
    if (size <= 0) size = std::max(64, static_cast<int>(std::ceil(4.0 * std::sqrt(q))));
    Eigen::VectorXd diag(size), sub(size - 1);
    for (int k = 0; k < size; ++k) diag(k) = 4.0 * static_cast<double>(k) * k;
    sub(0) = std::sqrt(2.0) * q;
    for (int k = 1; k + 1 < size; ++k) sub(k) = q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

// Reduced decay rate through the Mathieu map
//   lambda0 = 2*Ndot + (l/4)*a0(C)  =>  lambda_tilde = 2*e0,
//   e0 = a0(C)/(4*sqrt(C)) + sqrt(C)/2.
inline double lambda_tilde_mathieu(double coherence) {
    const double a0 = mathieu_a0(coherence);
    const double root = std::sqrt(coherence);
    return 2.0 * (a0 / (4.0 * root) + 0.5 * root);
}

// Large-q expansion a0(q) ~ -2q + 2 sqrt(q) - 1/4 - 1/(32 sqrt(q)) - 3/(256 q),
// mapped to lambda_tilde ~ 1 - 1/(8 sqrt(C)) - 1/(64 C) - 3/(512 C^{3/2}).
inline double lambda_tilde_expansion(double coherence) {
    const double root = std::sqrt(coherence);
    return 1.0 - 1.0 / (8.0 * root) - 1.0 / (64.0 * coherence) -
           3.0 / (512.0 * coherence * root);
}

// E[exp(-4 r^2 sin^2(D/2))], D ~ N(0, v), via the modified-Bessel expansion
//   e^{-2r^2} [I0(2r^2) + 2 sum_k Ik(2r^2) e^{-k^2 v/2}].
inline double purity_bessel_series(double r, double difference_variance) {
    const double z = 2.0 * r * r;
    double acc = std::cyl_bessel_i(0.0, z);
    for (int k = 1; k <= 200; ++k) {
        const double term =
            2.0 * std::cyl_bessel_i(static_cast<double>(k), z) *
            std::exp(-0.5 * static_cast<double>(k) * k * difference_variance);
        acc += term;
        if (term < 1e-18 * acc) break;
    }
    return std::exp(-z) * acc;
}

// Uniform-phase purity sum_n P(n)^2 with P Poisson of mean r^2.
inline double purity_poisson_sum(double r) {
    const double mean = r * r;
    double p = std::exp(-mean);
    double acc = p * p;
    for (int n = 0; n < 2000; ++n) {
        p *= mean / static_cast<double>(n + 1);
        acc += p * p;
        if (p < 1e-200) break;
    }
    return acc;
}

// Exact K-segment purity by tensor-product Gauss-Hermite over the K
// difference-walk increments (end-of-segment sampling, per-segment
// difference-increment variance v_step):
//   E[ prod_k exp(-4 r^2 sin^2(S_k/2)) ],  S_k = x_1 + ... + x_k.
// Practical for K <= 3.
inline double purity_tensor_quadrature(double r, double v_step, int segments, int nodes = 80) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(nodes);
    Eigen::VectorXd sub(nodes - 1);
    for (int i = 0; i + 1 < nodes; ++i) sub(i) = std::sqrt(0.5 * (i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub);
    std::vector<double> x(nodes), w(nodes);
    for (int i = 0; i < nodes; ++i) {
        x[i] = solver.eigenvalues()(i) * std::sqrt(2.0 * v_step);
        const double v0 = solver.eigenvectors()(0, i);
        w[i] = v0 * v0;  // Gauss-Hermite weight over sqrt(pi): normalised Gaussian weight
    }
    const double four_r_sq = 4.0 * r * r;
    double total = 0.0;
    std::vector<int> index(segments, 0);
    for (;;) {
        double sum = 0.0, weight = 1.0, product = 1.0;
        for (int k = 0; k < segments; ++k) {
            sum += x[index[k]];
            weight *= w[index[k]];
            const double s = std::sin(0.5 * sum);
            product *= std::exp(-four_r_sq * s * s);
        }
        total += weight * product;
        int k = 0;
        while (k < segments && ++index[k] == nodes) index[k++] = 0;
        if (k == segments) break;
    }
    return total;
}

// zeta(2) by series plus Euler-Maclaurin tail, accurate to ~1e-13.
inline double zeta2_series(int terms = 200) {
    double acc = 0.0;
    for (int k = 1; k <= terms; ++k) acc += 1.0 / (static_cast<double>(k) * k);
    const double n = terms;
    acc += 1.0 / n - 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n) -
           1.0 / (30.0 * n * n * n * n * n);
    return acc;
}

}  // namespace oracles

#endif  // BEAMLAB_TESTS_ORACLES_HPP
