#include "beamlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamlab/errors.hpp"

namespace beamlab::detail {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double m, double b,
                       double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        throw NumericalError("adaptive_simpson: depth limit reached at x ~ " + std::to_string(m));
    }
    return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw ConfigError("gauss_hermite: node count must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    for (int i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(0.5 * (i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag.head(n), sub.head(n > 1 ? n - 1 : 0));
    if (es.info() != Eigen::Success) {
        throw NumericalError("gauss_hermite: tridiagonal eigensolver failed");
    }
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.weights(i) = sqrt_pi * v0 * v0;
    }
    return rule;
}

double gaussian_expectation(const std::function<double(double)>& f, double variance,
                            double rel_tol, int max_nodes) {
    if (variance == 0.0) return f(0.0);
    const double scale = std::sqrt(2.0 * variance);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    double previous = 0.0;
    bool have_previous = false;
    for (int n = 32; n <= max_nodes; n *= 2) {
        const GaussHermiteRule rule = gauss_hermite(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += rule.weights(i) * f(scale * rule.nodes(i));
        }
        const double value = inv_sqrt_pi * acc;
        if (have_previous &&
            std::abs(value - previous) <= rel_tol * std::max(std::abs(value), 1e-300)) {
            return value;
        }
        previous = value;
        have_previous = true;
    }
    throw NumericalError("gaussian_expectation: no convergence at " +
                         std::to_string(max_nodes) + " Gauss-Hermite nodes");
}

double periodic_integral(const std::function<double(double)>& f, double rel_tol,
                         int max_points) {
    const double two_pi = 2.0 * std::numbers::pi;
    double previous = 0.0;
    bool have_previous = false;
    for (int n = 64; n <= max_points; n *= 2) {
        const double h = two_pi / n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += f(j * h);
        const double value = acc * h;
        if (have_previous &&
            std::abs(value - previous) <= rel_tol * std::max(std::abs(value), 1e-300)) {
            return value;
        }
        previous = value;
        have_previous = true;
    }
    throw NumericalError("periodic_integral: no convergence");
}

}  // namespace beamlab::detail
