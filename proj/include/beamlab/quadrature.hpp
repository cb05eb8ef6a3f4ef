#ifndef BEAMLAB_QUADRATURE_HPP
#define BEAMLAB_QUADRATURE_HPP

#include <functional>

#include <Eigen/Dense>

namespace beamlab::detail {

// Adaptive Simpson integration of f over [a, b] to the given absolute
// tolerance. Throws NumericalError if the recursion depth limit is reached
// without convergence.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 60);

// Gauss-Hermite rule for weight exp(-x^2): integral f(x) exp(-x^2) dx
// ~= sum w_i f(x_i). Nodes/weights from the Golub-Welsch tridiagonal.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
GaussHermiteRule gauss_hermite(int n);

// E[f(X)] for X ~ N(0, variance), by Gauss-Hermite with node-count doubling
// until successive values agree to rel_tol (relative to the magnitude of the
// running value, with a small absolute floor).
double gaussian_expectation(const std::function<double(double)>& f, double variance,
                            double rel_tol, int max_nodes = 4096);

// Integral over one period [0, 2*pi) of a smooth periodic f, by trapezoid
// doubling; spectrally accurate for smooth integrands.
double periodic_integral(const std::function<double(double)>& f, double rel_tol,
                         int max_points = 1 << 16);

}  // namespace beamlab::detail

#endif  // BEAMLAB_QUADRATURE_HPP
