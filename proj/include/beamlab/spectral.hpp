#ifndef BEAMLAB_SPECTRAL_HPP
#define BEAMLAB_SPECTRAL_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "beamlab/beam.hpp"
#include "beamlab/constants.hpp"

namespace beamlab {

// Discretisation of the reduced decay operator
//     H = -1/2 d^2/dy^2 + sin^2(eps*y)/(2*eps^2),   eps = (4*C)^(-1/4),
// on one potential period [0, pi/eps) with periodic boundary conditions.
// The periodic potential acts on the whole line, but the bottom of the
// spectrum is the lowest Bloch-phase-0 eigenvalue, so one period suffices.
enum class Discretization {
    finite_difference,  // second-order central differences on the y-grid
    fourier_cosine,     // cosine modes cos(2*eps*n*y); spectrally accurate
};

struct SpectralConfig {
    std::size_t grid_points = 2048;  // M: grid points (FD) or basis size (cosine)
    Discretization discretization = Discretization::finite_difference;
};

// Dense symmetric M x M matrix of H in the chosen basis.
Eigen::MatrixXd build_operator(double coherence, const SpectralConfig& config);

// Ground eigenpair. operator_eigenvalue is the smallest eigenvalue e0 of the
// assembled matrix; reduced_eigenvalue applies the 2*sqrt(Ndot*l) operator
// prefactor, giving the reduced decay rate
//     lambda_tilde = 2*e0 = lambda0/sqrt(Ndot*l)   (-> 1 at high coherence).
struct GroundSolution {
    double operator_eigenvalue;
    double reduced_eigenvalue;
    Eigen::VectorXd eigenfunction;  // samples on the y-grid, 2-norm 1, sign-fixed
    std::size_t grid_points;
    double residual_norm;  // ||A v - e0 v|| / (||A||_inf ||v||)
};

// Smallest eigenpair of a dense symmetric matrix, sign-normalised so the
// largest-magnitude component is positive. The reduced_eigenvalue field
// carries 2x the matrix eigenvalue per the convention above.
GroundSolution ground_eigenvalue(const Eigen::MatrixXd& op);

// build_operator + ground_eigenvalue, with the eigenfunction returned as
// grid samples for either discretisation, validated positive (ground states
// are nodeless) and within the residual budget 1e-10.
GroundSolution reduced_ground_eigenvalue(double coherence, const SpectralConfig& config);

// Two-grid Richardson extrapolation of the second-order FD eigenvalue:
// solves at M/2 and M and removes the leading h^2 error term.
double richardson_reduced_eigenvalue(double coherence, const SpectralConfig& config);

// Finite-coherence entropy flow k_B * sqrt(Ndot*l) * lambda_tilde(C) [W/K].
// Approaches the asymptotic flow from below as C grows.
double entropy_flow_spectral(const BeamParams& beam, const SpectralConfig& config,
                             const PhysicalConstants& constants);

}  // namespace beamlab

#endif  // BEAMLAB_SPECTRAL_HPP
