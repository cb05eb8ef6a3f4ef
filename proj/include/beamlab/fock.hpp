#ifndef BEAMLAB_FOCK_HPP
#define BEAMLAB_FOCK_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "beamlab/constants.hpp"

namespace beamlab {

// Coherent amplitude r*e^{i*phi}. The phase is stored wrapped to [0, 2*pi).
struct CoherentAmplitude {
    CoherentAmplitude(double modulus, double phase);
    double modulus;
    double phase;
};

// |<a|b>|^2 = exp(-|alpha - beta|^2)
//           = exp(-(ra^2 + rb^2 - 2 ra rb cos(phia - phib))).
// For equal moduli r this reduces to exp(-4 r^2 sin^2(dphi/2)).
double coherent_overlap_sq(const CoherentAmplitude& a, const CoherentAmplitude& b);

// Number-basis expansion of a coherent state,
// c_n = e^{-r^2/2} (r e^{i phi})^n / sqrt(n!) for n = 0..n_max.
// truncation_deficit is the Poisson tail 1 - sum |c_n|^2 lost beyond n_max;
// treat a deficit above 1e-8 as a sign that n_max is too small.
struct FockVector {
    Eigen::VectorXcd amplitudes;
    double truncation_deficit;
};
FockVector coherent_fock_vector(const CoherentAmplitude& a, std::size_t n_max);

// Poisson-tail-based cutoff ceil(r^2 + 10*sqrt(r^2 + 1)).
std::size_t default_fock_cutoff(double r);

// Hermitian density matrix in the truncated number basis. Construction
// validates hermiticity (1e-12), the trace window [1 - deficit, 1], and
// positive semidefiniteness (smallest eigenvalue >= -1e-10).
class DensityMatrix {
  public:
    DensityMatrix(Eigen::MatrixXcd entries, double truncation_deficit);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    double truncation_deficit() const noexcept { return truncation_deficit_; }
    double trace() const noexcept { return entries_.trace().real(); }
    // Eigenvalues in ascending order (the matrix is Hermitian).
    Eigen::VectorXd eigenvalues() const;

  private:
    Eigen::MatrixXcd entries_;
    double truncation_deficit_;
};

// One beam segment averaged over its diffused phase: integrates
// |r e^{i phi}><r e^{i phi}| against a wrapped-Gaussian phase density of the
// given variance, on an n_grid-point periodic trapezoid rule. phase_variance
// may be +infinity (uniform phase). Throws TruncationError if the n_max
// cutoff leaves a deficit above 1e-6.
DensityMatrix phase_averaged_state(double r, double phase_variance, std::size_t n_grid,
                                   std::size_t n_max);

// Tr[rho^2].
double purity(const DensityMatrix& rho);

// S2 = -k_B log Tr[rho^2].
double renyi2_entropy(const DensityMatrix& rho, const PhysicalConstants& constants);

// E_Delta[exp(-4 r^2 sin^2(Delta/2))] for Gaussian Delta of the given
// variance: the purity of one segment whose two state copies carry
// independently diffused phases with difference variance
// phase_difference_variance. Gauss-Hermite quadrature with adaptive node
// count, relative accuracy 1e-8; variance may be +infinity (uniform limit).
double single_segment_purity_quadrature(double r, double phase_difference_variance);

// Wrapped-Gaussian density on [0, 2*pi), mean zero. Exact uniform limit
// 1/(2*pi) as variance -> infinity; variance must be positive.
double wrapped_gaussian_pdf(double phi, double variance);

}  // namespace beamlab

#endif  // BEAMLAB_FOCK_HPP
