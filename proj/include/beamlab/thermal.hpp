#ifndef BEAMLAB_THERMAL_HPP
#define BEAMLAB_THERMAL_HPP

#include "beamlab/constants.hpp"

namespace beamlab {

// Unidirectional polarised one-dimensional thermal beam at temperature theta.
struct ThermalBeam {
    double temperature;  // [K]
    double power;        // (pi/12) (k_B theta)^2 / hbar [W]
    double renyi2_flow;  // (pi/8) k_B^2 theta / hbar [W/K]
    double vn_flow;      // (4/3) * renyi2_flow [W/K]
};

ThermalBeam make_thermal_beam(double theta, const PhysicalConstants& constants);

// Bose-Einstein occupation 1/(e^{hbar*omega/k_B*theta} - 1); evaluated
// through expm1 so large hbar*omega/(k_B*theta) underflows to 0 cleanly.
double mean_occupation(double omega, double theta, const PhysicalConstants& constants);

// Closed forms and their quadrature counterparts. The quadrature routes
// integrate the mode sums directly and must agree with the closed forms to
// relative 1e-6; both reduce to the dimensionless constants pi/12 and pi/8.
double thermal_power(double theta, const PhysicalConstants& constants);
double thermal_power_quadrature(double theta, const PhysicalConstants& constants);
double thermal_entropy_flow_renyi2(double theta, const PhysicalConstants& constants);
double thermal_entropy_flow_renyi2_quadrature(double theta, const PhysicalConstants& constants);
double thermal_entropy_flow_vn(double theta, const PhysicalConstants& constants);

// The dimensionless integrals behind the closed forms, computed by adaptive
// quadrature once and cached:
//   (1/2pi) * integral_0^inf u/(e^u - 1) du            = pi/12
//   (1/2pi) * integral_0^inf log(coth(u/2)) du         = pi/8
double unidirectional_power_constant();
double unidirectional_entropy_constant();

// Equal-power comparison between a laser beam of the given Q = omega0/l and
// a thermal beam: entropy flows, their ratio sqrt(16/(3*pi*Q)), and the
// temperature a thermal beam needs to carry the same power.
struct LaserThermalComparison {
    double laser_flow;              // k_B sqrt(P/hbar) / sqrt(Q) [W/K]
    double thermal_flow;            // k_B sqrt(P/hbar) sqrt(3*pi/16) [W/K]
    double ratio;                   // laser_flow / thermal_flow
    double equivalent_temperature;  // theta with P^theta = P [K]
};

LaserThermalComparison compare_laser_thermal(double power, double q_factor,
                                             const PhysicalConstants& constants);

}  // namespace beamlab

#endif  // BEAMLAB_THERMAL_HPP
