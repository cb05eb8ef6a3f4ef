#include "beamlab/thermal.hpp"

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/quadrature.hpp"

namespace beamlab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double cutoff = 50.0;  // e^-50 ~ 2e-22; tails added analytically

void require_positive(double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

double compute_power_constant() {
    const auto integrand = [](double u) {
        if (u < 1e-12) return 1.0 - 0.5 * u;  // u/(e^u - 1) -> 1
        return u / std::expm1(u);
    };
    const double body = detail::adaptive_simpson(integrand, 0.0, cutoff, 1e-13);
    const double tail = (cutoff + 1.0) * std::exp(-cutoff);  // integral u e^-u beyond cutoff
    return (body + tail) / (2.0 * pi);
}

double compute_entropy_constant() {
    // log(coth(u/2)) diverges logarithmically at u = 0. Split it as
    // log(2/u) + log((u/2)coth(u/2)): the first piece integrates in closed
    // form and the second is analytic at u = 0.
    const double a = 1.0;
    const double singular_part = a * (std::log(2.0 / a) + 1.0);
    const auto near = [](double u) {
        if (u < 1e-6) return u * u / 12.0;  // log((u/2)coth(u/2)) ~ u^2/12
        return std::log(0.5 * u / std::tanh(0.5 * u));
    };
    const auto far = [](double u) {
        const double e = std::exp(-u);
        return std::log1p(e) - std::log1p(-e);
    };
    const double body = detail::adaptive_simpson(near, 0.0, a, 1e-14) +
                        detail::adaptive_simpson(far, a, cutoff, 1e-13);
    const double tail = 2.0 * std::exp(-cutoff);  // log(coth(u/2)) ~ 2 e^-u beyond cutoff
    return (singular_part + body + tail) / (2.0 * pi);
}

}  // namespace

double unidirectional_power_constant() {
    static const double value = compute_power_constant();
    return value;
}

double unidirectional_entropy_constant() {
    static const double value = compute_entropy_constant();
    return value;
}

double mean_occupation(double omega, double theta, const PhysicalConstants& constants) {
    require_positive(omega, "omega");
    require_positive(theta, "theta");
    const double x = constants.hbar * omega / (constants.boltzmann * theta);
    return 1.0 / std::expm1(x);  // expm1 overflows to +inf, giving a clean 0
}

double thermal_power(double theta, const PhysicalConstants& constants) {
    require_positive(theta, "theta");
    const double kt = constants.boltzmann * theta;
    return (pi / 12.0) * kt * kt / constants.hbar;
}

double thermal_power_quadrature(double theta, const PhysicalConstants& constants) {
    require_positive(theta, "theta");
    const double kt = constants.boltzmann * theta;
    return unidirectional_power_constant() * kt * kt / constants.hbar;
}

double thermal_entropy_flow_renyi2(double theta, const PhysicalConstants& constants) {
    require_positive(theta, "theta");
    return constants.boltzmann * (pi / 8.0) * constants.boltzmann * theta / constants.hbar;
}

double thermal_entropy_flow_renyi2_quadrature(double theta, const PhysicalConstants& constants) {
    require_positive(theta, "theta");
    return constants.boltzmann * unidirectional_entropy_constant() * constants.boltzmann * theta /
           constants.hbar;
}

double thermal_entropy_flow_vn(double theta, const PhysicalConstants& constants) {
    return (4.0 / 3.0) * thermal_entropy_flow_renyi2(theta, constants);
}

ThermalBeam make_thermal_beam(double theta, const PhysicalConstants& constants) {
    ThermalBeam beam;
    beam.temperature = theta;
    beam.power = thermal_power(theta, constants);
    beam.renyi2_flow = thermal_entropy_flow_renyi2(theta, constants);
    beam.vn_flow = (4.0 / 3.0) * beam.renyi2_flow;
    return beam;
}

LaserThermalComparison compare_laser_thermal(double power, double q_factor,
                                             const PhysicalConstants& constants) {
    require_positive(power, "power");
    if (!std::isfinite(q_factor) || q_factor <= 1.0) {
        throw DomainError("q_factor must be finite and greater than 1");
    }
    const double rate_root = std::sqrt(power / constants.hbar);
    LaserThermalComparison comparison;
    comparison.laser_flow = constants.boltzmann * rate_root / std::sqrt(q_factor);
    comparison.thermal_flow = constants.boltzmann * rate_root * std::sqrt(3.0 * pi / 16.0);
    comparison.ratio = comparison.laser_flow / comparison.thermal_flow;
    comparison.equivalent_temperature =
        std::sqrt(12.0 * constants.hbar * power / pi) / constants.boltzmann;
    return comparison;
}

}  // namespace beamlab
