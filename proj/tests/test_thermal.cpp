#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/thermal.hpp"
#include "oracles.hpp"
#include "testing.hpp"

using namespace beamlab;

namespace {
const PhysicalConstants kSi = PhysicalConstants::si();
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("mean occupation") {
    // hbar*omega = k_B*theta*log(2) gives nbar = 1 exactly.
    const double theta = 300.0;
    const double omega = std::log(2.0) * kSi.boltzmann * theta / kSi.hbar;
    CHECK(mean_occupation(omega, theta, kSi) == rel(1.0, 1e-13));

    // x = 20, high-precision frozen value 1/(e^20 - 1).
    const double omega20 = 20.0 * kSi.boltzmann * theta / kSi.hbar;
    const double n20 = mean_occupation(omega20, theta, kSi);
    CHECK(n20 == rel(2.06115362668691e-9, 1e-12));
    // Second algebraic route.
    CHECK(n20 == rel(std::exp(-20.0) / (1.0 - std::exp(-20.0)), 1e-13));

    // Large frequencies underflow cleanly to zero.
    CHECK(mean_occupation(1e25, 1.0, kSi) == 0.0);
    CHECK(std::isfinite(mean_occupation(1e300, 300.0, kSi)));

    CHECK_THROWS_AS(mean_occupation(-1.0, 300.0, kSi), DomainError);
    CHECK_THROWS_AS(mean_occupation(1e15, 0.0, kSi), DomainError);
}

TEST_CASE("thermal power closed form and quadrature") {
    CHECK(thermal_power(300.0, kSi) == rel(4.2589e-8, 1e-4));
    for (double theta : {1.0, 300.0, 1e4}) {
        CHECK(thermal_power_quadrature(theta, kSi) == rel(thermal_power(theta, kSi), 1e-6));
    }
    // theta^2 scaling is exact for an exact doubling.
    CHECK(thermal_power(600.0, kSi) / thermal_power(300.0, kSi) == 4.0);
    CHECK_THROWS_AS(thermal_power(0.0, kSi), DomainError);
    CHECK_THROWS_AS(thermal_power(-5.0, kSi), DomainError);
}

TEST_CASE("thermal entropy flows") {
    CHECK(thermal_entropy_flow_renyi2(300.0, kSi) == rel(2.1295e-10, 1e-4));
    for (double theta : {1.0, 300.0, 1e4}) {
        CHECK(thermal_entropy_flow_renyi2_quadrature(theta, kSi) ==
              rel(thermal_entropy_flow_renyi2(theta, kSi), 1e-6));
    }
    // Renyi-2 is 3/4 of von Neumann.
    CHECK(thermal_entropy_flow_vn(300.0, kSi) / thermal_entropy_flow_renyi2(300.0, kSi) ==
          rel(4.0 / 3.0, 1e-15));

    // Power-form identity S2 = k_B sqrt(P/hbar) sqrt(3 pi/16).
    for (double theta : {2.0, 300.0, 5e3}) {
        const double direct = thermal_entropy_flow_renyi2(theta, kSi);
        const double via_power = kSi.boltzmann *
                                 std::sqrt(thermal_power(theta, kSi) / kSi.hbar) *
                                 std::sqrt(3.0 * kPi / 16.0);
        CHECK(via_power == rel(direct, 1e-12));
    }
}

TEST_CASE("dimensionless constants against series identities") {
    // The quadrature constants must be pi/12 and pi/8...
    CHECK(unidirectional_power_constant() == rel(kPi / 12.0, 1e-10));
    CHECK(unidirectional_entropy_constant() == rel(kPi / 8.0, 1e-10));
    // ...and those closed forms themselves follow from zeta(2)-type sums:
    // integral u/(e^u-1) = zeta(2), integral log coth(u/2) = (3/2) zeta(2).
    const double zeta2 = oracles::zeta2_series();
    CHECK(zeta2 == rel(kPi * kPi / 6.0, 1e-12));
    CHECK(unidirectional_power_constant() == rel(zeta2 / (2.0 * kPi), 1e-9));
    CHECK(unidirectional_entropy_constant() == rel(1.5 * zeta2 / (2.0 * kPi), 1e-9));
    // pi/8 = (3/4)(pi/6).
    CHECK(kPi / 8.0 == rel(0.75 * (kPi / 6.0), 1e-15));
}

TEST_CASE("thermal beam record") {
    const auto beam = make_thermal_beam(300.0, kSi);
    CHECK(beam.temperature == 300.0);
    CHECK(beam.power == thermal_power(300.0, kSi));
    CHECK(beam.renyi2_flow == thermal_entropy_flow_renyi2(300.0, kSi));
    CHECK(beam.vn_flow == rel((4.0 / 3.0) * beam.renyi2_flow, 1e-15));
}

TEST_CASE("laser versus thermal comparison") {
    const auto cmp = compare_laser_thermal(0.5, 1e10, kSi);
    CHECK(cmp.laser_flow == rel(9.5067e-12, 1e-4));
    CHECK(cmp.ratio == rel(std::sqrt(16.0 / (3.0 * kPi * 1e10)), 1e-12));
    CHECK(cmp.ratio == rel(1.30294e-5, 1e-5));
    CHECK(cmp.equivalent_temperature == rel(1.0279e6, 1e-4));
    // Thermal flow at the equivalent temperature closes the loop.
    CHECK(thermal_entropy_flow_renyi2(cmp.equivalent_temperature, kSi) ==
          rel(cmp.thermal_flow, 1e-12));

    // Formal crossover at Q = 16/(3 pi).
    const auto crossover = compare_laser_thermal(0.5, 16.0 / (3.0 * kPi), kSi);
    CHECK(crossover.ratio == rel(1.0, 1e-12));

    // ratio scales as Q^{-1/2}: exact halving for 4x the Q.
    const auto q4 = compare_laser_thermal(0.5, 4e10, kSi);
    CHECK(q4.ratio / cmp.ratio == rel(0.5, 1e-14));

    CHECK_THROWS_AS(compare_laser_thermal(0.0, 1e10, kSi), DomainError);
    CHECK_THROWS_AS(compare_laser_thermal(0.5, 1.0, kSi), DomainError);
}

TEST_CASE("occupation ties to the single-mode purity") {
    // log(2 nbar + 1) = -log Tr[rho^2] for a thermal mode.
    const double nbar = 1.0;
    CHECK(std::log(2.0 * nbar + 1.0) == rel(-std::log(1.0 / 3.0), 1e-14));
}
