#include "beamlab/beam.hpp"

#include <cmath>
#include <string>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

}  // namespace

Coherence Coherence::finite(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError("coherence must be finite and non-negative");
    }
    return Coherence(value, false);
}

double Coherence::value() const {
    if (infinite_) {
        throw DomainError("coherence is infinite (zero linewidth); no numeric value exists");
    }
    return value_;
}

const char* to_string(BeamAdvisory a) noexcept {
    switch (a) {
        case BeamAdvisory::low_coherence:
            return "low-coherence";
        case BeamAdvisory::linewidth_comparable_to_carrier:
            return "linewidth-comparable-to-carrier";
    }
    return "unknown";
}

double BeamParams::power(const PhysicalConstants& constants) const noexcept {
    return constants.hbar * centre_frequency_ * photon_flow_;
}

BeamParams beam_from_rates(double photon_flow, double linewidth, double centre_frequency) {
    require_finite(photon_flow, "photon_flow");
    require_finite(linewidth, "linewidth");
    require_finite(centre_frequency, "centre_frequency");
    if (photon_flow < 0.0) throw DomainError("photon_flow must be non-negative");
    if (linewidth < 0.0) throw DomainError("linewidth must be non-negative");
    if (centre_frequency <= 0.0) throw DomainError("centre_frequency must be positive");

    BeamParams beam;
    beam.photon_flow_ = photon_flow;
    beam.linewidth_ = linewidth;
    beam.centre_frequency_ = centre_frequency;
    beam.coherence_ = linewidth > 0.0 ? Coherence::finite(4.0 * photon_flow / linewidth)
                                      : Coherence::infinite();
    if (!beam.coherence_.is_infinite() && beam.coherence_.value() < 100.0) {
        beam.advisories_.push_back(BeamAdvisory::low_coherence);
    }
    if (linewidth > centre_frequency / 10.0) {
        beam.advisories_.push_back(BeamAdvisory::linewidth_comparable_to_carrier);
    }
    return beam;
}

BeamParams beam_from_cavity(double kappa, double mu, double centre_frequency) {
    require_finite(kappa, "kappa");
    require_finite(mu, "mu");
    if (kappa <= 0.0) throw DomainError("kappa must be positive");
    if (mu <= 0.0) throw DomainError("mu must be positive");
    return beam_from_rates(kappa * mu, kappa / (2.0 * mu), centre_frequency);
}

ReducedProblem reduce(const BeamParams& beam) {
    if (beam.photon_flow() <= 0.0) {
        throw DegenerateProblemError("reduced problem undefined: photon_flow is zero");
    }
    if (beam.linewidth() <= 0.0) {
        throw DegenerateProblemError("reduced problem undefined: linewidth is zero");
    }
    ReducedProblem reduced;
    reduced.coherence = beam.coherence().value();
    reduced.epsilon = std::pow(4.0 * reduced.coherence, -0.25);
    reduced.rate_scale = std::sqrt(beam.photon_flow() * beam.linewidth());
    return reduced;
}

double asymptotic_entropy_flow_per_kb(const BeamParams& beam) noexcept {
    return std::sqrt(beam.photon_flow() * beam.linewidth());
}

double asymptotic_entropy_flow(const BeamParams& beam,
                               const PhysicalConstants& constants) noexcept {
    return constants.boltzmann * asymptotic_entropy_flow_per_kb(beam);
}

double asymptotic_entropy_flow_power_form(const BeamParams& beam,
                                          const PhysicalConstants& constants) noexcept {
    const double power = beam.power(constants);
    return constants.boltzmann * std::sqrt(power / constants.hbar) *
           std::sqrt(beam.linewidth() / beam.centre_frequency());
}

HeuristicBreakdown heuristic_branching(const BeamParams& beam,
                                       const PhysicalConstants& constants) {
    const ReducedProblem reduced = reduce(beam);  // rejects degenerate beams
    HeuristicBreakdown h;
    h.segment_duration = 1.0 / reduced.rate_scale;
    h.segment_amplitude = std::pow(beam.photon_flow() / beam.linewidth(), 0.25);
    h.phase_step = std::sqrt(beam.linewidth() * h.segment_duration);
    h.amplitude_displacement = h.segment_amplitude * h.phase_step;
    // k_B/dt, written through rate_scale (= 1/dt algebraically) so the
    // identity heuristic_rate == asymptotic_entropy_flow holds bit for bit.
    h.heuristic_rate = constants.boltzmann * reduced.rate_scale;
    h.heuristic_rate_log2 = constants.boltzmann * std::log(2.0) * reduced.rate_scale;
    return h;
}

}  // namespace beamlab
