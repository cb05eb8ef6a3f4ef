#ifndef BEAMLAB_BEAM_HPP
#define BEAMLAB_BEAM_HPP

#include <vector>

#include "beamlab/constants.hpp"

namespace beamlab {

// Beam coherence C = 4*photon_flow/linewidth, the mean number of photons per
// coherence time. A zero-linewidth beam has infinite coherence; that state is
// tagged explicitly instead of being an IEEE infinity so it can never leak
// into downstream formulas.
class Coherence {
  public:
    static Coherence finite(double value);
    static Coherence infinite() noexcept { return Coherence(0.0, true); }

    bool is_infinite() const noexcept { return infinite_; }
    // Throws DomainError when the coherence is infinite.
    double value() const;

  private:
    Coherence(double v, bool inf) noexcept : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

enum class BeamAdvisory {
    // C < 100: the asymptotic rate k_B*sqrt(Ndot*l) is off by more than ~1%
    // (leading finite-coherence correction ~ 1/(8*sqrt(C))).
    low_coherence,
    // l > omega0/10: the narrowband model is strained.
    linewidth_comparable_to_carrier,
};

const char* to_string(BeamAdvisory a) noexcept;

// The three rates that define an ideal laser beam, plus derived coherence.
// Immutable; construct through beam_from_rates or beam_from_cavity.
class BeamParams {
  public:
    double photon_flow() const noexcept { return photon_flow_; }          // Ndot [1/s]
    double linewidth() const noexcept { return linewidth_; }              // l [1/s], FWHM
    double centre_frequency() const noexcept { return centre_frequency_; }  // omega0 [rad/s]
    Coherence coherence() const noexcept { return coherence_; }
    const std::vector<BeamAdvisory>& advisories() const noexcept { return advisories_; }

    // Beam power P = hbar * omega0 * Ndot [W].
    double power(const PhysicalConstants& constants) const noexcept;

  private:
    friend BeamParams beam_from_rates(double, double, double);
    BeamParams() : coherence_(Coherence::infinite()) {}

    double photon_flow_ = 0.0;
    double linewidth_ = 0.0;
    double centre_frequency_ = 0.0;
    Coherence coherence_;
    std::vector<BeamAdvisory> advisories_;
};

// Build a beam from the three rates. All inputs must be finite; photon flow
// and linewidth non-negative, centre frequency positive.
BeamParams beam_from_rates(double photon_flow, double linewidth, double centre_frequency);

// Quantum-noise-limited cavity parametrisation: linewidth kappa/(2*mu) and
// photon flow kappa*mu, where mu is the mean intracavity photon number and
// kappa the bare cavity intensity-damping rate. The asymptotic entropy flow
// of such a beam is k_B*kappa/sqrt(2) identically.
BeamParams beam_from_cavity(double kappa, double mu, double centre_frequency);

// Dimensionless form of the decay problem, in time units of 1/rate_scale.
struct ReducedProblem {
    double coherence;   // C = 4*Ndot/l
    double epsilon;     // (4*C)^(-1/4)
    double rate_scale;  // sqrt(Ndot*l) [1/s]
};

// Throws DegenerateProblemError if photon flow or linewidth is zero.
ReducedProblem reduce(const BeamParams& beam);

// Asymptotic (high-coherence) entropy flow sqrt(Ndot*l), in k_B/s.
double asymptotic_entropy_flow_per_kb(const BeamParams& beam) noexcept;

// Same, in W/K: k_B*sqrt(Ndot*l).
double asymptotic_entropy_flow(const BeamParams& beam, const PhysicalConstants& constants) noexcept;

// The same quantity written through the beam power:
// k_B * sqrt(P/hbar) * sqrt(l/omega0). Agrees with asymptotic_entropy_flow
// to relative 1e-12.
double asymptotic_entropy_flow_power_form(const BeamParams& beam,
                                          const PhysicalConstants& constants) noexcept;

// Branching-path picture of the entropy rate: cut the beam into segments of
// duration dt = 1/sqrt(Ndot*l), just long enough for phase diffusion to
// displace the coherent amplitude by one unit, so each segment splits a
// phase path into two distinguishable ones.
struct HeuristicBreakdown {
    double segment_duration;        // dt = 1/sqrt(Ndot*l) [s]
    double segment_amplitude;       // r = (Ndot/l)^(1/4)
    double phase_step;              // sqrt(l*dt) [rad]
    double amplitude_displacement;  // r*sqrt(l*dt); equals 1 for any valid beam
    double heuristic_rate;          // k_B/dt [W/K], the rounded one-branch-per-dt rate
    double heuristic_rate_log2;     // k_B*log(2)/dt [W/K], one bit per branching
};

HeuristicBreakdown heuristic_branching(const BeamParams& beam, const PhysicalConstants& constants);

}  // namespace beamlab

#endif  // BEAMLAB_BEAM_HPP
