#ifndef BEAMLAB_CONSTANTS_HPP
#define BEAMLAB_CONSTANTS_HPP

namespace beamlab {

// Unit system for dimensional outputs. SI mode carries the 2019-SI exact
// values; natural mode sets k_B = hbar = 1 so entropy rates come out in
// units of k_B/s directly.
struct PhysicalConstants {
    enum class Mode { si, natural };

    double boltzmann;  // k_B [J/K]
    double hbar;       // reduced Planck constant [J s]
    Mode mode;

    static constexpr PhysicalConstants si() noexcept {
        return {1.380649e-23, 1.054571817e-34, Mode::si};
    }
    static constexpr PhysicalConstants natural() noexcept {
        return {1.0, 1.0, Mode::natural};
    }
};

// c [m/s]; only used to convert a vacuum wavelength into a carrier frequency.
inline constexpr double speed_of_light_m_per_s = 2.99792458e8;

}  // namespace beamlab

#endif  // BEAMLAB_CONSTANTS_HPP
