#ifndef BEAMLAB_UTIL_HPP
#define BEAMLAB_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace beamlab::detail {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for the RNG stream of one path/sample: a pure function of
// (base seed, stream index), so serial and parallel runs draw identical
// numbers for the same index.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    return mix64(mix64(seed + golden) + (index + 1) * golden);
}

// Cascade summation. The split points depend only on the span length, so a
// given sequence always sums to the same double no matter how the caller
// parallelised the production of the values.
inline double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Wrap an angle into [0, 2*pi).
inline double wrap_phase(double phi) noexcept {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;  // fmod can land exactly on 2*pi after the add
    return w;
}

}  // namespace beamlab::detail

#endif  // BEAMLAB_UTIL_HPP
