#ifndef BEAMLAB_VERSION_HPP
#define BEAMLAB_VERSION_HPP

namespace beamlab {

inline constexpr const char* tool_name = "beamlab";
inline constexpr const char* tool_version = "0.1.0";

}  // namespace beamlab

#endif  // BEAMLAB_VERSION_HPP
