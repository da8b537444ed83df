#pragma once

#include <cmath>
#include <cstdint>

namespace qfc {

/// Integer picoseconds. All event timestamps and delays use this unit.
using Picoseconds = std::int64_t;

inline constexpr double kPicosecondsPerSecond = 1e12;

/// Speed of light in nm·GHz, so that frequency[GHz] = kSpeedOfLightNmGHz / wavelength[nm].
inline constexpr double kSpeedOfLightNmGHz = 299792458.0;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double seconds_to_ps(double s) { return s * kPicosecondsPerSecond; }
constexpr double ps_to_seconds(double ps) { return ps / kPicosecondsPerSecond; }

inline double wavelength_to_ghz(double wavelength_nm) { return kSpeedOfLightNmGHz / wavelength_nm; }

/// Optical frequency offset of `wavelength_nm` from `reference_nm`, in GHz.
inline double optical_detuning_ghz(double wavelength_nm, double reference_nm) {
  return wavelength_to_ghz(wavelength_nm) - wavelength_to_ghz(reference_nm);
}

/// Continuous time rounded to integer ps, ties to even.
inline Picoseconds round_to_ps(double t_ps) { return static_cast<Picoseconds>(std::nearbyint(t_ps)); }

}  // namespace qfc
