#pragma once

#include <cstdint>
#include <functional>

#include "qfc/photon.hpp"

namespace qfc {

/// Zn:PPLN waveguide difference-frequency stage.
struct ConversionSpec {
  double length_cm = 4.0;
  /// Normalized efficiency in W^-1 cm^-2 (115 %/(W cm^2)).
  double normalized_efficiency = 1.15;
  /// Lumped end-to-end efficiency at the sin^2 maximum (coupling, prism/pinhole, WDMs, FBG).
  double max_total_efficiency = 0.32;
  double acceptance_fwhm_ghz = 54.6;
  double input_center_nm = 710.74;
  /// Flat converter-noise rate per watt of pump; 21:1 signal-to-noise at 150 mW for the
  /// 188,400 s^-1 source.
  double noise_rate_per_watt = 18982.6;
};

struct PumpConfig {
  double wavelength_nm = 1549.90;
  double power_w = 0.150;
  double coherence_time_ps = 1.6e8;
};

struct EtalonSpec {
  double free_spectral_range_ghz = 1850.0;
  double finesse = 42.0;
  double center_frequency_ghz = kSpeedOfLightNmGHz / 710.74;
};

struct FbgSpec {
  double center_nm = 1312.714;
  double bandwidth_nm = 0.755;
  double in_band_transmission = 0.79;
  double out_of_band_suppression = 1e-3;
};

void validate(const ConversionSpec& spec);
void validate(const PumpConfig& pump);
void validate(const EtalonSpec& spec);
void validate(const FbgSpec& spec);

/// sin(x)/x squared, equal to 1 at x = 0.
double sinc2(double x);

/// x at which sinc2(x) = 1/2; the FWHM of sinc2(a x) is 2 * kSinc2HalfMaxArg / a.
inline constexpr double kSinc2HalfMaxArg = 1.3915573782515103;

/// Energy conservation 1/out = 1/in - 1/pump. Throws DomainError unless 0 < in < pump.
double dfg_output_wavelength(double lambda_in_nm, double lambda_pump_nm);

/// Bare sin^2(sqrt(eta P) L) conversion inside the waveguide.
double internal_conversion_efficiency(const PumpConfig& pump, const ConversionSpec& spec);

/// max_total_efficiency * sin^2(sqrt(eta P) L).
double conversion_probability(const PumpConfig& pump, const ConversionSpec& spec);

/// Pump power of the first sin^2 maximum, (pi/2)^2 / (eta L^2).
double optimal_pump_power(const ConversionSpec& spec);

/// sinc^2 acceptance with T(0) = 1 and FWHM = acceptance_fwhm_ghz.
double acceptance_transmission(double detuning_ghz, const ConversionSpec& spec);

/// Airy function 1 / (1 + (2F/pi)^2 sin^2(pi detuning / FSR)).
double etalon_transmission(double detuning_ghz, const EtalonSpec& spec);

/// Flat-top band: in_band_transmission on the closed interval center +- bandwidth/2.
double fbg_band_transmission(double wavelength_nm, const FbgSpec& spec);

/// Worst-case coherence after conversion; Lorentzian linewidths add, so 1/T2 add.
double converted_coherence_time(double t2_in_ps, double t2_pump_ps);

using TransmissionFn = std::function<double(const PhotonEvent&)>;

/// Keeps each event independently with probability transmission(event).
/// Throws ContractError if a transmission value falls outside [0,1].
PhotonStream apply_filter(const PhotonStream& stream, const TransmissionFn& transmission, std::uint64_t seed);

/// Down-converts a visible stream: thinning by conversion probability x acceptance, wavelength
/// remapped by energy conservation, plus a merged Poisson converter-noise stream at
/// noise_rate_per_watt * power.
PhotonStream convert_stream(const PhotonStream& stream, const PumpConfig& pump, const ConversionSpec& spec,
                            double duration_s, std::uint64_t seed);

}  // namespace qfc
