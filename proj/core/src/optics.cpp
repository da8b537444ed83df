#include "qfc/optics.hpp"

#include <cmath>
#include <string>

#include "qfc/emitter.hpp"
#include "qfc/error.hpp"
#include "qfc/random.hpp"

namespace qfc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const ConversionSpec& s) {
  require(s.length_cm > 0.0, "conversion: length must be positive");
  require(s.normalized_efficiency > 0.0, "conversion: normalized efficiency must be positive");
  require(s.max_total_efficiency > 0.0 && s.max_total_efficiency <= 1.0,
          "conversion: max_total_efficiency must lie in (0,1]");
  require(s.acceptance_fwhm_ghz > 0.0, "conversion: acceptance FWHM must be positive");
  require(s.input_center_nm > 0.0, "conversion: input center must be positive");
  require(s.noise_rate_per_watt >= 0.0, "conversion: noise rate must be non-negative");
}

void validate(const PumpConfig& p) {
  require(p.power_w >= 0.0, "pump: power must be non-negative");
  require(p.wavelength_nm > 0.0, "pump: wavelength must be positive");
  require(p.coherence_time_ps > 0.0, "pump: coherence time must be positive");
}

void validate(const EtalonSpec& s) {
  require(s.finesse > 1.0, "etalon: finesse must exceed 1");
  require(s.free_spectral_range_ghz > 0.0, "etalon: FSR must be positive");
}

void validate(const FbgSpec& s) {
  require(s.bandwidth_nm > 0.0, "fbg: bandwidth must be positive");
  require(s.in_band_transmission >= 0.0 && s.in_band_transmission <= 1.0, "fbg: in-band transmission outside [0,1]");
  require(s.out_of_band_suppression >= 0.0 && s.out_of_band_suppression <= 1.0,
          "fbg: out-of-band suppression outside [0,1]");
  require(s.out_of_band_suppression < s.in_band_transmission, "fbg: suppression must be below in-band transmission");
}

double sinc2(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 3.0;
  const double s = std::sin(x) / x;
  return s * s;
}

double dfg_output_wavelength(double lambda_in_nm, double lambda_pump_nm) {
  if (!(lambda_in_nm > 0.0) || !(lambda_in_nm < lambda_pump_nm)) {
    throw DomainError("dfg_output_wavelength: need 0 < lambda_in < lambda_pump for down-conversion (got " +
                      std::to_string(lambda_in_nm) + ", " + std::to_string(lambda_pump_nm) + ")");
  }
  return (lambda_in_nm * lambda_pump_nm) / (lambda_pump_nm - lambda_in_nm);
}

double internal_conversion_efficiency(const PumpConfig& pump, const ConversionSpec& spec) {
  const double s = std::sin(std::sqrt(spec.normalized_efficiency * pump.power_w) * spec.length_cm);
  return s * s;
}

double conversion_probability(const PumpConfig& pump, const ConversionSpec& spec) {
  return spec.max_total_efficiency * internal_conversion_efficiency(pump, spec);
}

double optimal_pump_power(const ConversionSpec& spec) {
  const double half_pi = kPi / 2.0;
  return half_pi * half_pi / (spec.normalized_efficiency * spec.length_cm * spec.length_cm);
}

double acceptance_transmission(double detuning_ghz, const ConversionSpec& spec) {
  return sinc2(2.0 * kSinc2HalfMaxArg * detuning_ghz / spec.acceptance_fwhm_ghz);
}

double etalon_transmission(double detuning_ghz, const EtalonSpec& spec) {
  const double coeff = 2.0 * spec.finesse / kPi;
  const double s = std::sin(kPi * detuning_ghz / spec.free_spectral_range_ghz);
  return 1.0 / (1.0 + coeff * coeff * s * s);
}

double fbg_band_transmission(double wavelength_nm, const FbgSpec& spec) {
  return std::abs(wavelength_nm - spec.center_nm) <= spec.bandwidth_nm / 2.0 ? spec.in_band_transmission
                                                                              : spec.out_of_band_suppression;
}

double converted_coherence_time(double t2_in_ps, double t2_pump_ps) {
  if (!(t2_in_ps > 0.0) || !(t2_pump_ps > 0.0)) {
    throw ContractError("converted_coherence_time: coherence times must be positive");
  }
  return 1.0 / (1.0 / t2_in_ps + 1.0 / t2_pump_ps);
}

PhotonStream apply_filter(const PhotonStream& stream, const TransmissionFn& transmission, std::uint64_t seed) {
  Rng rng(seed);
  PhotonStream out;
  out.reserve(stream.size());
  for (const auto& e : stream) {
    const double t = transmission(e);
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ContractError("apply_filter: transmission " + std::to_string(t) + " outside [0,1]");
    }
    // Draw for every event so the random sequence does not depend on the transmission values.
    if (rng.uniform() < t) out.push_back(e);
  }
  return out;
}

PhotonStream convert_stream(const PhotonStream& stream, const PumpConfig& pump, const ConversionSpec& spec,
                            double duration_s, std::uint64_t seed) {
  validate(pump);
  validate(spec);
  require_time_ordered(stream, "convert_stream");
  const double p_conv = conversion_probability(pump, spec);
  Rng rng(derive_seed(seed, "convert.thin"));
  PhotonStream converted;
  converted.reserve(static_cast<std::size_t>(static_cast<double>(stream.size()) * p_conv * 1.05) + 16);
  for (const auto& e : stream) {
    const double detuning = optical_detuning_ghz(e.wavelength_nm, spec.input_center_nm);
    const double keep = p_conv * acceptance_transmission(detuning, spec);
    if (rng.uniform() < keep) {
      converted.push_back(PhotonEvent{
          e.timestamp, static_cast<float>(dfg_output_wavelength(e.wavelength_nm, pump.wavelength_nm)), e.origin});
    }
  }
  const double noise_rate = spec.noise_rate_per_watt * pump.power_w;
  if (noise_rate <= 0.0) return converted;
  const double out_center = dfg_output_wavelength(spec.input_center_nm, pump.wavelength_nm);
  auto noise = generate_poisson_stream(noise_rate, WavelengthBand{out_center, out_center}, duration_s,
                                       Origin::converter_noise, derive_seed(seed, "convert.noise"));
  return merge_streams(converted, noise);
}

}  // namespace qfc
