#pragma once

#include <cstdint>
#include <string>

#include "pabeam/types.hpp"

namespace pabeam {

/// Gaussian-modulated cosine pulse. fractional_bandwidth is the -6 dB
/// amplitude width of the spectral envelope divided by the center
/// frequency.
struct PulseSpec {
  double center_frequency_hz = 7.0e6;
  double fractional_bandwidth = 0.77;

  /// Standard deviation of the time-domain Gaussian envelope.
  double envelope_sigma_s() const;
  /// Half-width of the effective pulse support, beyond which the
  /// envelope is treated as zero.
  double support_halfwidth_s() const;
};

struct NoiseSpec {
  double snr_db = 50.0;
  std::uint64_t seed = 1;
};

/// Evaluates the received pulse at time t relative to its center:
/// unit-peak Gaussian envelope times a cosine carrier.
double pulse_waveform(double t, const PulseSpec& spec);

/// Synthesizes a clean frame: channel i accumulates, over all absorbers,
/// a 1/r-attenuated pulse delayed by the one-way time of flight.
/// Throws std::invalid_argument on bad parameters and std::runtime_error
/// (naming the absorber) when a pulse would be truncated by the trace end.
RfFrame simulate_frame(const Phantom& phantom, const ArrayGeometry& geometry,
                       double sampling_frequency_hz, double speed_of_sound_m_s,
                       std::size_t num_samples, const PulseSpec& spec);

/// Adds i.i.d. zero-mean Gaussian noise sized so the mean signal power of
/// `frame` over the noise variance equals snr_db. Deterministic for a given
/// seed (independent per-channel substreams). Throws std::runtime_error on
/// an all-zero frame.
RfFrame add_gaussian_noise(const RfFrame& frame, const NoiseSpec& noise);

/// Built-in two-point-target phantoms:
///   fig1 - 7 depth rows every 5 mm from 25 mm, pair separations
///          4.6 .. 7.0 mm in 0.4 mm steps, pairs centered on x = 0;
///   fig3 - 4 depth rows every 10 mm from 20 mm, separations 4.6 .. 5.8 mm.
/// Throws std::invalid_argument for an unknown name.
Phantom preset_phantom(const std::string& name);

}  // namespace pabeam
