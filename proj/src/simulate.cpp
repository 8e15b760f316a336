#include "pabeam/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pabeam {

namespace {

constexpr double kSupportSigmas = 7.0;

void check_pulse(const PulseSpec& spec) {
  if (!(spec.center_frequency_hz > 0.0)) {
    throw std::invalid_argument("pulse: center frequency must be positive");
  }
  if (!(spec.fractional_bandwidth > 0.0) || !(spec.fractional_bandwidth < 2.0)) {
    throw std::invalid_argument("pulse: fractional bandwidth must be in (0, 2)");
  }
}

void check_phantom(const Phantom& phantom) {
  for (std::size_t i = 0; i < phantom.absorbers.size(); ++i) {
    const Absorber& a = phantom.absorbers[i];
    std::ostringstream os;
    if (!(a.z > 0.0)) {
      os << "absorber " << i << ": depth must be positive";
    } else if (!(a.amplitude > 0.0)) {
      os << "absorber " << i << ": amplitude must be positive";
    } else if (a.radius_m < 0.0) {
      os << "absorber " << i << ": radius must be non-negative";
    } else {
      continue;
    }
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double PulseSpec::envelope_sigma_s() const {
  // Spectral envelope exp(-2 pi^2 sigma^2 f^2) passes -6 dB amplitude at
  // half the requested bandwidth on each side of the carrier.
  const double width_hz = fractional_bandwidth * center_frequency_hz;
  return std::sqrt(0.6 * std::numbers::ln10) / (std::numbers::pi * width_hz);
}

double PulseSpec::support_halfwidth_s() const {
  return kSupportSigmas * envelope_sigma_s();
}

double pulse_waveform(double t, const PulseSpec& spec) {
  check_pulse(spec);
  const double sigma = spec.envelope_sigma_s();
  const double envelope = std::exp(-0.5 * (t / sigma) * (t / sigma));
  return envelope * std::cos(2.0 * std::numbers::pi * spec.center_frequency_hz * t);
}

RfFrame simulate_frame(const Phantom& phantom, const ArrayGeometry& geometry,
                       double sampling_frequency_hz, double speed_of_sound_m_s,
                       std::size_t num_samples, const PulseSpec& spec) {
  check_pulse(spec);
  check_phantom(phantom);
  if (!(sampling_frequency_hz > 0.0)) {
    throw std::invalid_argument("simulate_frame: sampling frequency must be positive");
  }
  if (!(speed_of_sound_m_s > 0.0)) {
    throw std::invalid_argument("simulate_frame: speed of sound must be positive");
  }
  if (num_samples < 1) {
    throw std::invalid_argument("simulate_frame: need at least one sample");
  }

  const double fs = sampling_frequency_hz;
  const double c = speed_of_sound_m_s;
  const double sigma = spec.envelope_sigma_s();
  const double t_support = spec.support_halfwidth_s();
  const double t_end = double(num_samples - 1) / fs;
  const double carrier = 2.0 * std::numbers::pi * spec.center_frequency_hz;

  // The trace must hold every arrival in full, pulse tail included.
  for (std::size_t a = 0; a < phantom.absorbers.size(); ++a) {
    const Absorber& ab = phantom.absorbers[a];
    double r_max = 0.0;
    for (const Vec2& e : geometry.element_positions) {
      r_max = std::max(r_max, std::hypot(ab.x - e.x, ab.z - e.z));
    }
    if (r_max / c + t_support > t_end) {
      std::ostringstream os;
      os << "absorber " << a << " at (" << ab.x << ", " << ab.z
         << ") m arrives past the end of the trace (needs "
         << (r_max / c + t_support) * fs + 1.0 << " samples, trace has "
         << num_samples << ")";
      throw std::runtime_error(os.str());
    }
  }

  RfFrame frame = RfFrame::zeros(geometry.num_elements(), num_samples, fs, c);
  for (std::size_t i = 0; i < geometry.num_elements(); ++i) {
    const Vec2 elem = geometry.element_positions[i];
    double* trace = frame.samples.data() + i * num_samples;
    for (const Absorber& ab : phantom.absorbers) {
      const double r = std::hypot(ab.x - elem.x, ab.z - elem.z);
      const double t0 = r / c;
      const double gain = ab.amplitude / r;
      const auto k_lo = std::size_t(std::max(0.0, std::floor((t0 - t_support) * fs)));
      const auto k_hi = std::min(num_samples - 1,
                                 std::size_t(std::ceil((t0 + t_support) * fs)));
      for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double t = double(k) / fs - t0;
        trace[k] += gain * std::exp(-0.5 * (t / sigma) * (t / sigma)) *
                    std::cos(carrier * t);
      }
    }
  }
  return frame;
}

RfFrame add_gaussian_noise(const RfFrame& frame, const NoiseSpec& noise) {
  double power = 0.0;
  for (double s : frame.samples) power += s * s;
  const std::size_t total = frame.samples.size();
  if (total == 0 || power == 0.0) {
    throw std::runtime_error("add_gaussian_noise: all-zero frame, SNR undefined");
  }
  power /= double(total);
  const double sigma = std::sqrt(power * std::pow(10.0, -noise.snr_db / 10.0));

  RfFrame out = frame;
  for (std::size_t ch = 0; ch < frame.num_channels; ++ch) {
    // One substream per channel so the result does not depend on any
    // parallel channel ordering.
    std::seed_seq seq{std::uint32_t(noise.seed & 0xffffffffu),
                      std::uint32_t(noise.seed >> 32), std::uint32_t(ch)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, sigma);
    double* trace = out.samples.data() + ch * frame.num_samples;
    for (std::size_t k = 0; k < frame.num_samples; ++k) {
      trace[k] += gauss(rng);
    }
  }
  return out;
}

Phantom preset_phantom(const std::string& name) {
  Phantom phantom;
  auto add_pair = [&phantom](double depth_m, double separation_m) {
    phantom.absorbers.push_back({-0.5 * separation_m, depth_m, 1.0, 0.1e-3});
    phantom.absorbers.push_back({+0.5 * separation_m, depth_m, 1.0, 0.1e-3});
  };
  if (name == "fig1") {
    const double seps_mm[] = {4.6, 5.0, 5.4, 5.8, 6.2, 6.6, 7.0};
    for (int row = 0; row < 7; ++row) {
      add_pair((25.0 + 5.0 * row) * 1e-3, seps_mm[row] * 1e-3);
    }
  } else if (name == "fig3") {
    const double seps_mm[] = {4.6, 5.0, 5.4, 5.8};
    for (int row = 0; row < 4; ++row) {
      add_pair((20.0 + 10.0 * row) * 1e-3, seps_mm[row] * 1e-3);
    }
  } else {
    throw std::invalid_argument("unknown phantom preset: " + name);
  }
  return phantom;
}

}  // namespace pabeam
