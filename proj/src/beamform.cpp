#include "pabeam/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pabeam {

std::string MethodSpec::name() const {
  std::string base;
  switch (kernel) {
    case Kernel::das: base = "das"; break;
    case Kernel::dmas: base = "dmas"; break;
    case Kernel::mdmas: base = "mdmas"; break;
  }
  return cf_weighting ? base + "-cf" : base;
}

MethodSpec MethodSpec::parse(const std::string& name) {
  for (const MethodSpec& m : all()) {
    if (m.name() == name) return m;
  }
  throw std::invalid_argument(
      "unknown method '" + name +
      "' (expected das, das-cf, dmas, dmas-cf, mdmas or mdmas-cf)");
}

std::vector<MethodSpec> MethodSpec::all() {
  return {{Kernel::das, false},  {Kernel::das, true},  {Kernel::dmas, false},
          {Kernel::dmas, true},  {Kernel::mdmas, false}, {Kernel::mdmas, true}};
}

double time_of_flight(Vec2 pixel, Vec2 element, double speed_of_sound_m_s) {
  if (!(speed_of_sound_m_s > 0.0)) {
    throw std::invalid_argument("time_of_flight: speed of sound must be positive");
  }
  return std::hypot(pixel.x - element.x, pixel.z - element.z) /
         speed_of_sound_m_s;
}

double sample_at(const RfFrame& frame, std::size_t channel, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("sample_at: negative time");
  }
  const double pos = t * frame.sampling_frequency_hz;
  const double last = double(frame.num_samples - 1);
  if (pos >= last) {
    return pos == last ? frame.at(channel, frame.num_samples - 1) : 0.0;
  }
  const auto k = std::size_t(pos);
  const double frac = pos - double(k);
  const double* trace = frame.samples.data() + channel * frame.num_samples;
  return (1.0 - frac) * trace[k] + frac * trace[k + 1];
}

void gather_delayed(const RfFrame& frame, const ArrayGeometry& geometry,
                    Vec2 pixel, double speed_of_sound_m_s,
                    AlignedSamples& out) {
  const std::size_t m = geometry.num_elements();
  out.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = sample_at(frame, i,
                       time_of_flight(pixel, geometry.element_positions[i],
                                      speed_of_sound_m_s));
  }
}

AlignedSamples gather_delayed(const RfFrame& frame,
                              const ArrayGeometry& geometry, Vec2 pixel,
                              double speed_of_sound_m_s) {
  AlignedSamples out;
  gather_delayed(frame, geometry, pixel, speed_of_sound_m_s, out);
  return out;
}

double das_pixel(std::span<const double> aligned) {
  double sum = 0.0;
  for (double v : aligned) sum += v;
  return sum;
}

double coherence_factor(std::span<const double> aligned) {
  double sum = 0.0;
  double energy = 0.0;
  for (double v : aligned) {
    sum += v;
    energy += v * v;
  }
  if (energy == 0.0) return 0.0;
  const double cf = (sum * sum) / (double(aligned.size()) * energy);
  return std::min(cf, 1.0);
}

double signed_sqrt(double v) {
  if (v > 0.0) return std::sqrt(v);
  if (v < 0.0) return -std::sqrt(-v);
  return 0.0;
}

double dmas_pixel(std::span<const double> aligned) {
  if (aligned.size() < 2) {
    throw std::invalid_argument("dmas_pixel: need at least 2 channels");
  }
  double sum = 0.0;
  double sq = 0.0;
  for (double v : aligned) {
    const double y = signed_sqrt(v);
    sum += y;
    sq += y * y;
  }
  return 0.5 * (sum * sum - sq);
}

double mdmas_pixel(std::span<const double> aligned) {
  const std::size_t m = aligned.size();
  if (m < 3) {
    throw std::invalid_argument("mdmas_pixel: need at least 3 channels");
  }
  // Brackets b_i = y_i * sum_{j>i} y_j are produced from a running suffix
  // sum; the second-stage pairwise combination on b uses the same
  // (sum^2 - sum of squares) identity as dmas_pixel.
  double suffix = 0.0;
  double zsum = 0.0;
  double zsq = 0.0;
  for (std::size_t i = m; i-- > 1;) {
    suffix += signed_sqrt(aligned[i]);
    const double bracket = signed_sqrt(aligned[i - 1]) * suffix;
    const double z = signed_sqrt(bracket);
    zsum += z;
    zsq += z * z;
  }
  return 0.5 * (zsum * zsum - zsq);
}

namespace {

double kernel_value(Kernel kernel, std::span<const double> aligned) {
  switch (kernel) {
    case Kernel::das: return das_pixel(aligned);
    case Kernel::dmas: return dmas_pixel(aligned);
    case Kernel::mdmas: return mdmas_pixel(aligned);
  }
  return 0.0;
}

}  // namespace

BeamformedImage beamform_image(const RfFrame& frame,
                               const ArrayGeometry& geometry,
                               const ImageGrid& grid, MethodSpec method,
                               double speed_of_sound_m_s, unsigned threads) {
  const FrameValidation check = validate_frame(frame, geometry);
  if (!check.ok) {
    throw std::invalid_argument("beamform_image: " + check.summary());
  }
  if (!(speed_of_sound_m_s > 0.0)) {
    throw std::invalid_argument("beamform_image: speed of sound must be positive");
  }
  if (method.kernel == Kernel::mdmas && geometry.num_elements() < 3) {
    throw std::invalid_argument("beamform_image: mdmas needs at least 3 channels");
  }

  BeamformedImage image = BeamformedImage::zeros(grid.nx, grid.nz,
                                                 ImageStage::raw);
  const std::size_t total = grid.nx * grid.nz;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));

  auto worker = [&](std::size_t begin, std::size_t end) {
    AlignedSamples aligned;
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t ix = p / grid.nz;
      const std::size_t iz = p % grid.nz;
      const Vec2 pixel{grid.x_at(ix), grid.z_at(iz)};
      gather_delayed(frame, geometry, pixel, speed_of_sound_m_s, aligned);
      double value = kernel_value(method.kernel, aligned);
      if (method.cf_weighting) {
        value *= coherence_factor(aligned);
      }
      image.values[p] = value;
    }
  };

  if (threads <= 1) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min<std::size_t>(std::size_t(t) * chunk, total);
      const std::size_t end = std::min(begin + chunk, total);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  return image;
}

}  // namespace pabeam
