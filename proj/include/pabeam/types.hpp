#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pabeam {

/// Point in the imaging plane: x lateral, z axial (depth), meters.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

/// Uniform linear receive array on the z = 0 line, elements sorted by x.
struct ArrayGeometry {
  std::vector<Vec2> element_positions;
  double pitch = 0.0;
  double aperture_center_x = 0.0;

  std::size_t num_elements() const { return element_positions.size(); }
};

/// Builds a uniform linear array of `num_elements` receivers spaced by
/// `pitch`, symmetric about `center_x` at z = 0.
/// Throws std::invalid_argument for num_elements < 2 or pitch <= 0.
ArrayGeometry build_linear_array(std::size_t num_elements, double pitch,
                                 double center_x);

/// Multi-channel pressure traces, channel-major storage.
struct RfFrame {
  std::vector<double> samples;  // num_channels * num_samples
  std::size_t num_channels = 0;
  std::size_t num_samples = 0;
  double sampling_frequency_hz = 0.0;
  double speed_of_sound_m_s = 0.0;

  static RfFrame zeros(std::size_t channels, std::size_t count, double fs,
                       double c);

  double at(std::size_t channel, std::size_t sample) const {
    return samples[channel * num_samples + sample];
  }
  double& at(std::size_t channel, std::size_t sample) {
    return samples[channel * num_samples + sample];
  }
  std::span<const double> channel(std::size_t i) const {
    return {samples.data() + i * num_samples, num_samples};
  }
};

/// Point absorber: position in meters, linear source amplitude, nominal
/// radius (stored for bookkeeping; simulation treats it as a point).
struct Absorber {
  double x = 0.0;
  double z = 0.0;
  double amplitude = 1.0;
  double radius_m = 0.0;
};

struct Phantom {
  std::vector<Absorber> absorbers;
};

/// Rectangular pixel lattice. Pixel (i, j) is centered at
/// (x_min + i*dx, z_min + j*dz).
struct ImageGrid {
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  double dx = 0.0, dz = 0.0;
  std::size_t nx = 0, nz = 0;

  double x_at(std::size_t i) const { return x_min + double(i) * dx; }
  double z_at(std::size_t j) const { return z_min + double(j) * dz; }

  // Nearest pixel index along each axis; midpoints resolve to the
  // smaller index.
  std::size_t nearest_x_index(double x) const;
  std::size_t nearest_z_index(double z) const;
};

/// Throws std::invalid_argument on inverted bounds or non-positive steps.
ImageGrid build_grid(double x_min, double x_max, double z_min, double z_max,
                     double dx, double dz);

enum class ImageStage { raw, envelope, db };

std::string to_string(ImageStage stage);
ImageStage image_stage_from_string(const std::string& s);

/// Per-pixel beamformed values on an ImageGrid, x-major storage
/// (values[ix*nz + iz]).
struct BeamformedImage {
  std::vector<double> values;
  std::size_t nx = 0;
  std::size_t nz = 0;
  ImageStage stage = ImageStage::raw;
  double dynamic_range_db = 0.0;  // meaningful only when stage == db

  static BeamformedImage zeros(std::size_t nx, std::size_t nz,
                               ImageStage stage);

  double at(std::size_t ix, std::size_t iz) const {
    return values[ix * nz + iz];
  }
  double& at(std::size_t ix, std::size_t iz) { return values[ix * nz + iz]; }
};

/// Delayed channel samples gathered for one pixel, length M.
using AlignedSamples = std::vector<double>;

struct FrameValidation {
  bool ok = true;
  std::vector<std::string> issues;

  std::string summary() const;  // issues joined into one line
};

/// Structural check of a frame against an array: channel count must match
/// the element count, rows must be non-empty, sampling metadata positive,
/// every sample finite.
FrameValidation validate_frame(const RfFrame& frame,
                               const ArrayGeometry& geometry);

}  // namespace pabeam
