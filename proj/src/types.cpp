#include "pabeam/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pabeam {

ArrayGeometry build_linear_array(std::size_t num_elements, double pitch,
                                 double center_x) {
  if (num_elements < 2) {
    throw std::invalid_argument("build_linear_array: need at least 2 elements");
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw std::invalid_argument("build_linear_array: pitch must be positive");
  }
  ArrayGeometry geom;
  geom.pitch = pitch;
  geom.aperture_center_x = center_x;
  geom.element_positions.reserve(num_elements);
  const double half = 0.5 * double(num_elements - 1);
  for (std::size_t i = 0; i < num_elements; ++i) {
    geom.element_positions.push_back({center_x + (double(i) - half) * pitch, 0.0});
  }
  return geom;
}

RfFrame RfFrame::zeros(std::size_t channels, std::size_t count, double fs,
                       double c) {
  RfFrame frame;
  frame.num_channels = channels;
  frame.num_samples = count;
  frame.sampling_frequency_hz = fs;
  frame.speed_of_sound_m_s = c;
  frame.samples.assign(channels * count, 0.0);
  return frame;
}

namespace {

std::size_t axis_count(double lo, double hi, double step) {
  // Guard against the span/step quotient landing an ulp under an integer.
  return std::size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
}

std::size_t nearest_index(double value, double origin, double step,
                          std::size_t count) {
  const double q = (value - origin) / step;
  // Round to nearest; exact midpoints resolve to the smaller index.
  double idx = std::ceil(q - 0.5);
  if (idx < 0.0) idx = 0.0;
  const double max_idx = double(count - 1);
  if (idx > max_idx) idx = max_idx;
  return std::size_t(idx);
}

}  // namespace

std::size_t ImageGrid::nearest_x_index(double x) const {
  return nearest_index(x, x_min, dx, nx);
}

std::size_t ImageGrid::nearest_z_index(double z) const {
  return nearest_index(z, z_min, dz, nz);
}

ImageGrid build_grid(double x_min, double x_max, double z_min, double z_max,
                     double dx, double dz) {
  if (!(x_min < x_max) || !(z_min < z_max)) {
    throw std::invalid_argument("build_grid: bounds must be ordered");
  }
  if (!(dx > 0.0) || !(dz > 0.0)) {
    throw std::invalid_argument("build_grid: steps must be positive");
  }
  ImageGrid grid;
  grid.x_min = x_min;
  grid.x_max = x_max;
  grid.z_min = z_min;
  grid.z_max = z_max;
  grid.dx = dx;
  grid.dz = dz;
  grid.nx = axis_count(x_min, x_max, dx);
  grid.nz = axis_count(z_min, z_max, dz);
  return grid;
}

std::string to_string(ImageStage stage) {
  switch (stage) {
    case ImageStage::raw: return "raw";
    case ImageStage::envelope: return "envelope";
    case ImageStage::db: return "db";
  }
  return "raw";
}

ImageStage image_stage_from_string(const std::string& s) {
  if (s == "raw") return ImageStage::raw;
  if (s == "envelope") return ImageStage::envelope;
  if (s == "db") return ImageStage::db;
  throw std::invalid_argument("unknown image stage: " + s);
}

BeamformedImage BeamformedImage::zeros(std::size_t nx, std::size_t nz,
                                       ImageStage stage) {
  BeamformedImage image;
  image.nx = nx;
  image.nz = nz;
  image.stage = stage;
  image.values.assign(nx * nz, 0.0);
  return image;
}

std::string FrameValidation::summary() const {
  if (ok) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i];
  }
  return os.str();
}

FrameValidation validate_frame(const RfFrame& frame,
                               const ArrayGeometry& geometry) {
  FrameValidation result;
  auto fail = [&result](std::string msg) {
    result.ok = false;
    result.issues.push_back(std::move(msg));
  };

  if (geometry.num_elements() < 2) {
    fail("array needs at least 2 elements");
  }
  for (std::size_t i = 0; i < geometry.num_elements(); ++i) {
    if (geometry.element_positions[i].z != 0.0) {
      fail("element " + std::to_string(i) + " is off the z = 0 line");
      break;
    }
    if (i > 0) {
      const double gap = geometry.element_positions[i].x -
                         geometry.element_positions[i - 1].x;
      if (!(gap > 0.0) || std::abs(gap - geometry.pitch) > 1e-12) {
        fail("element spacing is not uniformly " +
             std::to_string(geometry.pitch) + " m at index " +
             std::to_string(i));
        break;
      }
    }
  }

  if (frame.num_channels != geometry.num_elements()) {
    std::ostringstream os;
    os << "channel count " << frame.num_channels << " does not match "
       << geometry.num_elements() << " array elements";
    fail(os.str());
  }
  if (frame.num_samples < 1) {
    fail("frame has no samples");
  }
  if (frame.samples.size() != frame.num_channels * frame.num_samples) {
    fail("sample storage does not match declared shape");
  }
  if (!(frame.sampling_frequency_hz > 0.0)) {
    fail("sampling frequency must be positive");
  }
  if (!(frame.speed_of_sound_m_s > 0.0)) {
    fail("speed of sound must be positive");
  }
  for (std::size_t i = 0; frame.num_samples > 0 && i < frame.samples.size();
       ++i) {
    if (!std::isfinite(frame.samples[i])) {
      std::ostringstream os;
      os << "non-finite sample at channel " << i / frame.num_samples
         << ", sample " << i % frame.num_samples;
      fail(os.str());
      break;
    }
  }
  return result;
}

}  // namespace pabeam
