#pragma once

#include <span>
#include <string>
#include <vector>

#include "pabeam/types.hpp"

namespace pabeam::metrics {

/// One image row at a fixed depth, renormalized so its maximum is 0 dB.
struct LateralProfile {
  std::vector<double> lateral_positions;  // meters, strictly increasing
  std::vector<double> values_db;          // max == 0
  double depth = 0.0;                     // meters, actual row depth
};

struct Peak {
  double position = 0.0;  // meters
  double value_db = 0.0;
  std::size_t index = 0;  // sample index in the profile
};

/// Inclusive index range of a main lobe (peak out to the first local
/// minimum on each side).
struct LobeExtent {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// Per-method, per-depth summary of a two-point lateral profile.
struct ProfileReport {
  std::string method;
  double depth = 0.0;
  std::vector<double> peak_positions;  // meters
  std::vector<double> peak_values_db;
  double valley_db = 0.0;
  double sidelobe_level_db = 0.0;
  std::vector<double> fwhm_m;  // one per peak

  /// Flattened (metric, value) rows for CSV serialization.
  std::vector<std::pair<std::string, double>> rows() const;
};

/// Extracts the grid row nearest to `depth` from a dB image (ties resolve
/// toward smaller z) and shifts it so its maximum is 0 dB.
/// Throws std::invalid_argument when depth is outside the grid.
LateralProfile lateral_profile(const BeamformedImage& db_image,
                               const ImageGrid& grid, double depth);

/// The `expected` highest strict local maxima, returned sorted by
/// position (value ties resolve toward the smaller position). Throws
/// std::runtime_error when fewer local maxima exist.
std::vector<Peak> find_peaks(const LateralProfile& profile,
                             std::size_t expected);

/// dB drop from the lower of the two peaks down to the minimum strictly
/// between them; larger values mean a better-resolved pair.
double valley_depth(const LateralProfile& profile, const Peak& p1,
                    const Peak& p2);

/// Walks outward from the peak to the first local minimum on each side.
LobeExtent main_lobe_extent(const LateralProfile& profile, const Peak& peak);

/// Maximum profile value outside the union of the main lobes, in dB
/// relative to the 0 dB peak. Throws std::runtime_error when the lobes
/// cover the whole profile.
double sidelobe_level(const LateralProfile& profile,
                      std::span<const LobeExtent> main_lobes);

/// Width of the contiguous interval around the peak where the profile
/// stays within 6 dB of the peak value, with linear interpolation at the
/// crossings. Throws std::runtime_error when a crossing is missing on
/// either side.
double fwhm(const LateralProfile& profile, const Peak& peak);

/// Axis-aligned rectangle in meters, bounds inclusive.
struct Rect {
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
};

/// (max over the target regions) - (mean over the background region) of a
/// dB image. Regions must be non-empty and the background must not overlap
/// any target.
double image_snr(const BeamformedImage& db_image, const ImageGrid& grid,
                 std::span<const Rect> target_regions,
                 const Rect& background_region);

}  // namespace pabeam::metrics
