#include "pabeam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pabeam::metrics {

std::vector<std::pair<std::string, double>> ProfileReport::rows() const {
  std::vector<std::pair<std::string, double>> out;
  const std::string tag = method + "." +
                          [this] {
                            std::ostringstream os;
                            os << depth * 1e3 << "mm";
                            return os.str();
                          }();
  for (std::size_t i = 0; i < peak_positions.size(); ++i) {
    out.emplace_back(tag + ".peak" + std::to_string(i + 1) + "_x_mm",
                     peak_positions[i] * 1e3);
    out.emplace_back(tag + ".peak" + std::to_string(i + 1) + "_db",
                     peak_values_db[i]);
  }
  out.emplace_back(tag + ".valley_db", valley_db);
  out.emplace_back(tag + ".sidelobe_db", sidelobe_level_db);
  double fwhm_sum = 0.0;
  for (std::size_t i = 0; i < fwhm_m.size(); ++i) {
    out.emplace_back(tag + ".fwhm" + std::to_string(i + 1) + "_mm",
                     fwhm_m[i] * 1e3);
    fwhm_sum += fwhm_m[i];
  }
  if (!fwhm_m.empty()) {
    out.emplace_back(tag + ".fwhm_mean_mm", fwhm_sum / double(fwhm_m.size()) * 1e3);
  }
  return out;
}

LateralProfile lateral_profile(const BeamformedImage& db_image,
                               const ImageGrid& grid, double depth) {
  if (db_image.stage != ImageStage::db) {
    throw std::invalid_argument("lateral_profile: expected a dB image");
  }
  if (db_image.nx != grid.nx || db_image.nz != grid.nz) {
    throw std::invalid_argument("lateral_profile: image does not match grid");
  }
  if (!(depth >= grid.z_min && depth <= grid.z_max)) {
    std::ostringstream os;
    os << "lateral_profile: depth " << depth * 1e3 << " mm outside grid ["
       << grid.z_min * 1e3 << ", " << grid.z_max * 1e3 << "] mm";
    throw std::invalid_argument(os.str());
  }
  const std::size_t iz = grid.nearest_z_index(depth);

  LateralProfile profile;
  profile.depth = grid.z_at(iz);
  profile.lateral_positions.resize(grid.nx);
  profile.values_db.resize(grid.nx);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t ix = 0; ix < grid.nx; ++ix) {
    profile.lateral_positions[ix] = grid.x_at(ix);
    profile.values_db[ix] = db_image.at(ix, iz);
    peak = std::max(peak, profile.values_db[ix]);
  }
  for (double& v : profile.values_db) v -= peak;
  return profile;
}

std::vector<Peak> find_peaks(const LateralProfile& profile,
                             std::size_t expected) {
  if (expected < 1) {
    throw std::invalid_argument("find_peaks: expected count must be positive");
  }
  const auto& v = profile.values_db;
  std::vector<Peak> candidates;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) {
      candidates.push_back({profile.lateral_positions[i], v[i], i});
    }
  }
  if (candidates.size() < expected) {
    std::ostringstream os;
    os << "find_peaks: found " << candidates.size() << " local maxima, need "
       << expected;
    throw std::runtime_error(os.str());
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) {
                     if (a.value_db != b.value_db) return a.value_db > b.value_db;
                     return a.position < b.position;
                   });
  candidates.resize(expected);
  std::sort(candidates.begin(), candidates.end(),
            [](const Peak& a, const Peak& b) { return a.position < b.position; });
  return candidates;
}

double valley_depth(const LateralProfile& profile, const Peak& p1,
                    const Peak& p2) {
  if (!(p1.index < p2.index)) {
    throw std::invalid_argument("valley_depth: peaks must be ordered");
  }
  if (p2.index - p1.index < 2) {
    throw std::runtime_error("valley_depth: no samples between the peaks");
  }
  double valley = profile.values_db[p1.index + 1];
  for (std::size_t i = p1.index + 1; i < p2.index; ++i) {
    valley = std::min(valley, profile.values_db[i]);
  }
  return std::min(p1.value_db, p2.value_db) - valley;
}

LobeExtent main_lobe_extent(const LateralProfile& profile, const Peak& peak) {
  const auto& v = profile.values_db;
  LobeExtent extent{peak.index, peak.index};
  while (extent.lo > 0 && v[extent.lo - 1] < v[extent.lo]) --extent.lo;
  while (extent.hi + 1 < v.size() && v[extent.hi + 1] < v[extent.hi]) ++extent.hi;
  return extent;
}

double sidelobe_level(const LateralProfile& profile,
                      std::span<const LobeExtent> main_lobes) {
  const auto& v = profile.values_db;
  double level = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool inside = false;
    for (const LobeExtent& lobe : main_lobes) {
      if (i >= lobe.lo && i <= lobe.hi) {
        inside = true;
        break;
      }
    }
    if (!inside) {
      level = std::max(level, v[i]);
      any = true;
    }
  }
  if (!any) {
    throw std::runtime_error(
        "sidelobe_level: main lobes cover the whole profile");
  }
  // Relative to the profile peak, so a constant dB offset cancels. For
  // profiles out of lateral_profile the peak is already 0 dB.
  const double peak = *std::max_element(v.begin(), v.end());
  return level - peak;
}

double fwhm(const LateralProfile& profile, const Peak& peak) {
  const auto& v = profile.values_db;
  const auto& x = profile.lateral_positions;
  const double threshold = peak.value_db - 6.0;

  auto interpolate = [&](std::size_t inside, std::size_t outside) {
    // Linear crossing between a sample at/above the threshold and its
    // below-threshold neighbor.
    const double vi = v[inside];
    const double vo = v[outside];
    const double t = (vi - threshold) / (vi - vo);
    return x[inside] + t * (x[outside] - x[inside]);
  };

  double left = x[peak.index];
  bool found_left = false;
  for (std::size_t i = peak.index; i-- > 0;) {
    if (v[i] < threshold) {
      left = interpolate(i + 1, i);
      found_left = true;
      break;
    }
  }
  double right = x[peak.index];
  bool found_right = false;
  for (std::size_t i = peak.index + 1; i < v.size(); ++i) {
    if (v[i] < threshold) {
      right = interpolate(i - 1, i);
      found_right = true;
      break;
    }
  }
  if (!found_left || !found_right) {
    throw std::runtime_error("fwhm: -6 dB crossing not found on both sides");
  }
  return right - left;
}

namespace {

struct IndexRect {
  std::size_t x_lo, x_hi, z_lo, z_hi;  // inclusive

  bool overlaps(const IndexRect& other) const {
    return x_lo <= other.x_hi && other.x_lo <= x_hi && z_lo <= other.z_hi &&
           other.z_lo <= z_hi;
  }
};

IndexRect to_indices(const Rect& rect, const ImageGrid& grid,
                     const char* what) {
  if (!(rect.x_min <= rect.x_max) || !(rect.z_min <= rect.z_max)) {
    throw std::invalid_argument(std::string("image_snr: malformed ") + what +
                                " region");
  }
  IndexRect out{grid.nearest_x_index(rect.x_min), grid.nearest_x_index(rect.x_max),
                grid.nearest_z_index(rect.z_min), grid.nearest_z_index(rect.z_max)};
  return out;
}

}  // namespace

double image_snr(const BeamformedImage& db_image, const ImageGrid& grid,
                 std::span<const Rect> target_regions,
                 const Rect& background_region) {
  if (db_image.stage != ImageStage::db) {
    throw std::invalid_argument("image_snr: expected a dB image");
  }
  if (target_regions.empty()) {
    throw std::invalid_argument("image_snr: need at least one target region");
  }
  const IndexRect background = to_indices(background_region, grid, "background");
  std::vector<IndexRect> targets;
  targets.reserve(target_regions.size());
  for (const Rect& r : target_regions) {
    targets.push_back(to_indices(r, grid, "target"));
    if (targets.back().overlaps(background)) {
      throw std::invalid_argument(
          "image_snr: target and background regions overlap");
    }
  }

  double target_max = -std::numeric_limits<double>::infinity();
  for (const IndexRect& t : targets) {
    for (std::size_t ix = t.x_lo; ix <= t.x_hi; ++ix) {
      for (std::size_t iz = t.z_lo; iz <= t.z_hi; ++iz) {
        target_max = std::max(target_max, db_image.at(ix, iz));
      }
    }
  }
  double background_sum = 0.0;
  std::size_t background_count = 0;
  for (std::size_t ix = background.x_lo; ix <= background.x_hi; ++ix) {
    for (std::size_t iz = background.z_lo; iz <= background.z_hi; ++iz) {
      background_sum += db_image.at(ix, iz);
      ++background_count;
    }
  }
  if (background_count == 0) {
    throw std::invalid_argument("image_snr: empty background region");
  }
  return target_max - background_sum / double(background_count);
}

}  // namespace pabeam::metrics
