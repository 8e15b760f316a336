#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "pabeam/metrics.hpp"
#include "pabeam/simulate.hpp"
#include "pabeam/types.hpp"

namespace pabeam::io {

/// Acquisition context stored alongside the traces.
struct DatasetMetadata {
  PulseSpec pulse;
  std::optional<Phantom> phantom;
  std::optional<NoiseSpec> noise;
};

struct Dataset {
  RfFrame frame;
  ArrayGeometry geometry;
  DatasetMetadata metadata;
};

/// Writes `prefix`.json (UTF-8 header) and `prefix`.f32 (raw little-endian
/// 32-bit floats, channel-major). Both files are written atomically; on
/// failure no partial output is left behind.
void write_dataset(const std::string& path_prefix, const RfFrame& frame,
                   const ArrayGeometry& geometry,
                   const DatasetMetadata& metadata);

/// Inverse of write_dataset. Samples round-trip at 32-bit precision,
/// header fields exactly. Throws std::runtime_error on a header/payload
/// size mismatch or an unknown format version.
Dataset read_dataset(const std::string& path_prefix);

/// Binary PGM ("P5") render of a dB image: 0 dB maps to 255, -DR to 0,
/// round-half-up in between; axial axis down, lateral axis right.
void write_pgm(const BeamformedImage& db_image, const std::string& path,
               double dynamic_range_db);

/// CSV with header "lateral_mm,amplitude_db", one row per profile sample.
/// Values carry enough digits to reparse exactly.
void write_profile_csv(const metrics::LateralProfile& profile,
                       const std::string& path);

/// CSV with header "metric,value"; used for single reports and for the
/// comparison summaries emitted by the CLI.
void write_report_csv(std::span<const std::pair<std::string, double>> rows,
                      const std::string& path);
void write_profile_csv(const metrics::ProfileReport& report,
                       const std::string& path);

/// Reconstructed-image persistence used by the CLI: `prefix`.json grid
/// descriptor, `prefix`.f32 dB values (x-major float32), `prefix`.pgm
/// render.
struct StoredImage {
  BeamformedImage image;  // stage == db
  ImageGrid grid;
  std::string method;
};

void write_image(const std::string& path_prefix, const BeamformedImage& db_image,
                 const ImageGrid& grid, const std::string& method);
StoredImage read_image(const std::string& path_prefix);

}  // namespace pabeam::io
