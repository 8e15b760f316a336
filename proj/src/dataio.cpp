#include "pabeam/dataio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pabeam::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

// Scratch-then-rename so a failed write never leaves a partial file.
// Multi-file outputs finish every scratch file before publishing any of
// them.
class AtomicFile {
 public:
  explicit AtomicFile(const std::string& path)
      : final_path_(path), tmp_path_(path + ".tmp") {
    stream_.open(tmp_path_, std::ios::binary | std::ios::trunc);
    if (!stream_) {
      throw std::runtime_error("cannot open '" + tmp_path_ + "' for writing");
    }
  }

  ~AtomicFile() {
    if (!published_) {
      stream_.close();
      std::error_code ec;
      fs::remove(tmp_path_, ec);
    }
  }

  std::ofstream& stream() { return stream_; }

  void finish() {
    stream_.flush();
    if (!stream_) {
      throw std::runtime_error("write to '" + tmp_path_ + "' failed");
    }
    stream_.close();
  }

  void publish() {
    fs::rename(tmp_path_, final_path_);
    published_ = true;
  }

  void commit() {
    finish();
    publish();
  }

 private:
  std::string final_path_;
  std::string tmp_path_;
  std::ofstream stream_;
  bool published_ = false;
};

void write_f32_le(std::ofstream& out, const std::vector<double>& values) {
  std::vector<unsigned char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = float(values[i]);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    bytes[4 * i + 0] = (unsigned char)(u & 0xff);
    bytes[4 * i + 1] = (unsigned char)((u >> 8) & 0xff);
    bytes[4 * i + 2] = (unsigned char)((u >> 16) & 0xff);
    bytes[4 * i + 3] = (unsigned char)((u >> 24) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
}

std::vector<double> read_f32_le(const std::string& path,
                                std::size_t expected_count,
                                const char* what) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  if (size != expected_count * 4) {
    throw std::runtime_error("size mismatch: '" + path + "' holds " +
                             std::to_string(size) + " bytes, " + what +
                             " declares " + std::to_string(expected_count * 4));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  std::vector<unsigned char> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(size));
  if (!in) {
    throw std::runtime_error("short read from '" + path + "'");
  }
  std::vector<double> values(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    const std::uint32_t u = std::uint32_t(bytes[4 * i + 0]) |
                            (std::uint32_t(bytes[4 * i + 1]) << 8) |
                            (std::uint32_t(bytes[4 * i + 2]) << 16) |
                            (std::uint32_t(bytes[4 * i + 3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    values[i] = double(f);
  }
  return values;
}

json grid_to_json(const ImageGrid& grid) {
  return json{{"x_min_m", grid.x_min}, {"x_max_m", grid.x_max},
              {"z_min_m", grid.z_min}, {"z_max_m", grid.z_max},
              {"dx_m", grid.dx},       {"dz_m", grid.dz},
              {"nx", grid.nx},         {"nz", grid.nz}};
}

ImageGrid grid_from_json(const json& j) {
  ImageGrid grid = build_grid(j.at("x_min_m").get<double>(),
                              j.at("x_max_m").get<double>(),
                              j.at("z_min_m").get<double>(),
                              j.at("z_max_m").get<double>(),
                              j.at("dx_m").get<double>(),
                              j.at("dz_m").get<double>());
  if (grid.nx != j.at("nx").get<std::size_t>() ||
      grid.nz != j.at("nz").get<std::size_t>()) {
    throw std::runtime_error("image grid descriptor is inconsistent");
  }
  return grid;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset(const std::string& path_prefix, const RfFrame& frame,
                   const ArrayGeometry& geometry,
                   const DatasetMetadata& metadata) {
  if (frame.samples.size() != frame.num_channels * frame.num_samples) {
    throw std::invalid_argument("write_dataset: frame shape mismatch");
  }
  if (frame.num_channels != geometry.num_elements()) {
    throw std::invalid_argument(
        "write_dataset: frame channels do not match array elements");
  }

  json header{
      {"format_version", kFormatVersion},
      {"num_channels", frame.num_channels},
      {"num_samples", frame.num_samples},
      {"sampling_frequency_hz", frame.sampling_frequency_hz},
      {"speed_of_sound_m_s", frame.speed_of_sound_m_s},
      {"pitch_m", geometry.pitch},
      {"aperture_center_x_m", geometry.aperture_center_x},
      {"pulse",
       {{"center_frequency_hz", metadata.pulse.center_frequency_hz},
        {"fractional_bandwidth", metadata.pulse.fractional_bandwidth}}},
  };
  json positions = json::array();
  for (const Vec2& e : geometry.element_positions) {
    positions.push_back(json::array({e.x, e.z}));
  }
  header["element_positions"] = std::move(positions);
  if (metadata.phantom) {
    json absorbers = json::array();
    for (const Absorber& a : metadata.phantom->absorbers) {
      absorbers.push_back(json::array({a.x, a.z, a.amplitude, a.radius_m}));
    }
    header["phantom"] = std::move(absorbers);
  }
  if (metadata.noise) {
    header["noise"] = {{"snr_db", metadata.noise->snr_db},
                       {"seed", metadata.noise->seed}};
  }

  AtomicFile header_file(path_prefix + ".json");
  header_file.stream() << header.dump(2) << '\n';
  AtomicFile payload_file(path_prefix + ".f32");
  write_f32_le(payload_file.stream(), frame.samples);
  header_file.finish();
  payload_file.finish();
  header_file.publish();
  payload_file.publish();
}

Dataset read_dataset(const std::string& path_prefix) {
  const json header = load_json(path_prefix + ".json");
  const int version = header.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw std::runtime_error("unknown format_version " +
                             std::to_string(version) + " in '" + path_prefix +
                             ".json'");
  }

  Dataset ds;
  ds.frame.num_channels = header.at("num_channels").get<std::size_t>();
  ds.frame.num_samples = header.at("num_samples").get<std::size_t>();
  ds.frame.sampling_frequency_hz =
      header.at("sampling_frequency_hz").get<double>();
  ds.frame.speed_of_sound_m_s = header.at("speed_of_sound_m_s").get<double>();

  const json& positions = header.at("element_positions");
  if (positions.size() != ds.frame.num_channels) {
    throw std::runtime_error(
        "header element count does not match num_channels");
  }
  ds.geometry.pitch = header.at("pitch_m").get<double>();
  ds.geometry.aperture_center_x = header.at("aperture_center_x_m").get<double>();
  for (const json& p : positions) {
    ds.geometry.element_positions.push_back(
        {p.at(0).get<double>(), p.at(1).get<double>()});
  }

  ds.metadata.pulse.center_frequency_hz =
      header.at("pulse").at("center_frequency_hz").get<double>();
  ds.metadata.pulse.fractional_bandwidth =
      header.at("pulse").at("fractional_bandwidth").get<double>();
  if (header.contains("phantom")) {
    Phantom phantom;
    for (const json& a : header.at("phantom")) {
      phantom.absorbers.push_back({a.at(0).get<double>(), a.at(1).get<double>(),
                                   a.at(2).get<double>(),
                                   a.at(3).get<double>()});
    }
    ds.metadata.phantom = std::move(phantom);
  }
  if (header.contains("noise")) {
    ds.metadata.noise =
        NoiseSpec{header.at("noise").at("snr_db").get<double>(),
                  header.at("noise").at("seed").get<std::uint64_t>()};
  }

  ds.frame.samples = read_f32_le(path_prefix + ".f32",
                                 ds.frame.num_channels * ds.frame.num_samples,
                                 "header");
  const FrameValidation check = validate_frame(ds.frame, ds.geometry);
  if (!check.ok) {
    throw std::runtime_error("dataset '" + path_prefix +
                             "' is inconsistent: " + check.summary());
  }
  return ds;
}

namespace {

void render_pgm(const BeamformedImage& db_image, double dynamic_range_db,
                std::ofstream& out) {
  if (db_image.stage != ImageStage::db) {
    throw std::invalid_argument("write_pgm: expected a dB image");
  }
  if (!(dynamic_range_db > 0.0)) {
    throw std::invalid_argument("write_pgm: dynamic range must be positive");
  }
  out << "P5\n" << db_image.nx << " " << db_image.nz << "\n255\n";
  std::vector<unsigned char> row(db_image.nx);
  for (std::size_t iz = 0; iz < db_image.nz; ++iz) {
    for (std::size_t ix = 0; ix < db_image.nx; ++ix) {
      const double v = db_image.at(ix, iz);
      const double level =
          std::floor(255.0 * (v + dynamic_range_db) / dynamic_range_db + 0.5);
      row[ix] = (unsigned char)(std::clamp(level, 0.0, 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              std::streamsize(row.size()));
  }
}

}  // namespace

void write_pgm(const BeamformedImage& db_image, const std::string& path,
               double dynamic_range_db) {
  AtomicFile file(path);
  render_pgm(db_image, dynamic_range_db, file.stream());
  file.commit();
}

void write_profile_csv(const metrics::LateralProfile& profile,
                       const std::string& path) {
  AtomicFile file(path);
  std::ofstream& out = file.stream();
  out << "lateral_mm,amplitude_db\n";
  for (std::size_t i = 0; i < profile.lateral_positions.size(); ++i) {
    out << format_value(profile.lateral_positions[i] * 1e3) << ","
        << format_value(profile.values_db[i]) << "\n";
  }
  file.commit();
}

void write_report_csv(std::span<const std::pair<std::string, double>> rows,
                      const std::string& path) {
  AtomicFile file(path);
  std::ofstream& out = file.stream();
  out << "metric,value\n";
  for (const auto& [metric, value] : rows) {
    out << metric << "," << format_value(value) << "\n";
  }
  file.commit();
}

void write_profile_csv(const metrics::ProfileReport& report,
                       const std::string& path) {
  const auto rows = report.rows();
  write_report_csv(rows, path);
}

void write_image(const std::string& path_prefix,
                 const BeamformedImage& db_image, const ImageGrid& grid,
                 const std::string& method) {
  if (db_image.stage != ImageStage::db) {
    throw std::invalid_argument("write_image: expected a dB image");
  }
  if (db_image.nx != grid.nx || db_image.nz != grid.nz) {
    throw std::invalid_argument("write_image: image does not match grid");
  }
  json descriptor{{"kind", "image"},
                  {"format_version", kFormatVersion},
                  {"stage", to_string(db_image.stage)},
                  {"dynamic_range_db", db_image.dynamic_range_db},
                  {"method", method},
                  {"grid", grid_to_json(grid)}};

  AtomicFile header_file(path_prefix + ".json");
  header_file.stream() << descriptor.dump(2) << '\n';
  AtomicFile payload_file(path_prefix + ".f32");
  write_f32_le(payload_file.stream(), db_image.values);
  AtomicFile pgm_file(path_prefix + ".pgm");
  render_pgm(db_image, db_image.dynamic_range_db, pgm_file.stream());
  header_file.finish();
  payload_file.finish();
  pgm_file.finish();
  header_file.publish();
  payload_file.publish();
  pgm_file.publish();
}

StoredImage read_image(const std::string& path_prefix) {
  const json descriptor = load_json(path_prefix + ".json");
  if (descriptor.value("kind", "") != "image") {
    throw std::runtime_error("'" + path_prefix + ".json' is not an image descriptor");
  }
  const int version = descriptor.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw std::runtime_error("unknown format_version " +
                             std::to_string(version) + " in '" + path_prefix +
                             ".json'");
  }
  StoredImage stored;
  stored.grid = grid_from_json(descriptor.at("grid"));
  stored.method = descriptor.at("method").get<std::string>();
  stored.image.nx = stored.grid.nx;
  stored.image.nz = stored.grid.nz;
  stored.image.stage = image_stage_from_string(descriptor.at("stage").get<std::string>());
  stored.image.dynamic_range_db = descriptor.at("dynamic_range_db").get<double>();
  stored.image.values = read_f32_le(path_prefix + ".f32",
                                    stored.grid.nx * stored.grid.nz,
                                    "descriptor");
  return stored;
}

}  // namespace pabeam::io
