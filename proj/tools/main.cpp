// pabeam - simulate point-absorber RF data and reconstruct it with
// DAS/DMAS-family beamformers.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pabeam/beamform.hpp"
#include "pabeam/dataio.hpp"
#include "pabeam/metrics.hpp"
#include "pabeam/simulate.hpp"
#include "pabeam/types.hpp"

namespace {

using nlohmann::json;
using namespace pabeam;

struct GeometryConfig {
  std::size_t num_elements = 128;
  double pitch_m = 0.15625e-3;
  double center_x_m = 0.0;
};

struct GridConfig {
  double x_min_m = -10e-3;
  double x_max_m = 10e-3;
  double z_min_m = 0.0;
  double z_max_m = 60e-3;
  double dx_m = 0.1e-3;
  double dz_m = 0.1e-3;

  ImageGrid build() const {
    return build_grid(x_min_m, x_max_m, z_min_m, z_max_m, dx_m, dz_m);
  }
};

// Full experiment description; a config file mirrors these fields and
// command-line flags override it.
struct ExperimentConfig {
  GeometryConfig geometry;
  PulseSpec pulse{7e6, 0.77};
  std::optional<std::string> phantom_preset;
  std::optional<Phantom> phantom_inline;
  double sampling_frequency_hz = 50e6;
  double speed_of_sound_m_s = 1540.0;
  std::size_t num_samples = 2500;
  double snr_db = 50.0;
  std::uint64_t seed = 1;
  GridConfig grid;
  std::vector<std::string> methods{"das",  "das-cf",  "dmas",
                                   "dmas-cf", "mdmas", "mdmas-cf"};
  double dynamic_range_db = 60.0;

  Phantom resolve_phantom() const {
    if (phantom_inline) return *phantom_inline;
    if (phantom_preset) return preset_phantom(*phantom_preset);
    throw std::runtime_error("no phantom configured (use --preset or a config file)");
  }
};

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed config '" + path + "': " + e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    cfg.geometry.num_elements =
        g.value("num_elements", cfg.geometry.num_elements);
    cfg.geometry.pitch_m = g.value("pitch_m", cfg.geometry.pitch_m);
    cfg.geometry.center_x_m = g.value("center_x_m", cfg.geometry.center_x_m);
  }
  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    cfg.pulse.center_frequency_hz =
        p.value("center_frequency_hz", cfg.pulse.center_frequency_hz);
    cfg.pulse.fractional_bandwidth =
        p.value("fractional_bandwidth", cfg.pulse.fractional_bandwidth);
  }
  if (j.contains("phantom")) {
    const json& p = j.at("phantom");
    if (p.is_string()) {
      cfg.phantom_preset = p.get<std::string>();
    } else {
      Phantom phantom;
      for (const json& a : p.at("absorbers")) {
        phantom.absorbers.push_back({a.at(0).get<double>(),
                                     a.at(1).get<double>(),
                                     a.at(2).get<double>(),
                                     a.at(3).get<double>()});
      }
      cfg.phantom_inline = std::move(phantom);
    }
  }
  cfg.sampling_frequency_hz =
      j.value("sampling_frequency_hz", cfg.sampling_frequency_hz);
  cfg.speed_of_sound_m_s = j.value("speed_of_sound_m_s", cfg.speed_of_sound_m_s);
  cfg.num_samples = j.value("num_samples", cfg.num_samples);
  cfg.snr_db = j.value("snr_db", cfg.snr_db);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    cfg.grid.x_min_m = g.value("x_min_m", cfg.grid.x_min_m);
    cfg.grid.x_max_m = g.value("x_max_m", cfg.grid.x_max_m);
    cfg.grid.z_min_m = g.value("z_min_m", cfg.grid.z_min_m);
    cfg.grid.z_max_m = g.value("z_max_m", cfg.grid.z_max_m);
    cfg.grid.dx_m = g.value("dx_m", cfg.grid.dx_m);
    cfg.grid.dz_m = g.value("dz_m", cfg.grid.dz_m);
  }
  if (j.contains("methods")) {
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
  }
  cfg.dynamic_range_db = j.value("dynamic_range_db", cfg.dynamic_range_db);
  return cfg;
}

BeamformedImage reconstruct_db(const io::Dataset& ds, const ImageGrid& grid,
                               const MethodSpec& method, double dynamic_range_db,
                               unsigned threads) {
  const BeamformedImage raw =
      beamform_image(ds.frame, ds.geometry, grid, method,
                     ds.frame.speed_of_sound_m_s, threads);
  return log_compress(envelope(raw), dynamic_range_db);
}

std::string format_depth_tag(double depth_m) {
  std::ostringstream os;
  os << depth_m * 1e3 << "mm";
  return os.str();
}

int run_simulate(const std::string& config_path, const std::string& preset,
                 const std::optional<double>& snr_db,
                 const std::optional<std::uint64_t>& seed,
                 const std::string& out_prefix) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = load_config(config_path);
  }
  if (!preset.empty()) {
    cfg.phantom_preset = preset;
    cfg.phantom_inline.reset();
  }
  if (snr_db) cfg.snr_db = *snr_db;
  if (seed) cfg.seed = *seed;

  const ArrayGeometry geometry = build_linear_array(
      cfg.geometry.num_elements, cfg.geometry.pitch_m, cfg.geometry.center_x_m);
  const Phantom phantom = cfg.resolve_phantom();
  RfFrame frame =
      simulate_frame(phantom, geometry, cfg.sampling_frequency_hz,
                     cfg.speed_of_sound_m_s, cfg.num_samples, cfg.pulse);
  const NoiseSpec noise{cfg.snr_db, cfg.seed};
  frame = add_gaussian_noise(frame, noise);

  io::DatasetMetadata metadata;
  metadata.pulse = cfg.pulse;
  metadata.phantom = phantom;
  metadata.noise = noise;
  io::write_dataset(out_prefix, frame, geometry, metadata);

  std::cout << "wrote " << out_prefix << ".json and " << out_prefix
            << ".f32 (" << frame.num_channels << " channels x "
            << frame.num_samples << " samples)\n";
  return 0;
}

int run_beamform(const std::string& data_prefix, const std::string& method_name,
                 const GridConfig& grid_cfg, double dynamic_range_db,
                 unsigned threads, const std::string& out_prefix) {
  const MethodSpec method = MethodSpec::parse(method_name);
  const io::Dataset ds = io::read_dataset(data_prefix);
  const ImageGrid grid = grid_cfg.build();
  const BeamformedImage db =
      reconstruct_db(ds, grid, method, dynamic_range_db, threads);
  io::write_image(out_prefix, db, grid, method.name());
  std::cout << "wrote " << out_prefix << ".pgm, .f32 and .json ("
            << grid.nx << " x " << grid.nz << " pixels, " << method.name()
            << ")\n";
  return 0;
}

int run_profile(const std::string& image_prefix, double depth_mm,
                const std::string& out_path) {
  const io::StoredImage stored = io::read_image(image_prefix);
  const metrics::LateralProfile profile =
      metrics::lateral_profile(stored.image, stored.grid, depth_mm * 1e-3);
  io::write_profile_csv(profile, out_path);
  std::cout << "wrote " << out_path << " (depth "
            << profile.depth * 1e3 << " mm, " << profile.values_db.size()
            << " samples)\n";
  return 0;
}

int run_compare(const std::string& data_prefix,
                const std::vector<std::string>& method_names,
                const std::vector<double>& depths_mm,
                const GridConfig& grid_cfg, double dynamic_range_db,
                unsigned threads, const std::string& report_path) {
  std::vector<MethodSpec> methods;
  for (const std::string& name : method_names) {
    methods.push_back(MethodSpec::parse(name));
  }
  if (depths_mm.empty()) {
    throw std::runtime_error("need at least one depth");
  }

  const io::Dataset ds = io::read_dataset(data_prefix);
  const ImageGrid grid = grid_cfg.build();

  struct Entry {
    metrics::ProfileReport report;
    double fwhm_mean = 0.0;
  };
  // entries[depth][method]
  std::vector<std::vector<Entry>> entries(depths_mm.size());

  std::vector<std::pair<std::string, double>> rows;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    BeamformedImage db;
    try {
      db = reconstruct_db(ds, grid, methods[mi], dynamic_range_db, threads);
    } catch (const std::exception& e) {
      throw std::runtime_error("reconstruction failed for " +
                               methods[mi].name() + ": " + e.what());
    }
    for (std::size_t di = 0; di < depths_mm.size(); ++di) {
      Entry entry;
      try {
        const metrics::LateralProfile profile =
            metrics::lateral_profile(db, grid, depths_mm[di] * 1e-3);
        const auto peaks = metrics::find_peaks(profile, 2);
        entry.report.method = methods[mi].name();
        entry.report.depth = profile.depth;
        for (const auto& peak : peaks) {
          entry.report.peak_positions.push_back(peak.position);
          entry.report.peak_values_db.push_back(peak.value_db);
        }
        entry.report.valley_db = metrics::valley_depth(profile, peaks[0], peaks[1]);
        const std::vector<metrics::LobeExtent> lobes{
            metrics::main_lobe_extent(profile, peaks[0]),
            metrics::main_lobe_extent(profile, peaks[1])};
        entry.report.sidelobe_level_db = metrics::sidelobe_level(profile, lobes);
        double fwhm_sum = 0.0;
        for (const auto& peak : peaks) {
          entry.report.fwhm_m.push_back(metrics::fwhm(profile, peak));
          fwhm_sum += entry.report.fwhm_m.back();
        }
        entry.fwhm_mean = fwhm_sum / double(peaks.size());
      } catch (const std::exception& e) {
        throw std::runtime_error("profile analysis failed for " +
                                 methods[mi].name() + " at " +
                                 std::to_string(depths_mm[di]) + " mm: " +
                                 e.what());
      }
      for (auto& row : entry.report.rows()) rows.push_back(std::move(row));
      entries[di].push_back(std::move(entry));
    }
  }

  // Pairwise deltas per depth, later method minus earlier method.
  for (std::size_t di = 0; di < depths_mm.size(); ++di) {
    const std::string depth_tag = format_depth_tag(entries[di][0].report.depth);
    for (std::size_t a = 0; a < methods.size(); ++a) {
      for (std::size_t b = a + 1; b < methods.size(); ++b) {
        const Entry& ea = entries[di][a];
        const Entry& eb = entries[di][b];
        const std::string suffix =
            methods[b].name() + "_minus_" + methods[a].name();
        rows.emplace_back("delta." + depth_tag + ".valley_db." + suffix,
                          eb.report.valley_db - ea.report.valley_db);
        rows.emplace_back("delta." + depth_tag + ".sidelobe_db." + suffix,
                          eb.report.sidelobe_level_db - ea.report.sidelobe_level_db);
        rows.emplace_back("delta." + depth_tag + ".fwhm_mean_mm." + suffix,
                          (eb.fwhm_mean - ea.fwhm_mean) * 1e3);
      }
    }
  }

  io::write_report_csv(rows, report_path);
  std::cout << "wrote " << report_path << " (" << methods.size()
            << " methods x " << depths_mm.size() << " depths)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photoacoustic beamforming toolkit: simulate point-absorber "
               "RF data, reconstruct with DAS/DMAS-family beamformers, and "
               "measure lateral resolution and sidelobe behavior"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Synthesize a noisy multi-channel dataset");
  std::string config_path, preset, sim_out;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
  auto* config_opt = simulate->add_option(
      "--config", config_path, "JSON experiment config file");
  simulate->add_option("--preset", preset, "Built-in phantom preset")
      ->check(CLI::IsMember({"fig1", "fig3"}))
      ->excludes(config_opt);
  simulate->add_option("--snr-db", snr_db, "Signal-to-noise ratio in dB");
  simulate->add_option("--seed", seed, "Noise generator seed");
  simulate->add_option("--out", sim_out, "Output path prefix")->required();

  // shared grid flags for beamform/compare
  auto add_grid_flags = [](CLI::App* cmd, GridConfig& grid) {
    auto mm = [](double* target) {
      return [target](double value_mm) { *target = value_mm * 1e-3; };
    };
    cmd->add_option_function<double>("--x-min-mm", mm(&grid.x_min_m),
                                     "Lateral grid start [mm]");
    cmd->add_option_function<double>("--x-max-mm", mm(&grid.x_max_m),
                                     "Lateral grid end [mm]");
    cmd->add_option_function<double>("--z-min-mm", mm(&grid.z_min_m),
                                     "Axial grid start [mm]");
    cmd->add_option_function<double>("--z-max-mm", mm(&grid.z_max_m),
                                     "Axial grid end [mm]");
    cmd->add_option_function<double>("--dx-mm", mm(&grid.dx_m),
                                     "Lateral pixel size [mm]");
    cmd->add_option_function<double>("--dz-mm", mm(&grid.dz_m),
                                     "Axial pixel size [mm]");
  };

  // beamform
  auto* beamform = app.add_subcommand(
      "beamform", "Reconstruct a dB image from a dataset");
  std::string bf_data, bf_method, bf_out;
  GridConfig bf_grid;
  double bf_dr = 60.0;
  unsigned bf_threads = 0;
  beamform->add_option("--data", bf_data, "Dataset path prefix")->required();
  beamform->add_option("--method", bf_method, "Beamforming method")
      ->required()
      ->check(CLI::IsMember({"das", "das-cf", "dmas", "dmas-cf", "mdmas",
                             "mdmas-cf"}));
  add_grid_flags(beamform, bf_grid);
  beamform->add_option("--dr", bf_dr, "Display dynamic range [dB]")
      ->check(CLI::PositiveNumber);
  beamform->add_option("--threads", bf_threads,
                       "Worker threads (0 = hardware)");
  beamform->add_option("--out", bf_out, "Output path prefix")->required();

  // profile
  auto* profile = app.add_subcommand(
      "profile", "Extract a lateral profile from a stored image");
  std::string pr_image, pr_out;
  double pr_depth_mm = 0.0;
  profile->add_option("--image", pr_image, "Image path prefix")->required();
  profile->add_option("--depth-mm", pr_depth_mm, "Profile depth [mm]")
      ->required();
  profile->add_option("--out", pr_out, "Output CSV path")->required();

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Run several methods and report profile metrics");
  std::string cm_data, cm_report;
  std::vector<std::string> cm_methods;
  std::vector<double> cm_depths_mm;
  GridConfig cm_grid;
  double cm_dr = 60.0;
  unsigned cm_threads = 0;
  compare->add_option("--data", cm_data, "Dataset path prefix")->required();
  compare->add_option("--methods", cm_methods, "Comma-separated method list")
      ->required()
      ->delimiter(',');
  compare->add_option("--depths-mm", cm_depths_mm,
                      "Comma-separated profile depths [mm]")
      ->required()
      ->delimiter(',');
  add_grid_flags(compare, cm_grid);
  compare->add_option("--dr", cm_dr, "Analysis dynamic range [dB]")
      ->check(CLI::PositiveNumber);
  compare->add_option("--threads", cm_threads, "Worker threads (0 = hardware)");
  compare->add_option("--report", cm_report, "Output report CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (config_path.empty() && preset.empty()) {
        std::cerr << "error: simulate needs --config or --preset\n";
        return 2;
      }
      return run_simulate(config_path, preset, snr_db, seed, sim_out);
    }
    if (beamform->parsed()) {
      return run_beamform(bf_data, bf_method, bf_grid, bf_dr, bf_threads,
                          bf_out);
    }
    if (profile->parsed()) {
      return run_profile(pr_image, pr_depth_mm, pr_out);
    }
    if (compare->parsed()) {
      return run_compare(cm_data, cm_methods, cm_depths_mm, cm_grid, cm_dr,
                         cm_threads, cm_report);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
