// End-to-end tests driving the pabeam binary.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PABEAM_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pabeam_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double report_value(const std::string& csv_text, const std::string& metric) {
  std::istringstream in(csv_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(metric + ",", 0) == 0) {
      return std::stod(line.substr(metric.size() + 1));
    }
  }
  FAIL("metric not found: ", metric);
  return 0.0;
}

int count_lines_containing(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    if (line.find(needle) != std::string::npos) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("simulate presets write datasets with the configured geometry") {
  TempDir dir;
  REQUIRE(run("simulate --preset fig1 --snr-db 50 --seed 1 --out " +
              (dir / "d1")) == 0);
  const auto header = nlohmann::json::parse(slurp(dir / "d1.json"));
  CHECK(header.at("num_channels") == 128);
  CHECK(header.at("sampling_frequency_hz") == 50e6);
  CHECK(header.at("speed_of_sound_m_s") == 1540.0);
  CHECK(header.at("phantom").size() == 14);
  CHECK(fs::file_size(dir / "d1.f32") == 128 * 2500 * 4);

  REQUIRE(run("simulate --preset fig3 --snr-db 10 --seed 1 --out " +
              (dir / "d3")) == 0);
  const auto header3 = nlohmann::json::parse(slurp(dir / "d3.json"));
  CHECK(header3.at("phantom").size() == 8);
  CHECK(header3.at("noise").at("snr_db") == 10.0);
}

TEST_CASE("simulate honors a config file with an inline phantom") {
  TempDir dir;
  nlohmann::json cfg{
      {"geometry", {{"num_elements", 32}, {"pitch_m", 0.3e-3}}},
      {"phantom", {{"absorbers", {{0.0, 20e-3, 1.0, 0.1e-3}}}}},
      {"num_samples", 1500},
      {"snr_db", 40.0},
      {"seed", 7}};
  {
    std::ofstream out(dir / "cfg.json");
    out << cfg.dump(2);
  }
  REQUIRE(run("simulate --config " + (dir / "cfg.json") + " --out " +
              (dir / "d")) == 0);
  const auto header = nlohmann::json::parse(slurp(dir / "d.json"));
  CHECK(header.at("num_channels") == 32);
  CHECK(header.at("num_samples") == 1500);
  CHECK(header.at("noise").at("snr_db") == 40.0);
}

TEST_CASE("simulate with a missing config fails without partial output") {
  TempDir dir;
  CHECK(run("simulate --config " + (dir / "nope.json") + " --out " +
            (dir / "d")) != 0);
  CHECK_FALSE(fs::exists(dir / "d.json"));
  CHECK_FALSE(fs::exists(dir / "d.f32"));
}

TEST_CASE("simulate without a phantom source fails") {
  TempDir dir;
  CHECK(run("simulate --out " + (dir / "d")) != 0);
}

TEST_CASE("simulate rejects --preset combined with --config") {
  TempDir dir;
  CHECK(run("simulate --preset fig1 --config " + (dir / "cfg.json") +
            " --out " + (dir / "d")) != 0);
}

TEST_CASE("profile on a missing image prefix fails") {
  TempDir dir;
  CHECK(run("profile --image " + (dir / "missing") + " --depth-mm 50 --out " +
            (dir / "p.csv")) != 0);
  CHECK_FALSE(fs::exists(dir / "p.csv"));
}

TEST_CASE("beamform writes a normalized image deterministically") {
  TempDir dir;
  REQUIRE(run("simulate --preset fig1 --snr-db 50 --seed 1 --out " +
              (dir / "d")) == 0);

  const std::string grid_flags =
      " --x-min-mm -6 --x-max-mm 6 --z-min-mm 20 --z-max-mm 32 "
      "--dx-mm 0.1 --dz-mm 0.1 --threads 2 ";

  REQUIRE(run("beamform --data " + (dir / "d") + " --method mdmas" +
              grid_flags + "--out " + (dir / "m1")) == 0);
  const std::string pgm = slurp(dir / "m1.pgm");
  CHECK(pgm.substr(0, 2) == "P5");
  CHECK(pgm.find(char(255)) != std::string::npos);

  SUBCASE("byte-identical on a rerun") {
    REQUIRE(run("beamform --data " + (dir / "d") + " --method das" +
                grid_flags + "--out " + (dir / "a1")) == 0);
    REQUIRE(run("beamform --data " + (dir / "d") + " --method das" +
                grid_flags + "--out " + (dir / "a2")) == 0);
    CHECK(slurp(dir / "a1.pgm") == slurp(dir / "a2.pgm"));
    CHECK(slurp(dir / "a1.f32") == slurp(dir / "a2.f32"));
    CHECK(slurp(dir / "a1.json") == slurp(dir / "a2.json"));
  }

  SUBCASE("unknown method is a usage error") {
    CHECK(run("beamform --data " + (dir / "d") + " --method mv --out " +
              (dir / "x")) != 0);
    CHECK_FALSE(fs::exists(dir / "x.pgm"));
  }

  SUBCASE("inverted grid bounds fail") {
    CHECK(run("beamform --data " + (dir / "d") +
              " --method das --z-min-mm 30 --z-max-mm 20 --out " +
              (dir / "x")) != 0);
  }
}

TEST_CASE("profile emits a renormalized CSV at the requested depth") {
  TempDir dir;
  REQUIRE(run("simulate --preset fig1 --snr-db 50 --seed 1 --out " +
              (dir / "d")) == 0);
  REQUIRE(run("beamform --data " + (dir / "d") +
              " --method das --x-min-mm -8 --x-max-mm 8 --z-min-mm 45 "
              "--z-max-mm 56 --dx-mm 0.1 --dz-mm 0.1 --threads 2 --out " +
              (dir / "img")) == 0);

  SUBCASE("depth 50 mm") {
    REQUIRE(run("profile --image " + (dir / "img") + " --depth-mm 50 --out " +
                (dir / "p50.csv")) == 0);
    const std::string text = slurp(dir / "p50.csv");
    CHECK(text.rfind("lateral_mm,amplitude_db", 0) == 0);
    // Renormalized: the row maximum is exactly 0 dB.
    double max_db = -1e9;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      max_db = std::max(max_db, std::stod(line.substr(line.find(',') + 1)));
      ++rows;
    }
    CHECK(max_db == 0.0);
    CHECK(rows == 161);
  }

  SUBCASE("depth 55 mm") {
    CHECK(run("profile --image " + (dir / "img") + " --depth-mm 55 --out " +
              (dir / "p55.csv")) == 0);
  }

  SUBCASE("depth outside the image fails") {
    CHECK(run("profile --image " + (dir / "img") + " --depth-mm 500 --out " +
              (dir / "bad.csv")) != 0);
    CHECK_FALSE(fs::exists(dir / "bad.csv"));
  }
}

TEST_CASE("compare reports per-method metrics and pairwise deltas") {
  TempDir dir;
  REQUIRE(run("simulate --preset fig1 --snr-db 50 --seed 1 --out " +
              (dir / "d")) == 0);
  REQUIRE(run("compare --data " + (dir / "d") +
              " --methods das,dmas,mdmas --depths-mm 50,55 "
              "--x-min-mm -8 --x-max-mm 8 --z-min-mm 10 --z-max-mm 58 "
              "--dx-mm 0.1 --dz-mm 0.1 --dr 80 --threads 0 --report " +
              (dir / "report.csv")) == 0);

  const std::string text = slurp(dir / "report.csv");
  CHECK(text.rfind("metric,value", 0) == 0);
  // One report block per (method, depth).
  CHECK(count_lines_containing(text, ".valley_db,") == 6);
  CHECK(count_lines_containing(text, "das.50mm.peak1_x_mm,") == 1);

  // Better-resolved pair for the two-stage method.
  const double delta =
      report_value(text, "delta.55mm.valley_db.mdmas_minus_dmas");
  CHECK(delta > 0.0);

  SUBCASE("reports are deterministic across thread counts") {
    REQUIRE(run("compare --data " + (dir / "d") +
                " --methods das,dmas --depths-mm 50 "
                "--x-min-mm -8 --x-max-mm 8 --z-min-mm 45 --z-max-mm 52 "
                "--dx-mm 0.1 --dz-mm 0.1 --threads 1 --report " +
                (dir / "r1.csv")) == 0);
    REQUIRE(run("compare --data " + (dir / "d") +
                " --methods das,dmas --depths-mm 50 "
                "--x-min-mm -8 --x-max-mm 8 --z-min-mm 45 --z-max-mm 52 "
                "--dx-mm 0.1 --dz-mm 0.1 --threads 4 --report " +
                (dir / "r2.csv")) == 0);
    CHECK(slurp(dir / "r1.csv") == slurp(dir / "r2.csv"));
  }

  SUBCASE("empty method list is a usage error") {
    CHECK(run("compare --data " + (dir / "d") +
              " --methods --depths-mm 50 --report " + (dir / "r.csv")) != 0);
  }
}
