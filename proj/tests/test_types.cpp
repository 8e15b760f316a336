#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "pabeam/types.hpp"

using namespace pabeam;

TEST_CASE("linear array spans (M-1)*pitch symmetric about the center") {
  const ArrayGeometry geom = build_linear_array(128, 0.15625e-3, 0.0);
  REQUIRE(geom.num_elements() == 128);
  const double width =
      geom.element_positions.back().x - geom.element_positions.front().x;
  // 127 * 0.15625 mm, i.e. the ~19.84 mm aperture.
  CHECK(width == doctest::Approx(19.84375e-3).epsilon(1e-12));
  CHECK(geom.element_positions.front().x ==
        doctest::Approx(-9.921875e-3).epsilon(1e-12));
  CHECK(geom.element_positions.back().x ==
        doctest::Approx(9.921875e-3).epsilon(1e-12));
}

TEST_CASE("two-element array sits at +/- pitch/2") {
  const ArrayGeometry geom = build_linear_array(2, 1e-3, 0.0);
  CHECK(geom.element_positions[0].x == doctest::Approx(-0.5e-3));
  CHECK(geom.element_positions[1].x == doctest::Approx(0.5e-3));
  CHECK(geom.element_positions[0].z == 0.0);
  CHECK(geom.element_positions[1].z == 0.0);
}

TEST_CASE("array construction rejects bad arguments") {
  CHECK_THROWS_AS(build_linear_array(128, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_linear_array(1, 1e-3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_linear_array(0, 1e-3, 0.0), std::invalid_argument);
}

TEST_CASE("element positions are strictly increasing and uniformly spaced") {
  for (std::size_t m : {2u, 3u, 64u, 128u}) {
    for (double pitch : {0.15625e-3, 0.3e-3, 1e-3}) {
      const ArrayGeometry geom = build_linear_array(m, pitch, 1.7e-3);
      for (std::size_t i = 1; i < m; ++i) {
        const double gap =
            geom.element_positions[i].x - geom.element_positions[i - 1].x;
        CHECK(gap > 0.0);
        CHECK(std::abs(gap - pitch) < 1e-12);
      }
    }
  }
}

TEST_CASE("grid pixel counts match floor((max-min)/step)+1") {
  const ImageGrid grid = build_grid(-10e-3, 10e-3, 0.0, 60e-3, 0.1e-3, 0.1e-3);
  CHECK(grid.nx == 201);
  CHECK(grid.nz == 601);

  const ImageGrid tiny = build_grid(0.0, 1e-3, 0.0, 1e-3, 1e-3, 1e-3);
  CHECK(tiny.nx == 2);
  CHECK(tiny.nz == 2);
}

TEST_CASE("grid rejects inverted bounds and bad steps") {
  CHECK_THROWS_AS(build_grid(10e-3, -10e-3, 0.0, 60e-3, 0.1e-3, 0.1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-10e-3, 10e-3, 60e-3, 0.0, 0.1e-3, 0.1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-10e-3, 10e-3, 0.0, 60e-3, 0.0, 0.1e-3),
                  std::invalid_argument);
}

TEST_CASE("grid index -> coordinate -> index round-trips exactly") {
  const ImageGrid grid = build_grid(-10e-3, 10e-3, 0.0, 60e-3, 0.1e-3, 0.1e-3);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    CHECK(grid.nearest_x_index(grid.x_at(i)) == i);
  }
  for (std::size_t j = 0; j < grid.nz; ++j) {
    CHECK(grid.nearest_z_index(grid.z_at(j)) == j);
  }
}

TEST_CASE("nearest index ties resolve toward the smaller coordinate") {
  const ImageGrid grid = build_grid(0.0, 4.0, 0.0, 4.0, 1.0, 1.0);
  CHECK(grid.nearest_z_index(1.5) == 1);
  CHECK(grid.nearest_z_index(1.6) == 2);
  CHECK(grid.nearest_x_index(2.5) == 2);
}

TEST_CASE("validate_frame accepts a matching frame") {
  const ArrayGeometry geom = build_linear_array(128, 0.15625e-3, 0.0);
  const RfFrame frame = RfFrame::zeros(128, 64, 50e6, 1540.0);
  const FrameValidation result = validate_frame(frame, geom);
  CHECK(result.ok);
  CHECK(result.issues.empty());
}

TEST_CASE("validate_frame reports a channel-count mismatch") {
  const ArrayGeometry geom = build_linear_array(128, 0.15625e-3, 0.0);
  const RfFrame frame = RfFrame::zeros(64, 64, 50e6, 1540.0);
  const FrameValidation result = validate_frame(frame, geom);
  CHECK_FALSE(result.ok);
  CHECK(result.summary().find("channel count") != std::string::npos);
}

TEST_CASE("validate_frame reports non-finite samples") {
  const ArrayGeometry geom = build_linear_array(4, 1e-3, 0.0);
  RfFrame frame = RfFrame::zeros(4, 16, 50e6, 1540.0);
  frame.at(2, 5) = std::numeric_limits<double>::quiet_NaN();
  const FrameValidation result = validate_frame(frame, geom);
  CHECK_FALSE(result.ok);
  CHECK(result.summary().find("non-finite") != std::string::npos);
  CHECK(result.summary().find("channel 2") != std::string::npos);
}
