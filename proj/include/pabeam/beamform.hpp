#pragma once

#include <span>
#include <string>
#include <vector>

#include "pabeam/types.hpp"

namespace pabeam {

enum class Kernel { das, dmas, mdmas };

/// Beamforming method: one kernel, optionally coherence-factor weighted.
struct MethodSpec {
  Kernel kernel = Kernel::das;
  bool cf_weighting = false;

  std::string name() const;  // "das", "das-cf", "dmas", ...

  /// Parses names of the form "das", "das-cf", "dmas", "dmas-cf",
  /// "mdmas", "mdmas-cf". Throws std::invalid_argument otherwise.
  static MethodSpec parse(const std::string& name);

  /// All six method combinations, in display order.
  static std::vector<MethodSpec> all();
};

/// One-way propagation time from a pixel to an element.
double time_of_flight(Vec2 pixel, Vec2 element, double speed_of_sound_m_s);

/// Sub-sample read of one channel at time t via linear interpolation.
/// Returns 0 past the end of the trace; throws std::invalid_argument for
/// t < 0.
double sample_at(const RfFrame& frame, std::size_t channel, double t);

/// Delay-aligns all channels onto one pixel.
AlignedSamples gather_delayed(const RfFrame& frame,
                              const ArrayGeometry& geometry, Vec2 pixel,
                              double speed_of_sound_m_s);
/// Allocation-free variant writing into `out` (resized to M).
void gather_delayed(const RfFrame& frame, const ArrayGeometry& geometry,
                    Vec2 pixel, double speed_of_sound_m_s,
                    AlignedSamples& out);

/// Plain coherent sum of the aligned samples.
double das_pixel(std::span<const double> aligned);

/// |sum|^2 / (M * sum of squares); 0 when the energy term vanishes.
/// Always in [0, 1].
double coherence_factor(std::span<const double> aligned);

/// sign(v) * sqrt(|v|).
double signed_sqrt(double v);

/// Sum over channel pairs i < j of the signed square roots of the sample
/// products, evaluated in O(M) through the identity
///   sum_{i<j} y_i y_j = ((sum y)^2 - sum y^2) / 2,  y_i = signed_sqrt(a_i).
/// Requires M >= 2.
double dmas_pixel(std::span<const double> aligned);

/// Two-stage variant: the pairwise expansion is grouped into the M-1
/// partial sums b_i = sum_{j>i} signed_sqrt(a_i a_j), and the same
/// signed-root pairwise combination is then applied to the vector b
/// instead of summing it. Requires M >= 3.
double mdmas_pixel(std::span<const double> aligned);

/// Runs the selected kernel over every grid pixel: gather, combine, and
/// (optionally) scale by the coherence factor of the same aligned samples.
/// `threads` = 0 picks the hardware concurrency; the result is identical
/// for any thread count.
BeamformedImage beamform_image(const RfFrame& frame,
                               const ArrayGeometry& geometry,
                               const ImageGrid& grid, MethodSpec method,
                               double speed_of_sound_m_s,
                               unsigned threads = 1);

/// Magnitude of the analytic signal of a real sequence (FFT-based).
std::vector<double> analytic_envelope(std::span<const double> x);

/// Envelope detection: analytic-signal magnitude along the axial (z)
/// direction of every lateral column. Requires stage == raw.
BeamformedImage envelope(const BeamformedImage& image);

/// 20*log10(v / max), clamped to [-dynamic_range_db, 0]. Requires
/// stage == envelope with a positive maximum.
BeamformedImage log_compress(const BeamformedImage& image,
                             double dynamic_range_db);

}  // namespace pabeam
