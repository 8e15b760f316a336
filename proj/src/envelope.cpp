#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pabeam/beamform.hpp"

namespace pabeam {

namespace {

// FFT-based analytic signal: double the positive-frequency bins, zero the
// negative ones, inverse-transform. FFTW planning is not thread safe, so
// all transforms here stay on the calling thread.
class HilbertTransform {
 public:
  explicit HilbertTransform(std::size_t n)
      : n_(n), buf_(n), spec_(n) {
    forward_ = fftw_plan_dft_1d(int(n),
                                reinterpret_cast<fftw_complex*>(buf_.data()),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_1d(int(n),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                reinterpret_cast<fftw_complex*>(buf_.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) {
      throw std::runtime_error("failed to create FFT plan");
    }
  }

  HilbertTransform(const HilbertTransform&) = delete;
  HilbertTransform& operator=(const HilbertTransform&) = delete;

  ~HilbertTransform() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  // Writes |analytic(x)| into out (both length n).
  void envelope(const double* x, double* out) {
    for (std::size_t i = 0; i < n_; ++i) buf_[i] = x[i];
    fftw_execute(forward_);
    const std::size_t half = n_ / 2;
    for (std::size_t k = 1; k < (n_ + 1) / 2; ++k) spec_[k] *= 2.0;
    for (std::size_t k = half + 1; k < n_; ++k) spec_[k] = 0.0;
    fftw_execute(inverse_);
    const double scale = 1.0 / double(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = std::abs(buf_[i]) * scale;
  }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> buf_;
  std::vector<std::complex<double>> spec_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace

std::vector<double> analytic_envelope(std::span<const double> x) {
  if (x.empty()) return {};
  if (x.size() == 1) return {std::abs(x[0])};
  std::vector<double> out(x.size());
  HilbertTransform hilbert(x.size());
  hilbert.envelope(x.data(), out.data());
  return out;
}

BeamformedImage envelope(const BeamformedImage& image) {
  if (image.stage != ImageStage::raw) {
    throw std::invalid_argument("envelope: expected a raw-stage image");
  }
  BeamformedImage out = image;
  out.stage = ImageStage::envelope;
  if (image.nz == 0 || image.nx == 0) return out;
  if (image.nz == 1) {
    for (double& v : out.values) v = std::abs(v);
    return out;
  }
  HilbertTransform hilbert(image.nz);
  for (std::size_t ix = 0; ix < image.nx; ++ix) {
    const double* column = image.values.data() + ix * image.nz;
    hilbert.envelope(column, out.values.data() + ix * image.nz);
  }
  return out;
}

BeamformedImage log_compress(const BeamformedImage& image,
                             double dynamic_range_db) {
  if (image.stage != ImageStage::envelope) {
    throw std::invalid_argument("log_compress: expected an envelope-stage image");
  }
  if (!(dynamic_range_db > 0.0)) {
    throw std::invalid_argument("log_compress: dynamic range must be positive");
  }
  const double peak = image.values.empty()
                          ? 0.0
                          : *std::max_element(image.values.begin(),
                                              image.values.end());
  if (!(peak > 0.0)) {
    throw std::runtime_error("log_compress: degenerate all-zero envelope");
  }
  BeamformedImage out = image;
  out.stage = ImageStage::db;
  out.dynamic_range_db = dynamic_range_db;
  for (double& v : out.values) {
    const double db = 20.0 * std::log10(v / peak);  // -inf for v == 0
    v = std::clamp(db, -dynamic_range_db, 0.0);
  }
  return out;
}

}  // namespace pabeam
