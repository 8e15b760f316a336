// Independent reference implementations used only by the test suites.
// These deliberately follow the plain pairwise definitions instead of the
// factored production kernels.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace oracles {

inline double signed_sqrt(double v) {
  if (v > 0.0) return std::sqrt(v);
  if (v < 0.0) return -std::sqrt(-v);
  return 0.0;
}

// Explicit O(M^2) double loop over channel pairs.
inline double dmas_pairwise(std::span<const double> a) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      sum += signed_sqrt(a[i] * a[j]);
    }
  }
  return sum;
}

// Nested brute force: explicit bracket sums, then an explicit pairwise
// combination of the brackets.
inline double mdmas_nested(std::span<const double> a) {
  const std::size_t m = a.size();
  std::vector<double> brackets(m - 1, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      brackets[i] += signed_sqrt(a[i] * a[j]);
    }
  }
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < brackets.size(); ++p) {
    for (std::size_t q = p + 1; q < brackets.size(); ++q) {
      sum += signed_sqrt(brackets[p] * brackets[q]);
    }
  }
  return sum;
}

inline double das_direct(std::span<const double> a) {
  double sum = 0.0;
  for (double v : a) sum += v;
  return sum;
}

inline double coherence_factor_direct(std::span<const double> a) {
  double num = 0.0;
  double den = 0.0;
  for (double v : a) {
    num += v;
    den += std::abs(v) * std::abs(v);
  }
  if (den == 0.0) return 0.0;
  return (num * num) / (double(a.size()) * den);
}

// Naive DFT amplitude at one frequency; O(n) per evaluation.
inline double dft_amplitude(std::span<const double> x, double sample_rate_hz,
                            double frequency_hz) {
  std::complex<double> acc{0.0, 0.0};
  const double w = 2.0 * M_PI * frequency_hz / sample_rate_hz;
  for (std::size_t k = 0; k < x.size(); ++k) {
    acc += x[k] * std::polar(1.0, -w * double(k));
  }
  return std::abs(acc);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

}  // namespace oracles
