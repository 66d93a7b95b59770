#include "cwss/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "fft.hpp"

namespace cwss {

SamplingPattern draw_pattern(std::size_t n, double ratio, Seed seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw InvalidArgument("sampling: ratio must lie in (0, 1], got " +
                          std::to_string(ratio));
  }
  if (std::floor(ratio * static_cast<double>(n)) < 1.0) {
    throw InvalidArgument("sampling: ratio * n must be at least 1");
  }
  const auto m = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(n)));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first m slots become a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(m);
  std::sort(all.begin(), all.end());
  return {n, std::move(all), seed};
}

namespace {

void check_pattern(const SamplingPattern& p) {
  if (p.indices.empty() || p.indices.size() > p.n) {
    throw InvalidArgument("sampling: pattern must hold 1..n indices");
  }
  for (std::size_t i = 0; i < p.indices.size(); ++i) {
    if (p.indices[i] >= p.n || (i > 0 && p.indices[i] <= p.indices[i - 1])) {
      throw InvalidArgument("sampling: indices must be increasing and < n");
    }
  }
}

}  // namespace

CVector acquire(const GroundTruth& truth, const SamplingPattern& pattern) {
  if (truth.noisy_signal.size() != pattern.n) {
    throw InvalidArgument("acquire: signal length " +
                          std::to_string(truth.noisy_signal.size()) +
                          " != pattern length " + std::to_string(pattern.n));
  }
  CVector y(pattern.m());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = truth.noisy_signal[pattern.indices[i]];
  return y;
}

CVector forward(std::span<const Complex> r, const SamplingPattern& pattern) {
  check_pattern(pattern);
  if (r.size() != pattern.n) {
    throw InvalidArgument("forward: spectrum length " + std::to_string(r.size()) +
                          " != " + std::to_string(pattern.n));
  }
  CVector x(pattern.n);
  detail::dft_inverse(r, x);
  CVector y(pattern.m());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[pattern.indices[i]];
  return y;
}

CVector adjoint(std::span<const Complex> y, const SamplingPattern& pattern) {
  check_pattern(pattern);
  if (y.size() != pattern.m()) {
    throw InvalidArgument("adjoint: measurement length " + std::to_string(y.size()) +
                          " != " + std::to_string(pattern.m()));
  }
  CVector x(pattern.n, Complex{});
  for (std::size_t i = 0; i < y.size(); ++i) x[pattern.indices[i]] = y[i];
  detail::dft_forward(x, x);
  return x;
}

Eigen::MatrixXcd dense_operator(const SamplingPattern& pattern) {
  check_pattern(pattern);
  if (pattern.n > kMaxDenseN) {
    throw InvalidArgument("dense_operator: n exceeds " + std::to_string(kMaxDenseN));
  }
  const double n = static_cast<double>(pattern.n);
  Eigen::MatrixXcd a(pattern.m(), pattern.n);
  for (std::size_t i = 0; i < pattern.m(); ++i) {
    for (std::size_t k = 0; k < pattern.n; ++k) {
      const double arg = 2.0 * std::numbers::pi * static_cast<double>(
          (k * pattern.indices[i]) % pattern.n) / n;
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::polar(1.0 / std::sqrt(n), arg);
    }
  }
  return a;
}

}  // namespace cwss
