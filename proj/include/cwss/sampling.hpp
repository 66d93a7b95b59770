#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cwss/signal_model.hpp"
#include "cwss/types.hpp"

namespace cwss {

// Random sub-Nyquist acquisition: M of the N Nyquist-grid instants, kept in
// increasing order.
struct SamplingPattern {
  std::size_t n = 0;
  std::vector<std::size_t> indices;
  Seed seed = 0;

  std::size_t m() const { return indices.size(); }
  double ratio() const { return static_cast<double>(m()) / static_cast<double>(n); }

  bool operator==(const SamplingPattern&) const = default;
};

// M = round(ratio * n) indices drawn uniformly without replacement.
SamplingPattern draw_pattern(std::size_t n, double ratio, Seed seed);

// y_t[m] = noisy_signal[indices[m]].
CVector acquire(const GroundTruth& truth, const SamplingPattern& pattern);

// A r = S_c F^{-1} r, matrix-free.
CVector forward(std::span<const Complex> r, const SamplingPattern& pattern);

// A^H y: scatter onto the grid, then the forward unitary DFT.
CVector adjoint(std::span<const Complex> y, const SamplingPattern& pattern);

// Explicit M x N matrix of `forward`. Only for small test instances.
Eigen::MatrixXcd dense_operator(const SamplingPattern& pattern);

inline constexpr std::size_t kMaxDenseN = 64;

}  // namespace cwss
