#include "cwss/band_plan.hpp"

#include <cmath>
#include <string>

namespace cwss {

double norm2(const CVector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

std::size_t hz_to_bin(double f_hz, std::size_t n, double nyquist_hz) {
  const double pos = f_hz * static_cast<double>(n) / nyquist_hz;
  // Edges that land on a bin up to rounding noise map onto that bin.
  const double b = std::ceil(pos - 1e-9);
  return b <= 0.0 ? 0 : static_cast<std::size_t>(b);
}

BandPlan::BandPlan(std::size_t n, std::vector<std::size_t> boundaries)
    : n_(n), boundaries_(std::move(boundaries)) {
  if (n_ == 0) throw InvalidArgument("band plan: n must be positive");
  std::size_t prev = 0;
  for (std::size_t d : boundaries_) {
    if (d <= prev || d >= n_) {
      throw InvalidArgument("band plan: boundaries must be strictly increasing "
                            "interior bins, got " + std::to_string(d));
    }
    sections_.push_back({prev, d});
    prev = d;
  }
  sections_.push_back({prev, n_});
}

BandPlan BandPlan::from_hz_edges(std::size_t n, double nyquist_hz,
                                 std::span<const double> edges_hz) {
  if (edges_hz.size() < 2) {
    throw InvalidArgument("band plan: need at least two edges");
  }
  if (edges_hz.front() != 0.0 || edges_hz.back() != nyquist_hz) {
    throw InvalidArgument("band plan: edges must start at 0 and end at the span");
  }
  std::vector<std::size_t> bounds;
  for (std::size_t i = 1; i + 1 < edges_hz.size(); ++i) {
    bounds.push_back(hz_to_bin(edges_hz[i], n, nyquist_hz));
  }
  return BandPlan(n, std::move(bounds));
}

BandPlan BandPlan::uniform(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw InvalidArgument("band plan: need 1 <= k <= n");
  std::vector<std::size_t> bounds;
  for (std::size_t i = 1; i < k; ++i) bounds.push_back(i * n / k);
  return BandPlan(n, std::move(bounds));
}

BandPlan BandPlan::singletons(std::size_t n) {
  std::vector<std::size_t> bounds;
  for (std::size_t i = 1; i < n; ++i) bounds.push_back(i);
  return BandPlan(n, std::move(bounds));
}

}  // namespace cwss
