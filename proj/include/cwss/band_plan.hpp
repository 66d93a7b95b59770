#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cwss/types.hpp"

namespace cwss {

struct Section {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::size_t size() const { return end - begin; }
};

// Partition of the N-bin spectrum into K contiguous, possibly unequal
// sections. Built from the interior boundaries d_1 < ... < d_{K-1}.
class BandPlan {
 public:
  BandPlan(std::size_t n, std::vector<std::size_t> boundaries);

  // Maps frequency edges (Hz) to bins. `edges_hz` must start at 0 and end at
  // `nyquist_hz`; interior edges become boundaries at ceil(f * n / span).
  static BandPlan from_hz_edges(std::size_t n, double nyquist_hz,
                                std::span<const double> edges_hz);
  // K sections of (nearly) equal length.
  static BandPlan uniform(std::size_t n, std::size_t k);
  // One section per bin; the group norm then reduces to the l1 norm.
  static BandPlan singletons(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t k() const { return sections_.size(); }
  const std::vector<std::size_t>& boundaries() const { return boundaries_; }
  const std::vector<Section>& sections() const { return sections_; }
  const Section& section(std::size_t i) const { return sections_.at(i); }

 private:
  std::size_t n_;
  std::vector<std::size_t> boundaries_;
  std::vector<Section> sections_;
};

// First bin whose frequency k * span / n is >= f.
std::size_t hz_to_bin(double f_hz, std::size_t n, double nyquist_hz);

}  // namespace cwss
