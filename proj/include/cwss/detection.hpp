#pragma once

#include <optional>
#include <vector>

#include "cwss/band_plan.hpp"
#include "cwss/types.hpp"

namespace cwss {

struct NormalizedSpectrum {
  CVector values;
  bool degenerate = false;  // input was identically zero
};

struct SubbandEnergies {
  RVector values;  // ||r_k||_2 of the unit-norm spectrum
  bool degenerate = false;
};

struct OccupancyReport {
  RVector energies;
  std::vector<bool> occupied;
  double threshold = 0.0;
  bool degenerate = false;
};

// Per-subband enhancement ratios against the BPDN baseline. An empty
// optional marks a subband where the baseline energy is zero.
struct EdperResult {
  std::vector<std::optional<double>> r1;  // VLBS vs BPDN
  std::vector<std::optional<double>> r2;  // EVLBS vs BPDN
  std::vector<bool> active_mask;
};

NormalizedSpectrum normalize_total(const CVector& r);

SubbandEnergies subband_energies(const CVector& r, const BandPlan& plan);

// occupied[k] = energies[k] > threshold.
OccupancyReport detect_holes(const SubbandEnergies& energies, double threshold);

// Ratio of one method against the baseline, using squared section norms:
//   active:   (E_other - E_base) / E_base
//   inactive: (E_base - E_other) / E_base
std::vector<std::optional<double>> enhancement_ratio(
    const SubbandEnergies& baseline, const SubbandEnergies& other,
    const std::vector<bool>& active_mask);

EdperResult edper(const CVector& bpdn_r, const CVector& vlbs_r,
                  const CVector& evlbs_r, const BandPlan& plan,
                  const std::vector<bool>& active_mask);

}  // namespace cwss
