#pragma once

#include <cstddef>
#include <vector>

#include "cwss/band_plan.hpp"
#include "cwss/detection.hpp"
#include "cwss/types.hpp"

namespace cwss {

// One occupied band. Per-bin magnitudes are drawn uniformly from
// [level_low, level_high].
struct ActiveBand {
  double low_hz = 0.0;
  double high_hz = 0.0;  // exclusive
  double level_low = 0.0;
  double level_high = 0.0;
};

struct SignalSpec {
  std::size_t n_bins = 1024;
  double nyquist_hz = 500e6;
  std::vector<ActiveBand> active_bands;
  double snr_db = 11.5;
  bool random_phase = true;

  // Throws InvalidArgument on overlapping bands, bands outside the span,
  // bands that cover no bin, or bad levels.
  void validate() const;

  // Bin range [first, last) of an active band.
  Section band_bins(const ActiveBand& band) const;
};

struct GroundTruth {
  CVector spectrum;      // r, unitary-DFT domain
  CVector time_signal;   // x_t = F^{-1} r
  CVector noisy_signal;  // x_t + w
  RVector band_energies; // ||r restricted to active band b||_2
};

GroundTruth generate_multiband(const SignalSpec& spec, Seed seed);

// Adds circular complex white Gaussian noise with E||w||^2 = ||x_t||^2 /
// 10^(snr_db/10). snr_db = +inf leaves the signal untouched.
GroundTruth add_awgn(GroundTruth truth, double snr_db, Seed seed);

SubbandEnergies true_subband_energy(const GroundTruth& truth,
                                    const BandPlan& plan);

}  // namespace cwss
