#include "cwss/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"

namespace cwss {

Section SignalSpec::band_bins(const ActiveBand& band) const {
  return {hz_to_bin(band.low_hz, n_bins, nyquist_hz),
          hz_to_bin(band.high_hz, n_bins, nyquist_hz)};
}

void SignalSpec::validate() const {
  if (n_bins < 2) throw InvalidArgument("signal: n_bins must be >= 2");
  if (!(nyquist_hz > 0.0)) throw InvalidArgument("signal: nyquist_hz must be positive");
  for (std::size_t i = 0; i < active_bands.size(); ++i) {
    const auto& b = active_bands[i];
    const std::string tag = "signal: band " + std::to_string(i) + ": ";
    if (!(b.low_hz >= 0.0) || !(b.high_hz <= nyquist_hz) || !(b.low_hz < b.high_hz)) {
      throw InvalidArgument(tag + "must satisfy 0 <= low < high <= nyquist_hz");
    }
    if (!(b.level_low >= 0.0) || !(b.level_low <= b.level_high)) {
      throw InvalidArgument(tag + "levels must satisfy 0 <= level_low <= level_high");
    }
    if (const Section s = band_bins(b); s.end <= s.begin) {
      throw InvalidArgument(tag + "narrower than one bin");
    }
  }
  for (std::size_t i = 0; i < active_bands.size(); ++i) {
    for (std::size_t j = i + 1; j < active_bands.size(); ++j) {
      const auto& a = active_bands[i];
      const auto& b = active_bands[j];
      if (a.low_hz < b.high_hz && b.low_hz < a.high_hz) {
        throw InvalidArgument("signal: bands " + std::to_string(i) + " and " +
                              std::to_string(j) + " overlap");
      }
    }
  }
}

GroundTruth generate_multiband(const SignalSpec& spec, Seed seed) {
  spec.validate();
  const std::size_t n = spec.n_bins;
  GroundTruth g;
  g.spectrum.assign(n, Complex{});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& band : spec.active_bands) {
    const Section bins = spec.band_bins(band);
    double energy = 0.0;
    for (std::size_t k = bins.begin; k < bins.end; ++k) {
      const double mag = band.level_low + (band.level_high - band.level_low) * unit(rng);
      const double phase = spec.random_phase ? 2.0 * std::numbers::pi * unit(rng) : 0.0;
      g.spectrum[k] = std::polar(mag, phase);
      energy += mag * mag;
    }
    g.band_energies.push_back(std::sqrt(energy));
  }
  g.time_signal.resize(n);
  detail::dft_inverse(g.spectrum, g.time_signal);
  g.noisy_signal = g.time_signal;
  return g;
}

GroundTruth add_awgn(GroundTruth truth, double snr_db, Seed seed) {
  if (std::isinf(snr_db) && snr_db > 0) {
    truth.noisy_signal = truth.time_signal;
    return truth;
  }
  if (std::isnan(snr_db)) throw InvalidArgument("awgn: snr_db is NaN");
  const double signal_energy = std::pow(norm2(truth.time_signal), 2);
  if (signal_energy == 0.0) {
    throw InvalidArgument("awgn: finite SNR requested on an all-zero signal");
  }
  const std::size_t n = truth.time_signal.size();
  const double noise_energy = signal_energy / std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(noise_energy / static_cast<double>(n) / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  truth.noisy_signal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    truth.noisy_signal[i] = truth.time_signal[i] + Complex(re, im);
  }
  return truth;
}

SubbandEnergies true_subband_energy(const GroundTruth& truth,
                                    const BandPlan& plan) {
  return subband_energies(truth.spectrum, plan);
}

}  // namespace cwss
