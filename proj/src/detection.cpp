#include "cwss/detection.hpp"

#include <cmath>
#include <string>

namespace cwss {

NormalizedSpectrum normalize_total(const CVector& r) {
  const double nrm = norm2(r);
  if (nrm == 0.0) return {CVector(r.size(), Complex{}), true};
  NormalizedSpectrum out{r, false};
  for (auto& v : out.values) v /= nrm;
  return out;
}

SubbandEnergies subband_energies(const CVector& r, const BandPlan& plan) {
  if (r.size() != plan.n()) {
    throw InvalidArgument("subband_energies: spectrum length " +
                          std::to_string(r.size()) + " != plan length " +
                          std::to_string(plan.n()));
  }
  const NormalizedSpectrum unit = normalize_total(r);
  SubbandEnergies e;
  e.degenerate = unit.degenerate;
  e.values.reserve(plan.k());
  for (const Section& s : plan.sections()) {
    double acc = 0.0;
    for (std::size_t i = s.begin; i < s.end; ++i) acc += std::norm(unit.values[i]);
    e.values.push_back(std::sqrt(acc));
  }
  return e;
}

OccupancyReport detect_holes(const SubbandEnergies& energies, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("detect_holes: threshold must be positive");
  OccupancyReport rep;
  rep.energies = energies.values;
  rep.threshold = threshold;
  rep.degenerate = energies.degenerate;
  rep.occupied.reserve(energies.values.size());
  for (double e : energies.values) rep.occupied.push_back(e > threshold);
  return rep;
}

std::vector<std::optional<double>> enhancement_ratio(
    const SubbandEnergies& baseline, const SubbandEnergies& other,
    const std::vector<bool>& active_mask) {
  const std::size_t k = active_mask.size();
  if (baseline.values.size() != k || other.values.size() != k) {
    throw InvalidArgument("edper: energy vectors and mask differ in length");
  }
  std::vector<std::optional<double>> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double base = baseline.values[i] * baseline.values[i];
    const double cmp = other.values[i] * other.values[i];
    if (base == 0.0) continue;
    out[i] = active_mask[i] ? (cmp - base) / base : (base - cmp) / base;
  }
  return out;
}

EdperResult edper(const CVector& bpdn_r, const CVector& vlbs_r,
                  const CVector& evlbs_r, const BandPlan& plan,
                  const std::vector<bool>& active_mask) {
  if (active_mask.size() != plan.k()) {
    throw InvalidArgument("edper: mask length != number of sections");
  }
  const SubbandEnergies base = subband_energies(bpdn_r, plan);
  EdperResult res;
  res.r1 = enhancement_ratio(base, subband_energies(vlbs_r, plan), active_mask);
  res.r2 = enhancement_ratio(base, subband_energies(evlbs_r, plan), active_mask);
  res.active_mask = active_mask;
  return res;
}

}  // namespace cwss
