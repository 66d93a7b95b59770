#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cwss/band_plan.hpp"
#include "cwss/sampling.hpp"
#include "cwss/types.hpp"

namespace cwss {

struct SolverOptions {
  int max_inner_iters = 2000;
  double inner_tol = 1e-6;  // relative primal/dual residual
  double admm_rho = 1.0;
  // Residual balancing: rescale rho when the primal and dual residuals drift
  // more than 10x apart.
  bool adaptive_rho = true;
  bool record_trace = false;

  void validate() const;
};

// Residuals are reported on the unit-scale problem (y / ||y||_2).
struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double eta_slack = 0.0;  // ||A z - y|| - eta
  double rho = 0.0;
};

struct SpectrumEstimate {
  CVector r_hat;
  double residual_norm = 0.0;  // ||A r_hat - y||_2
  double objective = 0.0;      // sum_i w_i ||r_hat_i||_2
  int inner_iters_used = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

// Converged estimates satisfy ||A r_hat - y|| <= eta (1 + kFeasibilitySlack)
// + inner_tol * ||y||. The absolute term only matters when eta = 0.
inline constexpr double kFeasibilitySlack = 1e-3;

struct ReweightState {
  RVector weights;  // w_i = 1 / (p_i + delta)
  RVector powers;   // p_i = ||r_{t-1,i}||_1
  int outer_iter = 0;
  RVector residual_history;  // ||r_t - r_{t-1}||_2 for t = 2, 3, ...

  static ReweightState initial(std::size_t k);
};

// Block soft threshold: v_i <- v_i * max(0, 1 - tau * w_i / ||v_i||_2).
void group_shrink(std::span<Complex> v, const BandPlan& plan,
                  std::span<const double> weights, double tau);

double weighted_group_norm(std::span<const Complex> r, const BandPlan& plan,
                           std::span<const double> weights);

// min ||r||_1  s.t.  ||A r - y||_2 <= eta.
SpectrumEstimate solve_bpdn(std::span<const Complex> y,
                            const SamplingPattern& pattern, double eta,
                            const SolverOptions& opts = {});

// min sum_i w_i ||r_i||_2  s.t.  ||A r - y||_2 <= eta, by ADMM on the split
// r = z. `warm_start`, when non-empty, seeds z.
SpectrumEstimate solve_group(std::span<const Complex> y,
                             const SamplingPattern& pattern,
                             const BandPlan& plan,
                             std::span<const double> weights, double eta,
                             const SolverOptions& opts = {},
                             std::span<const Complex> warm_start = {});

// Which section norm feeds the weight update. The l1 mass is the default;
// the l2 norm is kept as an alternative for comparison runs.
enum class SectionPower { kL1, kL2 };

// p_i = ||r_i||_1 (or ||r_i||_2), w_i = 1 / (p_i + delta), t -> t + 1.
ReweightState update_weights(ReweightState state,
                             const SpectrumEstimate& estimate,
                             const BandPlan& plan, double delta,
                             SectionPower power = SectionPower::kL1);

struct EvlbsOptions {
  double delta = 1e-3;
  // Stopping bound on ||r_t - r_{t-1}||_2. When `relative_epsilon` is set the
  // bound is epsilon * ||r_1||_2.
  double epsilon = 0.05;
  bool relative_epsilon = true;
  int max_outer = 8;
  SectionPower power = SectionPower::kL1;

  void validate() const;
};

struct EvlbsResult {
  SpectrumEstimate estimate;
  ReweightState state;
  double epsilon_abs = 0.0;
  bool outer_converged = false;
  bool inner_converged = true;  // every inner solve converged
  // Weighted objective checks: for each reweighted step t >= 2, the objective
  // of r_t and of r_{t-1} under the weights that produced r_t.
  std::vector<std::pair<double, double>> surrogate_checks;
  // Per outer step inner traces, filled when SolverOptions::record_trace.
  std::vector<std::vector<IterationRecord>> step_traces;
};

// Iteratively reweighted group recovery. Step 1 is the unit-weight solve;
// each further step recomputes the weights from the previous estimate.
EvlbsResult solve_evlbs(std::span<const Complex> y,
                        const SamplingPattern& pattern, const BandPlan& plan,
                        double eta, const EvlbsOptions& evlbs,
                        const SolverOptions& opts = {});

struct L0Solution {
  bool found = false;
  CVector r;
  std::vector<std::size_t> support;
};

// Exhaustive sparsest-fit search over supports of size <= s_max (least
// squares on each, exact-fit tolerance 1e-8 relative to ||y||).
L0Solution l0_oracle(std::span<const Complex> y, const Eigen::MatrixXcd& op,
                     int s_max);

}  // namespace cwss
