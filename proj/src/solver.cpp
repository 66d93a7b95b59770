#include "cwss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cwss {

void SolverOptions::validate() const {
  if (max_inner_iters < 1) throw InvalidArgument("solver: max_inner_iters must be >= 1");
  if (!(inner_tol > 0.0)) throw InvalidArgument("solver: inner_tol must be positive");
  if (!(admm_rho > 0.0)) throw InvalidArgument("solver: admm_rho must be positive");
}

void EvlbsOptions::validate() const {
  if (!(delta > 0.0)) throw InvalidArgument("evlbs: delta must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("evlbs: epsilon must be positive");
  if (max_outer < 1) throw InvalidArgument("evlbs: max_outer must be >= 1");
}

ReweightState ReweightState::initial(std::size_t k) {
  ReweightState s;
  s.weights.assign(k, 1.0);
  s.powers.assign(k, 0.0);
  return s;
}

void group_shrink(std::span<Complex> v, const BandPlan& plan,
                  std::span<const double> weights, double tau) {
  for (std::size_t i = 0; i < plan.k(); ++i) {
    const Section& s = plan.section(i);
    double sq = 0.0;
    for (std::size_t j = s.begin; j < s.end; ++j) sq += std::norm(v[j]);
    const double nrm = std::sqrt(sq);
    const double thr = tau * weights[i];
    const double scale = nrm > thr ? 1.0 - thr / nrm : 0.0;
    for (std::size_t j = s.begin; j < s.end; ++j) v[j] *= scale;
  }
}

double weighted_group_norm(std::span<const Complex> r, const BandPlan& plan,
                           std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.k(); ++i) {
    const Section& s = plan.section(i);
    double sq = 0.0;
    for (std::size_t j = s.begin; j < s.end; ++j) sq += std::norm(r[j]);
    total += weights[i] * std::sqrt(sq);
  }
  return total;
}

namespace {

double dist(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double residual(std::span<const Complex> r, std::span<const Complex> y,
                const SamplingPattern& pattern) {
  const CVector ar = forward(r, pattern);
  return dist(ar, y);
}

// Euclidean projection onto {r : ||A r - y|| <= eta}. Because A A^H = I the
// correction lies in range(A^H) and has a closed form.
void project_measurement_ball(CVector& v, std::span<const Complex> y, double eta,
                              const SamplingPattern& pattern) {
  CVector e = forward(v, pattern);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= y[i];
  const double ne = norm2(e);
  if (ne <= eta) return;
  const double shrink = 1.0 - eta / ne;
  for (auto& x : e) x *= shrink;
  const CVector c = adjoint(e, pattern);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c[i];
}

void check_inputs(std::span<const Complex> y, const SamplingPattern& pattern,
                  const BandPlan& plan, std::span<const double> weights,
                  double eta, const SolverOptions& opts,
                  std::span<const Complex> warm_start) {
  opts.validate();
  if (!(eta >= 0.0)) throw InvalidArgument("solver: eta must be nonnegative");
  if (y.size() != pattern.m()) {
    throw InvalidArgument("solver: measurement length " + std::to_string(y.size()) +
                          " != pattern size " + std::to_string(pattern.m()));
  }
  if (plan.n() != pattern.n) throw InvalidArgument("solver: plan length != pattern length");
  if (weights.size() != plan.k()) throw InvalidArgument("solver: need one weight per section");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("solver: weights must be positive and finite");
    }
  }
  if (!warm_start.empty() && warm_start.size() != plan.n()) {
    throw InvalidArgument("solver: warm start length != n");
  }
}

}  // namespace

SpectrumEstimate solve_group(std::span<const Complex> y,
                             const SamplingPattern& pattern,
                             const BandPlan& plan,
                             std::span<const double> weights, double eta,
                             const SolverOptions& opts,
                             std::span<const Complex> warm_start) {
  check_inputs(y, pattern, plan, weights, eta, opts, warm_start);
  const std::size_t n = plan.n();
  SpectrumEstimate est;

  const double y_norm = norm2(CVector(y.begin(), y.end()));
  if (eta >= y_norm) {
    // r = 0 is feasible and has the smallest possible objective.
    est.r_hat.assign(n, Complex{});
    est.residual_norm = y_norm;
    est.converged = true;
    return est;
  }

  // Work on the unit-scale problem: y / ||y||, weights / min(w). The minimizer
  // is positively homogeneous in (y, eta) and invariant to weight scaling.
  CVector yh(y.begin(), y.end());
  for (auto& v : yh) v /= y_norm;
  const double eta_h = eta / y_norm;
  const double w_min = *std::min_element(weights.begin(), weights.end());
  RVector wh(weights.begin(), weights.end());
  for (auto& w : wh) w /= w_min;

  CVector z(n, Complex{});
  if (!warm_start.empty()) {
    for (std::size_t i = 0; i < n; ++i) z[i] = warm_start[i] / y_norm;
  }
  CVector u(n, Complex{});
  CVector r(n);
  CVector z_old(n);
  double rho = opts.admm_rho;

  int it = 0;
  for (it = 1; it <= opts.max_inner_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) r[i] = z[i] - u[i];
    project_measurement_ball(r, yh, eta_h, pattern);

    z_old = z;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] + u[i];
    group_shrink(z, plan, wh, 1.0 / rho);
    for (std::size_t i = 0; i < n; ++i) u[i] += r[i] - z[i];

    const double pri = dist(r, z);
    const double dual = rho * dist(z, z_old);
    const double eps_pri = opts.inner_tol * std::max({norm2(r), norm2(z), 1e-12});
    const double eps_dual = opts.inner_tol * std::max(rho * norm2(u), 1e-12);

    if (opts.record_trace) {
      IterationRecord rec;
      rec.iter = it;
      rec.objective = weighted_group_norm(z, plan, weights) * y_norm;
      rec.primal_residual = pri;
      rec.dual_residual = dual;
      rec.eta_slack = (residual(z, yh, pattern) - eta_h) * y_norm;
      rec.rho = rho;
      est.trace.push_back(rec);
    }

    if (pri <= eps_pri && dual <= eps_dual) {
      const double res = residual(z, yh, pattern);
      if (res <= eta_h * (1.0 + kFeasibilitySlack) + opts.inner_tol) {
        est.converged = true;
        break;
      }
    }

    if (opts.adaptive_rho) {
      if (pri > 10.0 * dual) {
        rho *= 2.0;
        for (auto& v : u) v *= 0.5;
      } else if (dual > 10.0 * pri) {
        rho *= 0.5;
        for (auto& v : u) v *= 2.0;
      }
    }
  }

  est.inner_iters_used = std::min(it, opts.max_inner_iters);
  est.r_hat = std::move(z);
  for (auto& v : est.r_hat) v *= y_norm;
  est.residual_norm = residual(est.r_hat, y, pattern);
  est.objective = weighted_group_norm(est.r_hat, plan, weights);
  return est;
}

SpectrumEstimate solve_bpdn(std::span<const Complex> y,
                            const SamplingPattern& pattern, double eta,
                            const SolverOptions& opts) {
  const BandPlan plan = BandPlan::singletons(pattern.n);
  const RVector ones(pattern.n, 1.0);
  return solve_group(y, pattern, plan, ones, eta, opts);
}

ReweightState update_weights(ReweightState state,
                             const SpectrumEstimate& estimate,
                             const BandPlan& plan, double delta,
                             SectionPower power) {
  if (!(delta > 0.0)) throw InvalidArgument("update_weights: delta must be positive");
  if (estimate.r_hat.size() != plan.n()) {
    throw InvalidArgument("update_weights: estimate length != plan length");
  }
  state.powers.assign(plan.k(), 0.0);
  state.weights.assign(plan.k(), 0.0);
  for (std::size_t i = 0; i < plan.k(); ++i) {
    const Section& s = plan.section(i);
    double p = 0.0;
    if (power == SectionPower::kL1) {
      for (std::size_t j = s.begin; j < s.end; ++j) p += std::abs(estimate.r_hat[j]);
    } else {
      for (std::size_t j = s.begin; j < s.end; ++j) p += std::norm(estimate.r_hat[j]);
      p = std::sqrt(p);
    }
    state.powers[i] = p;
    state.weights[i] = 1.0 / (p + delta);
  }
  ++state.outer_iter;
  return state;
}

EvlbsResult solve_evlbs(std::span<const Complex> y,
                        const SamplingPattern& pattern, const BandPlan& plan,
                        double eta, const EvlbsOptions& evlbs,
                        const SolverOptions& opts) {
  evlbs.validate();
  EvlbsResult out;
  out.state = ReweightState::initial(plan.k());
  out.estimate = solve_group(y, pattern, plan, out.state.weights, eta, opts);
  out.state.outer_iter = 1;
  out.inner_converged = out.estimate.converged;
  if (opts.record_trace) out.step_traces.push_back(out.estimate.trace);
  out.epsilon_abs = evlbs.relative_epsilon
                        ? evlbs.epsilon * norm2(out.estimate.r_hat)
                        : evlbs.epsilon;

  for (int t = 2; t <= evlbs.max_outer; ++t) {
    SpectrumEstimate prev = std::move(out.estimate);
    out.state = update_weights(std::move(out.state), prev, plan, evlbs.delta,
                               evlbs.power);
    out.estimate = solve_group(y, pattern, plan, out.state.weights, eta, opts,
                               prev.r_hat);
    out.inner_converged = out.inner_converged && out.estimate.converged;
    if (opts.record_trace) out.step_traces.push_back(out.estimate.trace);
    out.surrogate_checks.emplace_back(
        weighted_group_norm(out.estimate.r_hat, plan, out.state.weights),
        weighted_group_norm(prev.r_hat, plan, out.state.weights));
    const double step = dist(out.estimate.r_hat, prev.r_hat);
    out.state.residual_history.push_back(step);
    if (step <= out.epsilon_abs) {
      out.outer_converged = true;
      break;
    }
  }
  return out;
}

}  // namespace cwss
