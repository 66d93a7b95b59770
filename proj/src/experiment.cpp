#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "cwss/harness.hpp"
#include "cwss/rng.hpp"
#include "cwss/sampling.hpp"

namespace cwss {

const MethodOutcome* TrialResult::find(Method m) const {
  for (const auto& o : methods) {
    if (o.method == m) return &o;
  }
  return nullptr;
}

const MethodAggregate* AggregateReport::find(Method m) const {
  for (const auto& a : methods) {
    if (a.method == m) return &a;
  }
  return nullptr;
}

Seed trial_seed(Seed master, std::size_t ratio_index, std::size_t trial_index) {
  return derive_seed(derive_seed(master, ratio_index), trial_index);
}

namespace {

double eta_factor(const ExperimentConfig& c, Method m) {
  switch (m) {
    case Method::kBpdn: return c.eta_bpdn;
    case Method::kVlbs: return c.eta_vlbs;
    case Method::kEvlbs: return c.eta_evlbs;
  }
  return 0.0;
}

MethodOutcome run_method(const ExperimentConfig& config, Method method,
                         const CVector& y, const SamplingPattern& pattern,
                         const BandPlan& plan, const TrialOptions& options) {
  SolverOptions opts = config.solver;
  opts.record_trace = options.record_trace;
  MethodOutcome out;
  out.method = method;
  out.eta = eta_factor(config, method) * norm2(y);

  const auto start = std::chrono::steady_clock::now();
  SpectrumEstimate est;
  switch (method) {
    case Method::kBpdn:
      est = solve_bpdn(y, pattern, out.eta, opts);
      out.converged = est.converged;
      break;
    case Method::kVlbs: {
      const RVector ones(plan.k(), 1.0);
      est = solve_group(y, pattern, plan, ones, out.eta, opts);
      out.converged = est.converged;
      break;
    }
    case Method::kEvlbs: {
      EvlbsResult res = solve_evlbs(y, pattern, plan, out.eta, config.evlbs, opts);
      est = std::move(res.estimate);
      out.converged = res.inner_converged;
      out.outer_converged = res.outer_converged;
      out.outer_iters = res.state.outer_iter;
      out.epsilon_abs = res.epsilon_abs;
      out.residual_history = std::move(res.state.residual_history);
      out.traces = std::move(res.step_traces);
      break;
    }
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (method != Method::kEvlbs && options.record_trace) out.traces.push_back(est.trace);

  out.residual_norm = est.residual_norm;
  out.objective = est.objective;
  out.inner_iters = est.inner_iters_used;
  out.energies = subband_energies(est.r_hat, plan);
  out.occupancy = detect_holes(out.energies, config.threshold);
  if (options.keep_spectra) out.spectrum = std::move(est.r_hat);
  return out;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index,
                      std::size_t ratio_index, TrialOptions options) {
  TrialResult t;
  t.trial_index = trial_index;
  t.seed = trial_seed(config.seed, ratio_index, trial_index);
  try {
    t.ratio = config.ratios.at(ratio_index);
    const BandPlan plan = config.plan();
    GroundTruth truth = generate_multiband(config.signal, derive_seed(t.seed, Stream::kSignal));
    truth = add_awgn(std::move(truth), config.signal.snr_db, derive_seed(t.seed, Stream::kNoise));
    const SubbandEnergies true_e = true_subband_energy(truth, plan);
    t.true_energies = true_e.values;
    for (double e : true_e.values) t.active_mask.push_back(e > 0.0);

    const SamplingPattern pattern =
        draw_pattern(config.signal.n_bins, t.ratio, derive_seed(t.seed, Stream::kPattern));
    t.m = pattern.m();
    const CVector y = acquire(truth, pattern);
    t.pattern = pattern;

    for (Method m : config.methods) {
      t.methods.push_back(run_method(config, m, y, pattern, plan, options));
    }

    if (const MethodOutcome* base = t.find(Method::kBpdn)) {
      if (const MethodOutcome* v = t.find(Method::kVlbs)) {
        t.r1 = enhancement_ratio(base->energies, v->energies, t.active_mask);
      }
      if (const MethodOutcome* e = t.find(Method::kEvlbs)) {
        t.r2 = enhancement_ratio(base->energies, e->energies, t.active_mask);
      }
    }
    if (options.keep_spectra) t.true_spectrum = std::move(truth.spectrum);
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

namespace {

std::vector<std::optional<double>> mean_ratio(const std::vector<TrialResult>& trials,
                                              std::size_t k, bool second) {
  std::vector<std::optional<double>> out(k);
  for (std::size_t s = 0; s < k; ++s) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& t : trials) {
      if (!t.error.empty()) continue;
      const auto& r = second ? t.r2 : t.r1;
      if (r.size() == k && r[s]) {
        sum += *r[s];
        ++count;
      }
    }
    if (count > 0) out[s] = sum / static_cast<double>(count);
  }
  return out;
}

}  // namespace

AggregateReport aggregate(const ExperimentConfig& config, std::size_t ratio_index,
                          const std::vector<TrialResult>& trials) {
  const BandPlan plan = config.plan();
  const std::size_t k = plan.k();
  AggregateReport rep;
  rep.ratio = config.ratios.at(ratio_index);
  rep.trials = trials.size();
  rep.seed = config.seed;
  rep.band_edges_hz = config.band_edges_hz;
  rep.true_mean_energy.assign(k, 0.0);
  rep.active_mask.assign(k, false);

  std::size_t ok = 0;
  for (const auto& t : trials) {
    if (!t.error.empty()) {
      ++rep.error_count;
      continue;
    }
    if (ok == 0) rep.active_mask = t.active_mask;
    ++ok;
  }
  const std::size_t n_active = static_cast<std::size_t>(
      std::count(rep.active_mask.begin(), rep.active_mask.end(), true));
  const std::size_t n_inactive = k - n_active;

  for (Method m : config.methods) {
    MethodAggregate a;
    a.method = m;
    a.mean_energy.assign(k, 0.0);
    a.mean_energy_sq.assign(k, 0.0);
    a.occupied_rate.assign(k, 0.0);
    double hits = 0.0;
    double alarms = 0.0;
    double exact = 0.0;
    double iters = 0.0;
    for (const auto& t : trials) {
      if (!t.error.empty()) continue;
      const MethodOutcome* o = t.find(m);
      bool match = true;
      for (std::size_t s = 0; s < k; ++s) {
        const double e = o->energies.values[s];
        const bool occ = o->occupancy.occupied[s];
        a.mean_energy[s] += e;
        a.mean_energy_sq[s] += e * e;
        a.occupied_rate[s] += occ ? 1.0 : 0.0;
        if (rep.active_mask[s]) hits += occ ? 1.0 : 0.0;
        else alarms += occ ? 1.0 : 0.0;
        match = match && (occ == rep.active_mask[s]);
      }
      exact += match ? 1.0 : 0.0;
      iters += o->inner_iters;
      if (!o->converged) ++a.nonconverged;
      const auto& h = o->residual_history;
      if (a.mean_residual_history.size() < h.size()) {
        a.mean_residual_history.resize(h.size(), 0.0);
        a.residual_history_count.resize(h.size(), 0);
      }
      for (std::size_t j = 0; j < h.size(); ++j) {
        a.mean_residual_history[j] += h[j];
        ++a.residual_history_count[j];
      }
    }
    if (ok > 0) {
      const double n = static_cast<double>(ok);
      for (std::size_t s = 0; s < k; ++s) {
        a.mean_energy[s] /= n;
        a.mean_energy_sq[s] /= n;
        a.occupied_rate[s] /= n;
      }
      a.detection_rate = n_active ? hits / (n * static_cast<double>(n_active)) : 0.0;
      a.false_alarm_rate = n_inactive ? alarms / (n * static_cast<double>(n_inactive)) : 0.0;
      a.exact_mask_rate = exact / n;
      a.mean_inner_iters = iters / n;
    }
    for (std::size_t j = 0; j < a.mean_residual_history.size(); ++j) {
      a.mean_residual_history[j] /= static_cast<double>(a.residual_history_count[j]);
    }
    rep.methods.push_back(std::move(a));
  }

  for (const auto& t : trials) {
    if (!t.error.empty()) continue;
    for (std::size_t s = 0; s < k; ++s) rep.true_mean_energy[s] += t.true_energies[s];
  }
  if (ok > 0) {
    for (auto& v : rep.true_mean_energy) v /= static_cast<double>(ok);
  }
  rep.mean_r1 = mean_ratio(trials, k, false);
  rep.mean_r2 = mean_ratio(trials, k, true);

  for (const auto& t : trials) {
    if (!t.error.empty() || t.true_spectrum.empty()) continue;
    SpectrumSeries& ser = rep.series;
    ser.trial_index = t.trial_index;
    ser.trial_seed = t.seed;
    ser.pattern = t.pattern;
    const std::size_t n = t.true_spectrum.size();
    for (std::size_t i = 0; i < n; ++i) {
      ser.freq_hz.push_back(static_cast<double>(i) * config.signal.nyquist_hz /
                            static_cast<double>(n));
      ser.truth.push_back(std::abs(t.true_spectrum[i]));
    }
    for (const auto& o : t.methods) {
      RVector mag;
      mag.reserve(o.spectrum.size());
      for (const auto& c : o.spectrum) mag.push_back(std::abs(c));
      ser.magnitudes.emplace_back(o.method, std::move(mag));
    }
    break;
  }
  return rep;
}

MonteCarloRun run_monte_carlo(const ExperimentConfig& config, std::size_t ratio_index,
                              const ProgressFn& progress) {
  config.validate();
  if (ratio_index >= config.ratios.size()) {
    throw ConfigError("ratio: index " + std::to_string(ratio_index) + " out of range");
  }
  MonteCarloRun run;
  run.trials.resize(config.trials);
  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.trials)));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.trials) return;
      TrialOptions opts;
      opts.keep_spectra = (i == 0);
      run.trials[i] = run_trial(config, i, ratio_index, opts);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(d, config.trials);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  run.report = aggregate(config, ratio_index, run.trials);
  return run;
}

}  // namespace cwss
