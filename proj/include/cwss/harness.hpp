#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwss/band_plan.hpp"
#include "cwss/detection.hpp"
#include "cwss/sampling.hpp"
#include "cwss/signal_model.hpp"
#include "cwss/solver.hpp"
#include "cwss/types.hpp"

namespace cwss {

inline constexpr std::string_view kToolVersion = "cwss 0.1.0";
inline constexpr std::string_view kOutDirEnv = "CWSS_OUT_DIR";

enum class Method { kBpdn, kVlbs, kEvlbs };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFormats {
  bool csv = true;
  bool json = true;
};

struct ExperimentConfig {
  int preset = 1;
  SignalSpec signal;
  std::vector<double> band_edges_hz;
  std::vector<double> ratios{0.40};
  std::vector<Method> methods{Method::kBpdn, Method::kVlbs, Method::kEvlbs};
  // Noise bounds as multiples of ||y_t||_2.
  double eta_bpdn = 0.1;
  double eta_vlbs = 0.2;
  double eta_evlbs = 0.2;
  EvlbsOptions evlbs;
  SolverOptions solver;
  double threshold = 0.1;
  std::size_t trials = 200;
  Seed seed = 1;
  std::string out_dir;  // empty: CLI flag, then $CWSS_OUT_DIR, then "results"
  OutputFormats formats;
  unsigned threads = 0;  // 0: hardware concurrency

  BandPlan plan() const;
  bool has(Method m) const;
  // Throws ConfigError naming the offending key.
  void validate() const;
};

struct PresetInfo {
  int id;
  std::string_view name;
  std::string_view description;
};

const std::vector<PresetInfo>& presets();
ExperimentConfig preset_config(int id);

// Flat `key = value` document (`key: value` is accepted too); `#` starts a
// comment. An empty document yields preset 1. Unknown keys, duplicate keys
// and out-of-range values raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct MethodOutcome {
  Method method = Method::kBpdn;
  double residual_norm = 0.0;
  double objective = 0.0;
  int inner_iters = 0;
  bool converged = false;
  double eta = 0.0;
  double wall_seconds = 0.0;
  SubbandEnergies energies;
  OccupancyReport occupancy;
  // EVLBS only.
  RVector residual_history;
  int outer_iters = 0;
  bool outer_converged = false;
  double epsilon_abs = 0.0;
  CVector spectrum;  // kept only when requested
  std::vector<std::vector<IterationRecord>> traces;
};

struct TrialResult {
  std::size_t trial_index = 0;
  Seed seed = 0;
  double ratio = 0.0;
  std::size_t m = 0;
  SamplingPattern pattern;
  RVector true_energies;
  std::vector<bool> active_mask;
  std::vector<MethodOutcome> methods;
  // Empty when BPDN or the compared method did not run.
  std::vector<std::optional<double>> r1;
  std::vector<std::optional<double>> r2;
  CVector true_spectrum;  // kept only when requested
  std::string error;

  const MethodOutcome* find(Method m) const;
};

struct TrialOptions {
  bool keep_spectra = false;
  bool record_trace = false;
};

Seed trial_seed(Seed master, std::size_t ratio_index, std::size_t trial_index);

// Never throws for solver trouble: failures land in TrialResult::error.
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index,
                      std::size_t ratio_index = 0, TrialOptions options = {});

struct MethodAggregate {
  Method method = Method::kBpdn;
  RVector mean_energy;     // mean ||r_k||_2 after normalization
  RVector mean_energy_sq;  // mean ||r_k||_2^2
  RVector occupied_rate;   // fraction of trials flagged occupied
  double detection_rate = 0.0;    // over active sections
  double false_alarm_rate = 0.0;  // over inactive sections
  double exact_mask_rate = 0.0;
  double mean_inner_iters = 0.0;
  std::size_t nonconverged = 0;
  // EVLBS: mean ||r_t - r_{t-1}|| at t = 2, 3, ... over trials reaching t.
  RVector mean_residual_history;
  std::vector<std::size_t> residual_history_count;
};

struct SpectrumSeries {
  std::size_t trial_index = 0;
  Seed trial_seed = 0;
  SamplingPattern pattern;
  RVector freq_hz;
  RVector truth;
  std::vector<std::pair<Method, RVector>> magnitudes;
};

struct AggregateReport {
  double ratio = 0.0;
  std::size_t trials = 0;
  Seed seed = 0;
  std::vector<double> band_edges_hz;
  RVector true_mean_energy;
  std::vector<bool> active_mask;
  std::vector<MethodAggregate> methods;
  // Mean of the per-trial ratios; empty optional where never defined.
  std::vector<std::optional<double>> mean_r1;
  std::vector<std::optional<double>> mean_r2;
  std::size_t error_count = 0;
  SpectrumSeries series;

  const MethodAggregate* find(Method m) const;
};

// Deterministic reduction in trial-index order.
AggregateReport aggregate(const ExperimentConfig& config, std::size_t ratio_index,
                          const std::vector<TrialResult>& trials);

struct MonteCarloRun {
  std::vector<TrialResult> trials;
  AggregateReport report;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

MonteCarloRun run_monte_carlo(const ExperimentConfig& config,
                              std::size_t ratio_index = 0,
                              const ProgressFn& progress = {});

struct EmitOptions {
  OutputFormats formats;
  std::string stem = "report";
  std::string timestamp;  // goes into the run_info block only
  double wall_seconds = 0.0;
};

inline constexpr std::string_view kCsvHeader =
    "method,section,hz_range,mean_energy,detection_rate,r1,r2";

std::string report_csv(const AggregateReport& report);
std::string series_csv(const AggregateReport& report);
std::string report_json(const AggregateReport& report,
                        const ExperimentConfig& config,
                        const EmitOptions& options);
AggregateReport report_from_json(std::string_view text);

// Writes <stem>.csv, <stem>.json and <stem>_spectrum.csv under out_dir.
// Returns the written paths; I/O failures throw std::runtime_error with the
// path in the message.
std::vector<std::filesystem::path> emit_report(const AggregateReport& report,
                                               const ExperimentConfig& config,
                                               const std::filesystem::path& out_dir,
                                               const EmitOptions& options);

}  // namespace cwss
