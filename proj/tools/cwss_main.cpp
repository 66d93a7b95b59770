// cwss: compressive wideband spectrum sensing experiment runner.
//
//   cwss run [config] [--trials N] [--seed S] [--ratio R,...] [--snr-db D]
//            [--methods bpdn,vlbs,evlbs] [--out DIR] [--format csv|json|both]
//   cwss presets
//   cwss trace [config] [--trial I] [--method evlbs] [--out FILE]
//
// Exit status: 0 when every trial completed, 1 when some trial raised an
// error, 2 on configuration or I/O errors.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cwss/harness.hpp"

namespace {

using namespace cwss;

struct RunArgs {
  std::string config_path;
  std::optional<int> preset;
  std::optional<std::size_t> trials;
  std::optional<Seed> seed;
  std::vector<double> ratios;
  std::optional<double> snr_db;
  std::string methods;
  std::string out_dir;
  std::string format;
  std::optional<unsigned> threads;
  bool quiet = false;
};

struct TraceArgs {
  std::string config_path;
  std::optional<int> preset;
  std::optional<Seed> seed;
  std::size_t trial = 0;
  std::size_t ratio_index = 0;
  std::string method = "evlbs";
  std::string out = "-";
};

ExperimentConfig base_config(const std::string& path, std::optional<int> preset) {
  if (!path.empty()) {
    if (preset) throw ConfigError("preset: give either a config file or --preset");
    return load_config(path);
  }
  return preset ? preset_config(*preset) : parse_config("");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string resolve_out_dir(const RunArgs& args, const ExperimentConfig& c) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv(std::string(kOutDirEnv).c_str()); env && *env) return env;
  return "results";
}

void print_summary(const AggregateReport& rep, const ExperimentConfig& c) {
  std::printf("ratio %.2f, %zu trials, seed %llu, %zu errors\n", rep.ratio, rep.trials,
              static_cast<unsigned long long>(c.seed), rep.error_count);
  std::printf("%-8s", "section");
  for (std::size_t s = 0; s < rep.true_mean_energy.size(); ++s) std::printf("%9zu", s + 1);
  std::printf("\n%-8s", "truth");
  for (double v : rep.true_mean_energy) std::printf("%9.4f", v);
  std::printf("\n");
  for (const auto& a : rep.methods) {
    std::printf("%-8s", std::string(method_name(a.method)).c_str());
    for (double v : a.mean_energy) std::printf("%9.4f", v);
    std::printf("   exact-mask %.3f  false-alarm %.3f\n", a.exact_mask_rate, a.false_alarm_rate);
  }
  auto ratio_row = [&](const char* name, const std::vector<std::optional<double>>& r) {
    if (std::none_of(r.begin(), r.end(), [](const auto& x) { return x.has_value(); })) return;
    std::printf("%-8s", name);
    for (const auto& v : r) {
      if (v) std::printf("%8.2f%%", 100.0 * *v);
      else std::printf("%9s", "NA");
    }
    std::printf("\n");
  };
  ratio_row("R1", rep.mean_r1);
  ratio_row("R2", rep.mean_r2);
}

int cmd_run(const RunArgs& args) {
  ExperimentConfig c = base_config(args.config_path, args.preset);
  if (args.trials) c.trials = *args.trials;
  if (args.seed) c.seed = *args.seed;
  if (!args.ratios.empty()) c.ratios = args.ratios;
  if (args.snr_db) c.signal.snr_db = *args.snr_db;
  if (args.threads) c.threads = *args.threads;
  if (!args.methods.empty()) {
    c.methods.clear();
    std::stringstream ss(args.methods);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto m = parse_method(item);
      if (!m) throw ConfigError("methods: unknown method '" + item + "'");
      c.methods.push_back(*m);
    }
  }
  if (!args.format.empty()) {
    if (args.format == "csv") c.formats = {true, false};
    else if (args.format == "json") c.formats = {false, true};
    else if (args.format == "both") c.formats = {true, true};
    else throw ConfigError("format: expected csv, json or both");
  }
  c.validate();
  const std::string out_dir = resolve_out_dir(args, c);

  bool any_error = false;
  for (std::size_t ri = 0; ri < c.ratios.size(); ++ri) {
    const auto start = std::chrono::steady_clock::now();
    ProgressFn progress;
    if (!args.quiet) {
      progress = [](std::size_t done, std::size_t total) {
        if (done == total || done % 10 == 0) {
          std::fprintf(stderr, "\r  trial %zu/%zu", done, total);
          if (done == total) std::fprintf(stderr, "\n");
        }
      };
    }
    const MonteCarloRun run = run_monte_carlo(c, ri, progress);
    EmitOptions eo;
    eo.formats = c.formats;
    if (c.ratios.size() > 1) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "report_r%.2f", c.ratios[ri]);
      eo.stem = buf;
    }
    eo.timestamp = utc_timestamp();
    eo.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto paths = emit_report(run.report, c, out_dir, eo);
    if (!args.quiet) {
      print_summary(run.report, c);
      for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
    }
    any_error = any_error || run.report.error_count > 0;
  }
  return any_error ? 1 : 0;
}

int cmd_presets() {
  for (const auto& p : presets()) {
    std::printf("%d  %-18s %s\n", p.id, std::string(p.name).c_str(),
                std::string(p.description).c_str());
  }
  return 0;
}

int cmd_trace(const TraceArgs& args) {
  ExperimentConfig c = base_config(args.config_path, args.preset);
  if (args.seed) c.seed = *args.seed;
  const auto method = parse_method(args.method);
  if (!method) throw ConfigError("method: unknown method '" + args.method + "'");
  c.methods = {*method};
  c.validate();
  if (args.ratio_index >= c.ratios.size()) throw ConfigError("ratio-index: out of range");

  TrialOptions opts;
  opts.record_trace = true;
  const TrialResult t = run_trial(c, args.trial, args.ratio_index, opts);
  if (!t.error.empty()) {
    std::fprintf(stderr, "cwss: trial %zu failed: %s\n", args.trial, t.error.c_str());
    return 1;
  }
  std::ostringstream out;
  out << "method,outer_step,iter,objective,primal_residual,dual_residual,eta_slack,rho\n";
  const MethodOutcome& o = t.methods.front();
  char buf[256];
  for (std::size_t step = 0; step < o.traces.size(); ++step) {
    for (const auto& r : o.traces[step]) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%d,%.10g,%.6g,%.6g,%.6g,%.6g\n",
                    std::string(method_name(o.method)).c_str(), step + 1, r.iter,
                    r.objective, r.primal_residual, r.dual_residual, r.eta_slack, r.rho);
      out << buf;
    }
  }
  if (args.out == "-") {
    std::cout << out.str();
  } else {
    std::ofstream f(args.out);
    if (!f) throw std::runtime_error(args.out + ": cannot open for writing");
    f << out.str();
    if (!f) throw std::runtime_error(args.out + ": write failed");
  }
  if (!o.residual_history.empty()) {
    std::fprintf(stderr, "outer residuals:");
    for (double h : o.residual_history) std::fprintf(stderr, " %.6g", h);
    std::fprintf(stderr, "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive wideband spectrum sensing experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run_cmd->add_option("config", run.config_path, "Config file (key = value)");
  run_cmd->add_option("--preset", run.preset, "Built-in scenario 1-4");
  run_cmd->add_option("--trials", run.trials, "Number of Monte Carlo trials");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--ratio", run.ratios, "Sub-sampling ratio(s)")->delimiter(',');
  run_cmd->add_option("--snr-db", run.snr_db, "Signal-to-noise ratio in dB");
  run_cmd->add_option("--methods", run.methods, "Comma list of bpdn,vlbs,evlbs");
  run_cmd->add_option("--out", run.out_dir, "Output directory (default $CWSS_OUT_DIR or ./results)");
  run_cmd->add_option("--format", run.format, "csv, json or both");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_flag("-q,--quiet", run.quiet, "No progress or summary output");

  app.add_subcommand("presets", "List the built-in scenarios");

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("trace", "Emit one trial's per-iteration solver trace");
  trace_cmd->add_option("config", trace.config_path, "Config file (key = value)");
  trace_cmd->add_option("--preset", trace.preset, "Built-in scenario 1-4");
  trace_cmd->add_option("--seed", trace.seed, "Master seed");
  trace_cmd->add_option("--trial", trace.trial, "Trial index");
  trace_cmd->add_option("--ratio-index", trace.ratio_index, "Index into the ratio list");
  trace_cmd->add_option("--method", trace.method, "bpdn, vlbs or evlbs");
  trace_cmd->add_option("--out", trace.out, "Output CSV path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (trace_cmd->parsed()) return cmd_trace(trace);
    return cmd_presets();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "cwss: config error: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cwss: %s\n", e.what());
  }
  return 2;
}
