#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cwss/harness.hpp"
#include "json.hpp"

namespace cwss {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Json optional_array(const std::vector<std::optional<double>>& v) {
  Json arr = Json::array();
  for (const auto& x : v) arr.push_back(x ? Json(*x) : Json(nullptr));
  return arr;
}

std::vector<std::optional<double>> optional_vector(const Json& arr) {
  std::vector<std::optional<double>> out;
  for (const auto& x : arr) {
    out.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
  }
  return out;
}

Json config_json(const ExperimentConfig& c) {
  Json bands = Json::array();
  for (const auto& b : c.signal.active_bands) {
    bands.push_back({{"low_hz", b.low_hz}, {"high_hz", b.high_hz},
                     {"level_low", b.level_low}, {"level_high", b.level_high}});
  }
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  return {
      {"preset", c.preset},
      {"n_bins", c.signal.n_bins},
      {"nyquist_hz", c.signal.nyquist_hz},
      {"active_bands", bands},
      {"snr_db", std::isinf(c.signal.snr_db) ? Json("inf") : Json(c.signal.snr_db)},
      {"random_phase", c.signal.random_phase},
      {"band_edges_hz", c.band_edges_hz},
      {"ratio", c.ratios},
      {"methods", methods},
      {"eta_bpdn", c.eta_bpdn},
      {"eta_vlbs", c.eta_vlbs},
      {"eta_evlbs", c.eta_evlbs},
      {"delta", c.evlbs.delta},
      {"epsilon", c.evlbs.epsilon},
      {"epsilon_relative", c.evlbs.relative_epsilon},
      {"max_outer", c.evlbs.max_outer},
      {"weight_power", c.evlbs.power == SectionPower::kL1 ? "l1" : "l2"},
      {"threshold", c.threshold},
      {"trials", c.trials},
      {"seed", c.seed},
      {"max_inner_iters", c.solver.max_inner_iters},
      {"inner_tol", c.solver.inner_tol},
      {"admm_rho", c.solver.admm_rho},
      {"adaptive_rho", c.solver.adaptive_rho},
  };
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path.string() + ": cannot open for writing");
  f << body;
  f.close();
  if (!f) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

std::string report_csv(const AggregateReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& a : report.methods) {
    for (std::size_t s = 0; s < a.mean_energy.size(); ++s) {
      const auto opt = [](const std::vector<std::optional<double>>& v, std::size_t i) {
        return i < v.size() && v[i] ? fmt("%.6f", *v[i]) : std::string("NA");
      };
      out += std::string(method_name(a.method)) + ',' + std::to_string(s + 1) + ',';
      out += fmt("%.0f", report.band_edges_hz.at(s)) + '-' +
             fmt("%.0f", report.band_edges_hz.at(s + 1)) + ',';
      out += fmt("%.6f", a.mean_energy[s]) + ',' + fmt("%.6f", a.occupied_rate[s]) + ',';
      out += opt(report.mean_r1, s) + ',' + opt(report.mean_r2, s) + '\n';
    }
  }
  return out;
}

std::string series_csv(const AggregateReport& report) {
  const SpectrumSeries& s = report.series;
  std::string out = "freq_hz,truth";
  for (const auto& [m, _] : s.magnitudes) out += ',' + std::string(method_name(m));
  out += '\n';
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i) {
    out += fmt("%.1f", s.freq_hz[i]) + ',' + fmt("%.9g", s.truth[i]);
    for (const auto& [m, mag] : s.magnitudes) out += ',' + fmt("%.9g", mag.at(i));
    out += '\n';
  }
  return out;
}

std::string report_json(const AggregateReport& report, const ExperimentConfig& config,
                        const EmitOptions& options) {
  Json methods = Json::array();
  for (const auto& a : report.methods) {
    methods.push_back({
        {"method", method_name(a.method)},
        {"mean_energy", a.mean_energy},
        {"mean_energy_sq", a.mean_energy_sq},
        {"occupied_rate", a.occupied_rate},
        {"detection_rate", a.detection_rate},
        {"false_alarm_rate", a.false_alarm_rate},
        {"exact_mask_rate", a.exact_mask_rate},
        {"mean_inner_iters", a.mean_inner_iters},
        {"nonconverged", a.nonconverged},
        {"mean_residual_history", a.mean_residual_history},
        {"residual_history_count", a.residual_history_count},
    });
  }
  Json mask = Json::array();
  for (bool b : report.active_mask) mask.push_back(b);
  Json series_trial = nullptr;
  if (!report.series.freq_hz.empty()) {
    const SamplingPattern& p = report.series.pattern;
    series_trial = {{"trial_index", report.series.trial_index},
                    {"seed", report.series.trial_seed},
                    {"pattern", {{"n", p.n}, {"m", p.m()}, {"seed", p.seed}, {"indices", p.indices}}}};
  }
  const Json doc = {
      {"tool_version", kToolVersion},
      {"master_seed", report.seed},
      {"ratio", report.ratio},
      {"trials", report.trials},
      {"error_count", report.error_count},
      {"band_edges_hz", report.band_edges_hz},
      {"active_mask", mask},
      {"true_mean_energy", report.true_mean_energy},
      {"methods", methods},
      {"mean_r1", optional_array(report.mean_r1)},
      {"mean_r2", optional_array(report.mean_r2)},
      {"series_trial", series_trial},
      {"config", config_json(config)},
      {"run_info", {{"timestamp", options.timestamp}, {"wall_seconds", options.wall_seconds}}},
  };
  return doc.dump(2) + '\n';
}

AggregateReport report_from_json(std::string_view text) {
  const Json doc = Json::parse(text);
  AggregateReport r;
  r.seed = doc.at("master_seed").get<Seed>();
  r.ratio = doc.at("ratio").get<double>();
  r.trials = doc.at("trials").get<std::size_t>();
  r.error_count = doc.at("error_count").get<std::size_t>();
  r.band_edges_hz = doc.at("band_edges_hz").get<std::vector<double>>();
  r.active_mask = doc.at("active_mask").get<std::vector<bool>>();
  r.true_mean_energy = doc.at("true_mean_energy").get<RVector>();
  for (const auto& m : doc.at("methods")) {
    MethodAggregate a;
    const auto method = parse_method(m.at("method").get<std::string>());
    if (!method) throw std::runtime_error("report: unknown method in JSON");
    a.method = *method;
    a.mean_energy = m.at("mean_energy").get<RVector>();
    a.mean_energy_sq = m.at("mean_energy_sq").get<RVector>();
    a.occupied_rate = m.at("occupied_rate").get<RVector>();
    a.detection_rate = m.at("detection_rate").get<double>();
    a.false_alarm_rate = m.at("false_alarm_rate").get<double>();
    a.exact_mask_rate = m.at("exact_mask_rate").get<double>();
    a.mean_inner_iters = m.at("mean_inner_iters").get<double>();
    a.nonconverged = m.at("nonconverged").get<std::size_t>();
    a.mean_residual_history = m.at("mean_residual_history").get<RVector>();
    a.residual_history_count = m.at("residual_history_count").get<std::vector<std::size_t>>();
    r.methods.push_back(std::move(a));
  }
  r.mean_r1 = optional_vector(doc.at("mean_r1"));
  r.mean_r2 = optional_vector(doc.at("mean_r2"));
  if (const Json& st = doc.at("series_trial"); !st.is_null()) {
    r.series.trial_index = st.at("trial_index").get<std::size_t>();
    r.series.trial_seed = st.at("seed").get<Seed>();
    const Json& p = st.at("pattern");
    r.series.pattern.n = p.at("n").get<std::size_t>();
    r.series.pattern.seed = p.at("seed").get<Seed>();
    r.series.pattern.indices = p.at("indices").get<std::vector<std::size_t>>();
  }
  return r;
}

std::vector<std::filesystem::path> emit_report(const AggregateReport& report,
                                               const ExperimentConfig& config,
                                               const std::filesystem::path& out_dir,
                                               const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error(out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (options.formats.csv) {
    written.push_back(out_dir / (options.stem + ".csv"));
    write_file(written.back(), report_csv(report));
    if (!report.series.freq_hz.empty()) {
      written.push_back(out_dir / (options.stem + "_spectrum.csv"));
      write_file(written.back(), series_csv(report));
    }
  }
  if (options.formats.json) {
    written.push_back(out_dir / (options.stem + ".json"));
    write_file(written.back(), report_json(report, config, options));
  }
  return written;
}

}  // namespace cwss
