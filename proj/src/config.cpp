#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cwss/harness.hpp"

namespace cwss {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kBpdn: return "bpdn";
    case Method::kVlbs: return "vlbs";
    case Method::kEvlbs: return "evlbs";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "bpdn") return Method::kBpdn;
  if (name == "vlbs") return Method::kVlbs;
  if (name == "evlbs") return Method::kEvlbs;
  return std::nullopt;
}

BandPlan ExperimentConfig::plan() const {
  return BandPlan::from_hz_edges(signal.n_bins, signal.nyquist_hz, band_edges_hz);
}

bool ExperimentConfig::has(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

namespace {

[[noreturn]] void fail(std::string_view key, const std::string& what) {
  throw ConfigError(std::string(key) + ": " + what);
}

const std::vector<ActiveBand>& reference_bands() {
  static const std::vector<ActiveBand> bands = {
      {30e6, 60e6, 0.0023, 0.0066},
      {120e6, 170e6, 0.0016, 0.0063},
      {300e6, 350e6, 0.0017, 0.0063},
      {420e6, 450e6, 0.0032, 0.0064},
  };
  return bands;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) fail("trials", "must be >= 1");
  if (ratios.empty()) fail("ratio", "at least one ratio is required");
  for (double r : ratios) {
    if (!(r > 0.0 && r <= 1.0)) {
      fail("ratio", "value " + std::to_string(r) + " out of range (0, 1]");
    }
    if (std::floor(r * static_cast<double>(signal.n_bins)) < 1.0) {
      fail("ratio", "selects no samples for n_bins = " + std::to_string(signal.n_bins));
    }
  }
  if (methods.empty()) fail("methods", "at least one method is required");
  if (!(eta_bpdn >= 0.0)) fail("eta_bpdn", "must be >= 0");
  if (!(eta_vlbs >= 0.0)) fail("eta_vlbs", "must be >= 0");
  if (!(eta_evlbs >= 0.0)) fail("eta_evlbs", "must be >= 0");
  if (!(threshold > 0.0)) fail("threshold", "must be > 0");
  if (!(evlbs.delta > 0.0)) fail("delta", "must be > 0");
  if (!(evlbs.epsilon > 0.0)) fail("epsilon", "must be > 0");
  if (evlbs.max_outer < 1) fail("max_outer", "must be >= 1");
  if (solver.max_inner_iters < 1) fail("max_inner_iters", "must be >= 1");
  if (!(solver.inner_tol > 0.0)) fail("inner_tol", "must be > 0");
  if (!(solver.admm_rho > 0.0)) fail("admm_rho", "must be > 0");
  if (std::isnan(signal.snr_db)) fail("snr_db", "must be a number");
  try {
    signal.validate();
  } catch (const InvalidArgument& e) {
    fail("active_bands", e.what());
  }
  try {
    (void)plan();
  } catch (const InvalidArgument& e) {
    fail("band_edges_hz", e.what());
  }
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {1, "four-bands-0.40", "4 active bands (30-60, 120-170, 300-350, 420-450 MHz), ratio 0.40"},
      {2, "three-bands-0.40", "3 active bands (120-170, 300-350, 420-450 MHz), ratio 0.40"},
      {3, "three-bands-0.35", "3 active bands (120-170, 300-350, 420-450 MHz), ratio 0.35"},
      {4, "two-bands-0.30", "2 active bands (120-170, 420-450 MHz), ratio 0.30"},
  };
  return list;
}

ExperimentConfig preset_config(int id) {
  const auto& ref = reference_bands();
  ExperimentConfig c;
  c.preset = id;
  c.signal.n_bins = 1024;
  c.signal.nyquist_hz = 500e6;
  c.signal.snr_db = 11.5;
  c.signal.random_phase = true;
  c.band_edges_hz = {0, 30e6, 60e6, 120e6, 170e6, 300e6, 350e6, 420e6, 450e6, 500e6};
  switch (id) {
    case 1:
      c.signal.active_bands = ref;
      c.ratios = {0.40};
      break;
    case 2:
      c.signal.active_bands = {ref[1], ref[2], ref[3]};
      c.ratios = {0.40};
      break;
    case 3:
      c.signal.active_bands = {ref[1], ref[2], ref[3]};
      c.ratios = {0.35};
      break;
    case 4:
      c.signal.active_bands = {ref[1], ref[3]};
      c.ratios = {0.30};
      break;
    default:
      fail("preset", "unknown preset " + std::to_string(id) + " (expected 1-4)");
  }
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  if (v == "inf" || v == "+inf") return INFINITY;
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || v.empty()) {
    fail(key, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

long long to_int(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || v.empty()) {
    fail(key, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || v.empty()) {
    fail(key, "expected a nonnegative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(key, "expected a boolean, got '" + std::string(v) + "'");
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<ActiveBand> to_bands(std::string_view key, std::string_view v) {
  std::vector<ActiveBand> out;
  if (v.empty() || v == "none") return out;
  for (auto item : split(v, ';')) {
    if (item.empty()) continue;
    const auto f = split(item, ':');
    if (f.size() != 4) {
      fail(key, "band '" + std::string(item) +
                    "' must be low_hz:high_hz:level_low:level_high");
    }
    out.push_back({to_double(key, f[0]), to_double(key, f[1]),
                   to_double(key, f[2]), to_double(key, f[3])});
  }
  return out;
}

std::vector<Method> to_methods(std::string_view key, std::string_view v) {
  std::vector<Method> out;
  if (v.empty() || v == "none") return out;
  for (auto item : split(v, ',')) {
    const auto m = parse_method(item);
    if (!m) fail(key, "unknown method '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *m) != out.end()) {
      fail(key, "method '" + std::string(item) + "' listed twice");
    }
    out.push_back(*m);
  }
  return out;
}

OutputFormats to_formats(std::string_view key, std::string_view v) {
  if (v == "csv") return {true, false};
  if (v == "json") return {false, true};
  if (v == "both") return {true, true};
  fail(key, "expected csv, json or both, got '" + std::string(v) + "'");
}

using Setter = void (*)(ExperimentConfig&, std::string_view, std::string_view);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_bins", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         const auto n = to_int(k, v);
         if (n < 2) fail(k, "must be >= 2");
         c.signal.n_bins = static_cast<std::size_t>(n);
       }},
      {"nyquist_hz", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.signal.nyquist_hz = to_double(k, v);
         if (!(c.signal.nyquist_hz > 0.0)) fail(k, "must be > 0");
       }},
      {"active_bands", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.signal.active_bands = to_bands(k, v);
       }},
      {"snr_db", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.signal.snr_db = to_double(k, v);
       }},
      {"random_phase", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.signal.random_phase = to_bool(k, v);
       }},
      {"band_edges_hz", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.band_edges_hz = to_doubles(k, v);
       }},
      {"ratio", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.ratios = to_doubles(k, v);
         for (double r : c.ratios) {
           if (!(r > 0.0 && r <= 1.0)) {
             fail(k, "value " + std::string(v) + " out of range (0, 1]");
           }
         }
       }},
      {"methods", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.methods = to_methods(k, v);
       }},
      {"eta_bpdn", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.eta_bpdn = to_double(k, v);
       }},
      {"eta_vlbs", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.eta_vlbs = to_double(k, v);
       }},
      {"eta_evlbs", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.eta_evlbs = to_double(k, v);
       }},
      {"delta", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.evlbs.delta = to_double(k, v);
       }},
      {"epsilon", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.evlbs.epsilon = to_double(k, v);
       }},
      {"epsilon_relative", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.evlbs.relative_epsilon = to_bool(k, v);
       }},
      {"max_outer", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.evlbs.max_outer = static_cast<int>(to_int(k, v));
       }},
      {"weight_power", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         if (v == "l1") {
           c.evlbs.power = SectionPower::kL1;
         } else if (v == "l2") {
           c.evlbs.power = SectionPower::kL2;
         } else {
           fail(k, "expected l1 or l2, got '" + std::string(v) + "'");
         }
       }},
      {"threshold", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.threshold = to_double(k, v);
       }},
      {"trials", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         const auto t = to_int(k, v);
         if (t < 1) fail(k, "must be >= 1");
         c.trials = static_cast<std::size_t>(t);
       }},
      {"seed", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.seed = to_u64(k, v);
       }},
      {"out_dir", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.out_dir = std::string(v);
       }},
      {"formats", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.formats = to_formats(k, v);
       }},
      {"threads", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         const auto t = to_int(k, v);
         if (t < 0) fail(k, "must be >= 0");
         c.threads = static_cast<unsigned>(t);
       }},
      {"max_inner_iters", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.solver.max_inner_iters = static_cast<int>(to_int(k, v));
       }},
      {"inner_tol", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.solver.inner_tol = to_double(k, v);
       }},
      {"admm_rho", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.solver.admm_rho = to_double(k, v);
       }},
      {"adaptive_rho", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.solver.adaptive_rho = to_bool(k, v);
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, sep)));
    const std::string value(trim(line.substr(sep + 1)));
    if (key != "preset" && !setters().contains(key)) {
      throw ConfigError(key + ": unknown key (line " + std::to_string(line_no) + ")");
    }
    if (!entries.emplace(key, value).second) {
      throw ConfigError(key + ": duplicate key (line " + std::to_string(line_no) + ")");
    }
  }

  int preset = 1;
  if (const auto it = entries.find("preset"); it != entries.end()) {
    preset = static_cast<int>(to_int("preset", it->second));
  }
  ExperimentConfig c = preset_config(preset);
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    setters().find(key)->second(c, key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cwss
