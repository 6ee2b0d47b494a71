#include "nlac/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace nlac {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "pi") return std::numbers::pi;
  if (v == "2pi" || v == "2*pi") return 2.0 * std::numbers::pi;
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a real number, got '" + text + "'");
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  long long x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long x = parse_integer(key, text);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError("key '" + key + "': integer out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Scheme parse_scheme(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "ETD1") return Scheme::ETD1;
  if (v == "ETDRK2") return Scheme::ETDRK2;
  throw ConfigError("key '" + key + "': expected ETD1 or ETDRK2, got '" + text + "'");
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Sine: return "sine";
    case InitialKind::Random: return "random";
    case InitialKind::Bubble: return "bubble";
  }
  return "?";
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha", [](auto& c, auto& k, auto& v) { c.alpha = parse_real(k, v); }},
      {"delta", [](auto& c, auto& k, auto& v) { c.delta = parse_real(k, v); }},
      {"eps", [](auto& c, auto& k, auto& v) { c.eps = parse_real(k, v); }},
      {"kappa", [](auto& c, auto& k, auto& v) { c.kappa = parse_real(k, v); }},
      {"allow_small_kappa", [](auto& c, auto& k, auto& v) { c.allow_small_kappa = parse_bool(k, v); }},
      {"N", [](auto& c, auto& k, auto& v) { c.n = parse_int(k, v); }},
      {"X", [](auto& c, auto& k, auto& v) { c.extent = parse_real(k, v); }},
      {"tau", [](auto& c, auto& k, auto& v) { c.tau = parse_real(k, v); }},
      {"T", [](auto& c, auto& k, auto& v) { c.t_end = parse_real(k, v); }},
      {"scheme", [](auto& c, auto& k, auto& v) { c.scheme = parse_scheme(k, v); }},
      {"model",
       [](auto& c, auto& k, auto& v) {
         const std::string m = trim(v);
         if (m == "NAC") c.model = Model::NAC;
         else if (m == "LAC") c.model = Model::LAC;
         else throw ConfigError("key '" + k + "': expected NAC or LAC, got '" + v + "'");
       }},
      {"init",
       [](auto& c, auto& k, auto& v) {
         const std::string m = trim(v);
         if (m == "sine") c.initial.kind = InitialKind::Sine;
         else if (m == "random") c.initial.kind = InitialKind::Random;
         else if (m == "bubble") c.initial.kind = InitialKind::Bubble;
         else throw ConfigError("key '" + k + "': expected sine, random or bubble, got '" + v + "'");
       }},
      {"amplitude", [](auto& c, auto& k, auto& v) { c.initial.amplitude = parse_real(k, v); }},
      {"bubble_radius", [](auto& c, auto& k, auto& v) { c.initial.radius = parse_real(k, v); }},
      {"bubble_width", [](auto& c, auto& k, auto& v) { c.initial.width = parse_real(k, v); }},
      {"seed",
       [](auto& c, auto& k, auto& v) {
         const std::string s = trim(v);
         std::uint64_t x = 0;
         auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
         if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
           throw ConfigError("key '" + k + "': expected an unsigned 64-bit integer, got '" + v + "'");
         c.seed = x;
       }},
      {"quadrature_order", [](auto& c, auto& k, auto& v) { c.quadrature_order = parse_int(k, v); }},
      {"allow_wrap", [](auto& c, auto& k, auto& v) { c.allow_wrap = parse_bool(k, v); }},
      {"steady_tol", [](auto& c, auto& k, auto& v) { c.steady_tol = parse_real(k, v); }},
      {"log_stride", [](auto& c, auto& k, auto& v) { c.log_stride = parse_int(k, v); }},
      {"jump_row", [](auto& c, auto& k, auto& v) { c.jump_row = parse_int(k, v); }},
      {"alphas",
       [](auto& c, auto& k, auto& v) {
         c.alphas.clear();
         for (const auto& s : split_list(v)) c.alphas.push_back(parse_real(k, s));
       }},
      {"deltas",
       [](auto& c, auto& k, auto& v) {
         c.deltas.clear();
         for (const auto& s : split_list(v)) c.deltas.push_back(parse_real(k, s));
       }},
      {"levels", [](auto& c, auto& k, auto& v) { c.levels = parse_int(k, v); }},
      {"reference_factor", [](auto& c, auto& k, auto& v) { c.reference_factor = parse_int(k, v); }},
      {"grid_sizes",
       [](auto& c, auto& k, auto& v) {
         c.grid_sizes.clear();
         for (const auto& s : split_list(v)) c.grid_sizes.push_back(parse_int(k, s));
       }},
      {"reference_N", [](auto& c, auto& k, auto& v) { c.reference_n = parse_int(k, v); }},
      {"dump_times",
       [](auto& c, auto& k, auto& v) {
         c.dump_times.clear();
         for (const auto& s : split_list(v)) c.dump_times.push_back(parse_real(k, s));
       }},
      {"include_lac", [](auto& c, auto& k, auto& v) { c.include_lac = parse_bool(k, v); }},
      {"schemes",
       [](auto& c, auto& k, auto& v) {
         c.schemes.clear();
         for (const auto& s : split_list(v)) c.schemes.push_back(parse_scheme(k, s));
       }},
  };
  return table;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Run: return "run";
    case ExperimentKind::ConvergenceTime: return "convergence-time";
    case ExperimentKind::ConvergenceSpace: return "convergence-space";
    case ExperimentKind::ConvergenceDelta: return "convergence-delta";
    case ExperimentKind::Stability: return "stability";
    case ExperimentKind::Bubble: return "bubble";
    case ExperimentKind::Coeffs: return "coeffs";
  }
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::Run, ExperimentKind::ConvergenceTime, ExperimentKind::ConvergenceSpace,
                 ExperimentKind::ConvergenceDelta, ExperimentKind::Stability, ExperimentKind::Bubble,
                 ExperimentKind::Coeffs})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::Run:
      c.n = 128;
      c.tau = 0.01;
      c.t_end = 1.0;
      break;
    case ExperimentKind::ConvergenceTime:
      c.n = 128;
      c.tau = 0.05;
      c.t_end = 0.5;
      c.alphas = {1.0, 3.0};
      c.deltas = {0.2, 2.0};
      c.levels = 6;
      c.reference_factor = 64;
      break;
    case ExperimentKind::ConvergenceSpace:
      c.delta = 2.0;
      c.tau = 0.5;
      c.t_end = 0.5;
      c.alphas = {1.0, 3.0};
      c.grid_sizes = {16, 32, 64, 128, 256};
      c.reference_n = 512;
      break;
    case ExperimentKind::ConvergenceDelta:
      c.n = 512;
      c.tau = 0.5;
      c.t_end = 0.5;
      c.alphas = {1.0};
      c.deltas = {0.2, 0.1, 0.05, 0.025};
      break;
    case ExperimentKind::Stability:
      c.n = 128;
      c.tau = 0.01;
      c.t_end = 200.0;
      c.initial.kind = InitialKind::Random;
      c.initial.amplitude = 0.9;
      c.deltas = {0.3, 0.4};
      c.steady_tol = 1e-8;
      c.dump_times = {6.0, 14.0, 50.0, 180.0};
      break;
    case ExperimentKind::Bubble:
      c.n = 512;
      c.tau = 0.01;
      c.t_end = 500.0;
      c.initial.kind = InitialKind::Bubble;
      c.deltas = {0.2, 0.8, 1.6, 3.2};
      c.steady_tol = 1e-8;
      c.allow_wrap = true;
      break;
    case ExperimentKind::Coeffs:
      c.delta = 0.2;
      c.n = 20;
      c.extent = 2.0;
      break;
  }
  return c;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

void load_config(ExperimentConfig& cfg, std::istream& is, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "experiment") {
        if (parse_experiment(value) != cfg.experiment)
          throw ConfigError("config is for experiment '" + value + "', not '" + to_string(cfg.experiment) + "'");
        continue;
      }
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "# code_version = " << kCodeVersion << '\n';
  os << "# rng = " << kRngAlgorithm << '\n';
  os << "experiment = " << to_string(c.experiment) << '\n';
  os << "alpha = " << format_real(c.alpha) << '\n';
  os << "delta = " << format_real(c.delta) << '\n';
  os << "eps = " << format_real(c.eps) << '\n';
  os << "kappa = " << format_real(c.kappa) << '\n';
  os << "allow_small_kappa = " << (c.allow_small_kappa ? "true" : "false") << '\n';
  os << "N = " << c.n << '\n';
  os << "X = " << format_real(c.extent) << '\n';
  os << "tau = " << format_real(c.tau) << '\n';
  os << "T = " << format_real(c.t_end) << '\n';
  os << "scheme = " << to_string(c.scheme) << '\n';
  os << "model = " << to_string(c.model) << '\n';
  os << "init = " << to_string(c.initial.kind) << '\n';
  os << "amplitude = " << format_real(c.initial.amplitude) << '\n';
  if (!std::isnan(c.initial.radius)) os << "bubble_radius = " << format_real(c.initial.radius) << '\n';
  if (!std::isnan(c.initial.width)) os << "bubble_width = " << format_real(c.initial.width) << '\n';
  os << "seed = " << c.seed << '\n';
  os << "quadrature_order = " << c.quadrature_order << '\n';
  os << "allow_wrap = " << (c.allow_wrap ? "true" : "false") << '\n';
  os << "steady_tol = " << format_real(c.steady_tol) << '\n';
  os << "log_stride = " << c.log_stride << '\n';
  os << "jump_row = " << c.jump_row << '\n';
  os << "alphas = " << join(c.alphas) << '\n';
  os << "deltas = " << join(c.deltas) << '\n';
  os << "levels = " << c.levels << '\n';
  os << "reference_factor = " << c.reference_factor << '\n';
  os << "grid_sizes = " << join(c.grid_sizes) << '\n';
  os << "reference_N = " << c.reference_n << '\n';
  os << "dump_times = " << join(c.dump_times) << '\n';
  os << "include_lac = " << (c.include_lac ? "true" : "false") << '\n';
  os << "schemes = ";
  for (std::size_t i = 0; i < c.schemes.size(); ++i) os << (i ? "," : "") << to_string(c.schemes[i]);
  os << '\n';
}

}  // namespace nlac
