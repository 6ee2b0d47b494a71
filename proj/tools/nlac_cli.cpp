// nlac: nonlocal Allen-Cahn simulator and experiment harness.
//
//   nlac <run|convergence-time|convergence-space|convergence-delta|stability|bubble|coeffs>
//        [--config FILE] [--out DIR] [--seed U64] [--threads N] [--set key=value]...
//
// Exit codes: 0 ok, 1 numeric/runtime failure, 2 usage/config error.

#include "nlac/config.hpp"
#include "nlac/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace nlac;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::vector<std::string> settings;
};

ExperimentConfig resolve(ExperimentKind kind, const CommonArgs& args) {
  ExperimentConfig cfg = default_config(kind);
  if (!args.config_path.empty()) {
    std::ifstream is(args.config_path);
    if (!is) throw ConfigError("cannot open config file '" + args.config_path + "'");
    load_config(cfg, is, args.config_path);
  }
  for (const auto& s : args.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads < 1) throw ConfigError("--threads must be >= 1");
  cfg.threads = args.threads;
  cfg.out_dir = args.out_dir;
  return cfg;
}

std::string last_rate(const RateTable& t) {
  return t.rows.empty() || !t.rows.back().rate ? "-" : format_real(*t.rows.back().rate).substr(0, 6);
}

void execute(ExperimentKind kind, const ExperimentConfig& cfg) {
  char line[512];
  switch (kind) {
    case ExperimentKind::Run: {
      const auto r = run_single(cfg);
      std::snprintf(line, sizeof line, "run: steps=%ld t=%g max_norm=%.6g steady=%s out=%s",
                    r.state.step_index, r.state.t, max_norm(r.state.u), r.reached_steady ? "yes" : "no",
                    cfg.out_dir.c_str());
      break;
    }
    case ExperimentKind::ConvergenceTime: {
      std::ostringstream os;
      os << "convergence-time:";
      for (const auto& s : convergence_time(cfg))
        os << ' ' << to_string(s.scheme) << "(alpha=" << s.alpha << ",delta=" << s.delta
           << ")=" << last_rate(s.table);
      std::snprintf(line, sizeof line, "%s", os.str().c_str());
      break;
    }
    case ExperimentKind::ConvergenceSpace:
    case ExperimentKind::ConvergenceDelta: {
      std::ostringstream os;
      os << to_string(kind) << ':';
      const auto studies = kind == ExperimentKind::ConvergenceSpace ? convergence_space(cfg) : convergence_delta(cfg);
      for (const auto& s : studies) os << " alpha=" << s.alpha << " last_rate=" << last_rate(s.table);
      std::snprintf(line, sizeof line, "%s", os.str().c_str());
      break;
    }
    case ExperimentKind::Stability: {
      std::ostringstream os;
      os << "stability:";
      for (const auto& c : stability_experiment(cfg)) {
        double peak = 0.0;
        for (const auto& r : c.log.records()) peak = std::max(peak, r.max_norm);
        os << ' ' << c.label << "(max_norm<=" << peak << ",t=" << c.t_final << ')';
      }
      std::snprintf(line, sizeof line, "%s", os.str().c_str());
      break;
    }
    case ExperimentKind::Bubble: {
      std::ostringstream os;
      os << "bubble:";
      for (const auto& c : bubble_experiment(cfg))
        os << " delta=" << c.delta << " jump=" << c.measured_jump << " (predicted " << c.predicted_jump
           << (c.extinct ? ", extinct" : "") << (c.reached_steady ? "" : ", not steady") << ')';
      std::snprintf(line, sizeof line, "%s", os.str().c_str());
      break;
    }
    case ExperimentKind::Coeffs: {
      const auto s = coeffs_experiment(cfg);
      std::snprintf(line, sizeof line, "coeffs: r=%d alpha=%g delta=%g h=%g second_moment=%.15g", s.radius(),
                    s.kernel().alpha(), s.kernel().delta(), s.h(), s.second_moment());
      break;
    }
  }
  std::cout << line << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Allen-Cahn solver with ETD1/ETDRK2 time stepping"};
  app.require_subcommand(1);
  CommonArgs args;
  std::uint64_t seed_value = 0;

  const std::vector<ExperimentKind> kinds = {ExperimentKind::Run,
                                             ExperimentKind::ConvergenceTime,
                                             ExperimentKind::ConvergenceSpace,
                                             ExperimentKind::ConvergenceDelta,
                                             ExperimentKind::Stability,
                                             ExperimentKind::Bubble,
                                             ExperimentKind::Coeffs};
  std::vector<CLI::App*> subs;
  for (auto kind : kinds) {
    auto* sub = app.add_subcommand(to_string(kind));
    sub->add_option("--config", args.config_path, "key = value config file");
    sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed_value, "RNG seed (64-bit)");
    sub->add_option("--threads", args.threads, "worker threads for sweeps")->capture_default_str();
    sub->add_option("--set", args.settings, "override a config key (key=value), repeatable");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    if (subs[k]->count("--seed")) args.seed = seed_value;
    try {
      execute(kinds[k], resolve(kinds[k], args));
      return 0;
    } catch (const ConfigError& e) {
      std::cerr << "nlac: config error: " << e.what() << '\n';
      return 2;
    } catch (const std::invalid_argument& e) {
      std::cerr << "nlac: invalid parameters: " << e.what() << '\n';
      return 2;
    } catch (const NumericError& e) {
      std::cerr << "nlac: numeric failure at step " << e.step() << ": " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "nlac: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
