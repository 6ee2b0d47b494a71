// Experiment configuration: flat "key = value" text, '#' comments, unknown
// keys rejected.
#pragma once

#include "nlac/etd.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlac {

/// Bad configuration or command line; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { Sine, Random, Bubble };

struct InitialCondition {
  InitialKind kind = InitialKind::Sine;
  /// Sine: u0 = A sin x sin y. Random: uniform on [-A, A].
  double amplitude = 0.5;
  /// Bubble radius and tanh width; NaN selects X/4 and eps.
  double radius = std::numeric_limits<double>::quiet_NaN();
  double width = std::numeric_limits<double>::quiet_NaN();
};

enum class ExperimentKind { Run, ConvergenceTime, ConvergenceSpace, ConvergenceDelta, Stability, Bubble, Coeffs };

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Run;

  double alpha = 1.0;
  double delta = 2.0;
  double eps = 0.1;
  double kappa = 2.0;
  bool allow_small_kappa = false;
  int n = 128;
  double extent = 6.283185307179586;
  double tau = 0.01;
  double t_end = 1.0;
  Scheme scheme = Scheme::ETDRK2;
  Model model = Model::NAC;
  InitialCondition initial;
  std::uint64_t seed = 42;
  int quadrature_order = 16;
  bool allow_wrap = false;
  double steady_tol = 0.0;
  int log_stride = 0;
  int jump_row = -1;

  // Sweeps.
  std::vector<double> alphas{1.0, 3.0};
  std::vector<double> deltas{0.2, 2.0};
  int levels = 6;
  int reference_factor = 64;
  std::vector<int> grid_sizes{16, 32, 64, 128, 256};
  int reference_n = 512;
  std::vector<double> dump_times{6.0, 14.0, 50.0, 180.0};
  bool include_lac = true;
  std::vector<Scheme> schemes{Scheme::ETD1, Scheme::ETDRK2};

  // Not part of the echoed parameter set.
  std::string out_dir;
  int threads = 1;
};

/// Desk-scale defaults for each subcommand.
ExperimentConfig default_config(ExperimentKind kind);

/// Applies one "key = value" assignment.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a config file on top of cfg. An "experiment" key, if present, must
/// match cfg.experiment.
void load_config(ExperimentConfig& cfg, std::istream& is, const std::string& source = "<config>");

/// Writes every parameter as key = value lines (re-loadable by load_config),
/// preceded by '#' comment lines carrying code version and RNG algorithm.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

inline constexpr const char* kCodeVersion = "nlac 1.0.0";
inline constexpr const char* kRngAlgorithm = "mt19937_64, u = (x >> 11) * 2^-53";

}  // namespace nlac
