// Experiment drivers behind the CLI subcommands. Each returns its results in
// memory and, when cfg.out_dir is set, writes its files plus metadata.txt.
#pragma once

#include "nlac/config.hpp"
#include "nlac/diagnostics.hpp"
#include "nlac/etd.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nlac {

Field initial_field(const Grid& grid, const InitialCondition& ic, double eps, std::uint64_t seed);

/// Runs fn(0..count-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct TimeStudy {
  double alpha;
  double delta;
  Scheme scheme;
  RateTable table;
};

struct SweepStudy {
  double alpha;
  RateTable table;
};

struct StabilityCase {
  std::string label;
  Model model;
  double delta;
  RunLog log;
  double initial_energy;
  bool reached_steady;
  double t_final;
};

struct BubbleCase {
  double delta;
  double predicted_jump;
  double measured_jump;
  bool reached_steady;
  double t_final;
  bool extinct;
};

RunResult run_single(const ExperimentConfig& cfg);
std::vector<TimeStudy> convergence_time(const ExperimentConfig& cfg);
std::vector<SweepStudy> convergence_space(const ExperimentConfig& cfg);
std::vector<SweepStudy> convergence_delta(const ExperimentConfig& cfg);
std::vector<StabilityCase> stability_experiment(const ExperimentConfig& cfg);
std::vector<BubbleCase> bubble_experiment(const ExperimentConfig& cfg);
Stencil coeffs_experiment(const ExperimentConfig& cfg);

}  // namespace nlac
