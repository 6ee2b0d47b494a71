#include "nlac/experiments.hpp"

#include "nlac/field_io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <random>
#include <thread>

namespace nlac {

namespace fs = std::filesystem;

Field initial_field(const Grid& grid, const InitialCondition& ic, double eps, std::uint64_t seed) {
  switch (ic.kind) {
    case InitialKind::Sine: {
      const double a = ic.amplitude;
      return sample_function(grid, [a](double x, double y) { return a * std::sin(x) * std::sin(y); });
    }
    case InitialKind::Random: {
      std::mt19937_64 gen(seed);
      Field u(grid.n(), grid.n());
      // Fixed conversion, independent of the standard library's distributions.
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double unit = double(gen() >> 11) * 0x1.0p-53;
        u.data()[i] = ic.amplitude * (2.0 * unit - 1.0);
      }
      return u;
    }
    case InitialKind::Bubble: {
      const double radius = std::isnan(ic.radius) ? grid.extent() / 4.0 : ic.radius;
      const double width = std::isnan(ic.width) ? eps : ic.width;
      const double c = grid.extent() / 2.0;
      return sample_function(grid, [=](double x, double y) {
        return std::tanh((radius - std::hypot(x - c, y - c)) / (std::sqrt(2.0) * width));
      });
    }
  }
  throw std::invalid_argument("unknown initial condition");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1, threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace {

ModelParams model_params(const ExperimentConfig& cfg) {
  return ModelParams(cfg.eps, cfg.kappa, cfg.allow_small_kappa);
}

StencilOptions stencil_options(const ExperimentConfig& cfg) {
  StencilOptions o;
  o.quadrature_order = cfg.quadrature_order;
  o.allow_wrap = cfg.allow_wrap;
  return o;
}

SpectralOperator make_operator(const ExperimentConfig& cfg, Model model, double alpha, double delta,
                               const Grid& grid, double tau) {
  if (model == Model::LAC) return local_operator(grid, model_params(cfg), tau);
  return nonlocal_operator(KernelSpec(alpha, delta), grid, model_params(cfg), tau, stencil_options(cfg));
}

std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool writing(const ExperimentConfig& cfg) { return !cfg.out_dir.empty(); }

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) { return fs::path(cfg.out_dir) / name; }

void write_metadata(const ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  if (!writing(cfg)) return;
  write_file_atomic(out_path(cfg, "metadata.txt"), [&](std::ostream& os) {
    write_config(os, cfg);
    for (const auto& [k, v] : extra) os << "# " << k << " = " << v << '\n';
  });
}

void write_rates(const ExperimentConfig& cfg, const std::string& name, const RateTable& table) {
  if (!writing(cfg)) return;
  write_file_atomic(out_path(cfg, name), [&](std::ostream& os) { write_rates_csv(os, table); });
}

Field final_state(const SpectralOperator& op, const Field& u0, const TimePlan& plan, Scheme scheme) {
  RunOptions opts;
  opts.scheme = scheme;
  opts.log_energy = false;
  opts.log_stride = std::numeric_limits<int>::max();
  return run(op, u0, plan, opts).state.u;
}

}  // namespace

RunResult run_single(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.extent);
  const TimePlan plan(cfg.tau, cfg.t_end);
  const auto op = make_operator(cfg, cfg.model, cfg.alpha, cfg.delta, grid, cfg.tau);
  const Field u0 = initial_field(grid, cfg.initial, cfg.eps, cfg.seed);
  RunOptions opts;
  opts.scheme = cfg.scheme;
  opts.steady_tol = cfg.steady_tol;
  opts.log_stride = cfg.log_stride;
  RunResult result = run(op, u0, plan, opts);
  result.log.set_meta("code_version", kCodeVersion);
  result.log.set_meta("seed", std::to_string(cfg.seed));
  if (writing(cfg)) {
    write_file_atomic(out_path(cfg, "initial.field"), [&](std::ostream& os) { write_field(os, grid, u0, 0.0); });
    write_file_atomic(out_path(cfg, "final.field"),
                      [&](std::ostream& os) { write_field(os, grid, result.state.u, result.state.t); });
    write_file_atomic(out_path(cfg, "runlog.csv"), [&](std::ostream& os) { write_runlog_csv(os, result.log); });
  }
  write_metadata(cfg, {{"steps_taken", std::to_string(result.state.step_index)},
                       {"t_final", format_real(result.state.t)},
                       {"max_principle_guaranteed", model_params(cfg).max_principle_guaranteed() ? "true" : "false"}});
  return result;
}

std::vector<TimeStudy> convergence_time(const ExperimentConfig& cfg) {
  if (cfg.levels < 2) throw ConfigError("convergence-time needs levels >= 2");
  if (cfg.reference_factor < 1) throw ConfigError("reference_factor must be >= 1");
  const Grid grid(cfg.n, cfg.extent);
  const Field u0 = initial_field(grid, cfg.initial, cfg.eps, cfg.seed);

  struct Combo {
    double alpha, delta;
  };
  std::vector<Combo> combos;
  for (double a : cfg.alphas)
    for (double d : cfg.deltas) combos.push_back({a, d});

  std::vector<std::vector<TimeStudy>> per_combo(combos.size());
  parallel_for(combos.size(), cfg.threads, [&](std::size_t c) {
    const auto [alpha, delta] = combos[c];
    const double tau_min = cfg.tau * std::ldexp(1.0, -(cfg.levels - 1));
    const double tau_ref = tau_min / cfg.reference_factor;
    const auto base = make_operator(cfg, Model::NAC, alpha, delta, grid, cfg.tau);
    const Field reference = final_state(base.with_tau(tau_ref), u0, TimePlan(tau_ref, cfg.t_end), Scheme::ETDRK2);
    for (Scheme scheme : cfg.schemes) {
      std::vector<std::pair<double, double>> errors;
      for (int k = 0; k < cfg.levels; ++k) {
        const double tau = cfg.tau * std::ldexp(1.0, -k);
        const Field u = final_state(base.with_tau(tau), u0, TimePlan(tau, cfg.t_end), scheme);
        errors.emplace_back(tau, max_norm(u - reference));
      }
      per_combo[c].push_back({alpha, delta, scheme, rate_table(errors)});
    }
  });

  std::vector<TimeStudy> studies;
  for (auto& v : per_combo)
    for (auto& s : v) {
      write_rates(cfg, "rates_" + to_string(s.scheme) + "_alpha" + tag(s.alpha) + "_delta" + tag(s.delta) + ".csv",
                  s.table);
      studies.push_back(std::move(s));
    }
  write_metadata(cfg, {{"benchmark", "ETDRK2 at tau_min/" + std::to_string(cfg.reference_factor)}});
  return studies;
}

std::vector<SweepStudy> convergence_space(const ExperimentConfig& cfg) {
  for (int n : cfg.grid_sizes)
    if (n <= 0 || cfg.reference_n % n != 0)
      throw ConfigError("grid size " + std::to_string(n) + " does not divide reference_N");
  const TimePlan plan(cfg.tau, cfg.t_end);
  std::vector<SweepStudy> studies(cfg.alphas.size());
  parallel_for(cfg.alphas.size(), cfg.threads, [&](std::size_t a) {
    const double alpha = cfg.alphas[a];
    const Grid fine(cfg.reference_n, cfg.extent);
    const auto ref_op = make_operator(cfg, Model::NAC, alpha, cfg.delta, fine, cfg.tau);
    const Field reference = final_state(ref_op, initial_field(fine, cfg.initial, cfg.eps, cfg.seed), plan, cfg.scheme);
    std::vector<std::pair<double, double>> errors;
    for (int n : cfg.grid_sizes) {
      const Grid grid(n, cfg.extent);
      const auto op = make_operator(cfg, Model::NAC, alpha, cfg.delta, grid, cfg.tau);
      const Field u = final_state(op, initial_field(grid, cfg.initial, cfg.eps, cfg.seed), plan, cfg.scheme);
      const int stride = cfg.reference_n / n;
      double err = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) err = std::max(err, std::abs(u(i, j) - reference(i * stride, j * stride)));
      errors.emplace_back(grid.h(), err);
    }
    studies[a] = {alpha, rate_table(errors)};
  });
  for (const auto& s : studies) write_rates(cfg, "rates_alpha" + tag(s.alpha) + ".csv", s.table);
  write_metadata(cfg, {{"benchmark", "N=" + std::to_string(cfg.reference_n) + ", coincident nodes"}});
  return studies;
}

std::vector<SweepStudy> convergence_delta(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.extent);
  const TimePlan plan(cfg.tau, cfg.t_end);
  const Field u0 = initial_field(grid, cfg.initial, cfg.eps, cfg.seed);
  const Field local = final_state(local_operator(grid, model_params(cfg), cfg.tau), u0, plan, cfg.scheme);
  std::vector<SweepStudy> studies(cfg.alphas.size());
  parallel_for(cfg.alphas.size(), cfg.threads, [&](std::size_t a) {
    const double alpha = cfg.alphas[a];
    std::vector<std::pair<double, double>> errors;
    for (double delta : cfg.deltas) {
      const auto op = make_operator(cfg, Model::NAC, alpha, delta, grid, cfg.tau);
      errors.emplace_back(delta, max_norm(final_state(op, u0, plan, cfg.scheme) - local));
    }
    studies[a] = {alpha, rate_table(errors)};
  });
  for (const auto& s : studies) write_rates(cfg, "rates_alpha" + tag(s.alpha) + ".csv", s.table);
  write_metadata(cfg, {{"reference", "LAC, 5-point Laplacian, same grid"}});
  return studies;
}

std::vector<StabilityCase> stability_experiment(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.extent);
  const TimePlan plan(cfg.tau, cfg.t_end);
  const Field u0 = initial_field(grid, cfg.initial, cfg.eps, cfg.seed);

  struct Job {
    std::string label;
    Model model;
    double delta;
  };
  std::vector<Job> jobs;
  if (cfg.include_lac) jobs.push_back({"LAC", Model::LAC, 0.0});
  for (double d : cfg.deltas) jobs.push_back({"NAC_delta" + tag(d), Model::NAC, d});

  std::vector<StabilityCase> cases(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t k) {
    const auto& job = jobs[k];
    const auto op = make_operator(cfg, job.model, cfg.alpha, job.delta, grid, cfg.tau);
    RunOptions opts;
    opts.scheme = cfg.scheme;
    opts.steady_tol = cfg.steady_tol;
    opts.log_stride = cfg.log_stride;
    std::size_t next_dump = 0;
    opts.observer = [&](const SolverState& st) {
      while (next_dump < cfg.dump_times.size() && st.t >= cfg.dump_times[next_dump] - 0.5 * cfg.tau) {
        if (writing(cfg))
          write_file_atomic(out_path(cfg, "snap_" + job.label + "_t" + tag(cfg.dump_times[next_dump]) + ".field"),
                            [&](std::ostream& os) { write_field(os, grid, st.u, st.t); });
        ++next_dump;
      }
    };
    RunResult r = run(op, u0, plan, opts);
    r.log.set_meta("label", job.label);
    r.log.set_meta("seed", std::to_string(cfg.seed));
    if (writing(cfg)) {
      write_file_atomic(out_path(cfg, "runlog_" + job.label + ".csv"),
                        [&](std::ostream& os) { write_runlog_csv(os, r.log); });
      write_file_atomic(out_path(cfg, "final_" + job.label + ".field"),
                        [&](std::ostream& os) { write_field(os, grid, r.state.u, r.state.t); });
    }
    cases[k] = {job.label, job.model, job.delta, std::move(r.log), discrete_energy(u0, op), r.reached_steady,
                r.state.t};
  });
  write_metadata(cfg);
  return cases;
}

std::vector<BubbleCase> bubble_experiment(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.extent);
  const TimePlan plan(cfg.tau, cfg.t_end);
  const Field u0 = initial_field(grid, cfg.initial, cfg.eps, cfg.seed);
  const int row = cfg.jump_row >= 0 ? cfg.jump_row : default_jump_row(grid);
  if (row >= grid.n()) throw ConfigError("jump_row outside the grid");
  if (writing(cfg))
    write_file_atomic(out_path(cfg, "initial.field"), [&](std::ostream& os) { write_field(os, grid, u0, 0.0); });

  std::vector<BubbleCase> cases(cfg.deltas.size());
  parallel_for(cfg.deltas.size(), cfg.threads, [&](std::size_t k) {
    const double delta = cfg.deltas[k];
    const KernelSpec kernel(cfg.alpha, delta);
    const auto op = make_operator(cfg, Model::NAC, cfg.alpha, delta, grid, cfg.tau);
    RunOptions opts;
    opts.scheme = cfg.scheme;
    opts.steady_tol = cfg.steady_tol;
    opts.log_stride = cfg.log_stride;
    RunResult r = run(op, u0, plan, opts);
    const Field& u = r.state.u;
    const double predicted =
        kernel.integrable() ? predicted_jump(kernel, cfg.eps) : std::numeric_limits<double>::quiet_NaN();
    cases[k] = {delta, predicted, measure_jump(u, row), r.reached_steady, r.state.t, u.maxCoeff() < 0.0};
    if (writing(cfg)) {
      const std::string t = "delta" + tag(delta);
      write_file_atomic(out_path(cfg, "final_" + t + ".field"),
                        [&](std::ostream& os) { write_field(os, grid, u, r.state.t); });
      write_file_atomic(out_path(cfg, "runlog_" + t + ".csv"), [&](std::ostream& os) { write_runlog_csv(os, r.log); });
      write_file_atomic(out_path(cfg, "cross_" + t + ".csv"), [&](std::ostream& os) {
        os << "x,u\n";
        for (int i = 0; i < grid.n(); ++i) os << format_real(i * grid.h()) << ',' << format_real(u(i, row)) << '\n';
      });
    }
  });
  if (writing(cfg))
    write_file_atomic(out_path(cfg, "bubble_summary.csv"), [&](std::ostream& os) {
      os << "delta,predicted_jump,measured_jump,steady,t_final,extinct\n";
      for (const auto& c : cases)
        os << format_real(c.delta) << ',' << format_real(c.predicted_jump) << ',' << format_real(c.measured_jump)
           << ',' << (c.reached_steady ? 1 : 0) << ',' << format_real(c.t_final) << ',' << (c.extinct ? 1 : 0)
           << '\n';
    });
  write_metadata(cfg, {{"jump_row", std::to_string(row)}});
  return cases;
}

Stencil coeffs_experiment(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.extent);
  Stencil stencil = build_stencil(KernelSpec(cfg.alpha, cfg.delta), grid, stencil_options(cfg));
  if (writing(cfg))
    write_file_atomic(out_path(cfg, "stencil.txt"), [&](std::ostream& os) { write_stencil(os, stencil); });
  write_metadata(cfg);
  return stencil;
}

}  // namespace nlac
