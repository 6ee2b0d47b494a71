#include "nlac/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nlac {

double max_norm(const Field& u) { return u.size() ? u.abs().maxCoeff() : 0.0; }

namespace {
double double_well(const Field& u) { return 0.25 * (u.square() - 1.0).square().sum(); }
}  // namespace

double discrete_energy(const Field& u, const Stencil& stencil, double eps) {
  const Field du = apply_direct(stencil, u);
  return double_well(u) - 0.5 * eps * eps * (u * du).sum();
}

double discrete_energy(const Field& u, const SpectralOperator& op) {
  const double eps = op.params().eps();
  const Field du = op.apply(SymbolKind::D, u);
  return double_well(u) - 0.5 * eps * eps * (u * du).sum();
}

double physical_energy(const Field& u, const SpectralOperator& op) {
  const double h = op.grid().h();
  return h * h * discrete_energy(u, op);
}

double measure_jump(const Field& u, int row) {
  const auto n = u.rows();
  if (row < 0 || row >= u.cols()) throw std::out_of_range("jump row outside the field");
  double jump = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    jump = std::max(jump, std::abs(u((i + 1) % n, row) - u(i, row)));
  return jump;
}

void RunLog::append(const RunRecord& r) {
  if (!std::isfinite(r.t) || !std::isfinite(r.max_norm) || !std::isfinite(r.energy) ||
      !std::isfinite(r.increment_rate))
    throw std::invalid_argument("run log record contains a non-finite value");
  if (!records_.empty() && !(r.t > records_.back().t))
    throw std::invalid_argument("run log times must be strictly increasing");
  records_.push_back(r);
}

void RunLog::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_)
    if (k == key) {
      v = value;
      return;
    }
  meta_.emplace_back(key, value);
}

RateTable rate_table(const std::vector<std::pair<double, double>>& errors) {
  RateTable table;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const auto [p, e] = errors[i];
    RateRow row{p, e, std::nullopt};
    if (i > 0) {
      const auto [p0, e0] = errors[i - 1];
      if (!(p0 > p)) throw std::invalid_argument("rate table parameters must be strictly decreasing");
      row.rate = std::log(e0 / e) / std::log(p0 / p);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_runlog_csv(std::ostream& os, const RunLog& log) {
  os << "t,max_norm,energy,increment_rate\n";
  for (const auto& r : log.records())
    os << format_real(r.t) << ',' << format_real(r.max_norm) << ',' << format_real(r.energy) << ','
       << format_real(r.increment_rate) << '\n';
}

void write_rates_csv(std::ostream& os, const RateTable& table) {
  os << "param,error,rate\n";
  for (const auto& r : table.rows)
    os << format_real(r.param) << ',' << format_real(r.error) << ','
       << (r.rate ? format_real(*r.rate) : std::string()) << '\n';
}

}  // namespace nlac
