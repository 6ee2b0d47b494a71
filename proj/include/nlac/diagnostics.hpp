// Energies, norms, jump measurement and convergence-rate tables.
#pragma once

#include "nlac/grid.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stencil.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlac {

double max_norm(const Field& u);

/// E_h(U) = 1/4 sum (U^2 - 1)^2 - eps^2/2 U^T D_h U with plain (unweighted)
/// sums, D_h applied by direct stencil summation.
double discrete_energy(const Field& u, const Stencil& stencil, double eps);

/// Same energy with D_h applied through the operator's symbol. Works for any
/// SpectralOperator, including the local 5-point reference.
double discrete_energy(const Field& u, const SpectralOperator& op);

/// h^2-weighted variant for plotting against continuum energies. Not used by
/// any stability check.
double physical_energy(const Field& u, const SpectralOperator& op);

/// max_i |u(i+1, row) - u(i, row)| along x at fixed y-index, periodic.
double measure_jump(const Field& u, int row);

/// Row index nearest y = X/2.
inline int default_jump_row(const Grid& grid) { return grid.n() / 2; }

struct RunRecord {
  double t;
  double max_norm;
  double energy;
  double increment_rate;
};

class RunLog {
public:
  /// Rejects non-finite values and non-increasing times.
  void append(const RunRecord& r);

  const std::vector<RunRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  void set_meta(const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

private:
  std::vector<RunRecord> records_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

struct RateRow {
  double param;
  double error;
  std::optional<double> rate;
};

struct RateTable {
  std::vector<RateRow> rows;
};

/// rate_i = log(e_{i-1}/e_i) / log(p_{i-1}/p_i); for halving parameters this
/// is log2 of the error ratio.
RateTable rate_table(const std::vector<std::pair<double, double>>& errors);

/// Columns t,max_norm,energy,increment_rate.
void write_runlog_csv(std::ostream& os, const RunLog& log);
/// Columns param,error,rate (rate empty on the first row).
void write_rates_csv(std::ostream& os, const RateTable& table);

/// %.17g
std::string format_real(double x);

}  // namespace nlac
