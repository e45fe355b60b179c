#pragma once

#include <string>
#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/config.hpp"
#include "hcwave/homogenize.hpp"
#include "hcwave/linalg.hpp"
#include "hcwave/mesh.hpp"

namespace hcwave {

/// Named CSV table; cells are kept as text so that what is written is exactly
/// what was computed.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  int column(const std::string &col) const;
  double number(std::size_t row, const std::string &col) const;
};

struct Report {
  std::string config_echo;
  std::vector<Table> tables;

  const Table &table(const std::string &name) const;
  bool has_table(const std::string &name) const;
  /// Writes <dir>/<name>.csv for every table, each starting with
  /// "# config: ...".
  void write(const std::string &dir) const;
};

/// Shortest round-trip decimal text.
std::string format_double(double v);

Coefficient build_coefficient(const Settings &s, const TensorMesh &fine,
                              double eps, double a0);

struct FineTrajectory {
  TensorMesh mesh{1, 2};
  Coefficient coeff;
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<Vector> states;    // zeta at t^n, n = 0..N
  std::vector<double> energies;  // discrete energy at t^n
};

FineTrajectory run_fine_reference(const Settings &s, double eps, double a0);
FineTrajectory run_fine_reference(const Settings &s);

/// energy.csv and snapshot_<t>.csv tables.
Report run_solve_fine(const ExperimentConfig &config);

CellResult run_homogenize(const ExperimentConfig &config, bool perforated);

/// errors over the hom.eps_list x hom.a0_list grid.
Report run_homogenization_error(const ExperimentConfig &config);

/// uε(t) against u0 + t v0 for a0 = eps^p, p in limit.p_list.
Report run_highcontrast_limit(const ExperimentConfig &config);

/// errors, rates and pairwise_rates (plus operator dumps if requested).
Report run_lod_convergence(const ExperimentConfig &config);

/// Least-squares slope of log(error) against log(H).
double estimate_rate(const std::vector<double> &H, const std::vector<double> &errors);
/// log(e_i / e_{i+1}) / log(H_i / H_{i+1}) for consecutive entries.
std::vector<double> pairwise_rates(const std::vector<double> &H,
                                   const std::vector<double> &errors);

}  // namespace hcwave
