#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/lod.hpp"
#include "hcwave/timestep.hpp"

namespace hcwave {

/// Flat `key = value` configuration. Every key has a default; unknown keys
/// and malformed values are rejected when set.
///
///   dim                      1 | 2
///   fine.h                   2^-8
///   time.tau, time.T         2^-7, 0.25
///   time.scheme              midpoint | crank_nicolson
///   time.literal_mass_load   false
///   coeff.kind               periodic | random | constant
///   coeff.eps, coeff.a0      2^-4, eps^2  (a0 may be a number or eps^p)
///   coeff.seed               1
///   coeff.region             lo,hi  or  xlo,xhi,ylo,yhi
///   field.u0, field.v0, field.f
///   lod.H_list, lod.k_list
///   lod.interpolation        standard | weighted
///   lod.formulation          galerkin | petrov_galerkin
///   lod.v0_projection        elliptic | l2
///   norms                    l2,weighted_l2,energy
///   hom.eps_list, hom.a0_list
///   cell.cells, cell.side, cell.perforated
///   limit.p_list             0,2,3
///   output.snapshot_times    empty
///   output.dump_operators    false
///   threads                  1
class ExperimentConfig {
 public:
  ExperimentConfig();

  static ExperimentConfig from_text(const std::string &text);
  static ExperimentConfig from_file(const std::string &path);

  void set(const std::string &key, const std::string &value);
  std::string get(const std::string &key) const;
  bool has_key(const std::string &key) const;
  const std::map<std::string, std::string> &values() const { return values_; }

  /// One line, `key=value` pairs separated by "; ".
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Parses "0.25", "2^-3", "1/4", "-1".
double parse_number(const std::string &text);
std::vector<double> parse_number_list(const std::string &text);

/// Typed view of a configuration; computed on demand.
struct Settings {
  int dim = 1;
  double fine_h = 0.0;
  double tau = 0.0;
  double final_time = 0.0;
  StepOptions step;
  CoefficientKind coeff_kind = CoefficientKind::periodic;
  double eps = 0.0;
  std::string a0_spec;
  std::uint64_t seed = 1;
  Box region = Box::unit();
  Field u0, v0, f;
  std::vector<double> H_list;
  std::vector<int> k_list;
  bool weighted_interpolation = false;
  Formulation formulation = Formulation::galerkin;
  bool v0_elliptic = true;
  std::vector<std::string> norms;
  std::vector<double> hom_eps_list;
  std::vector<double> hom_a0_list;
  int cell_cells = 64;
  double cell_side = 0.5;
  bool perforated = false;
  std::vector<double> p_list;
  std::vector<double> snapshot_times;
  bool dump_operators = false;
  int threads = 1;

  /// a0 for a given eps ("eps^p" is resolved against it).
  double a0(double eps_value) const;
  double a0() const { return a0(eps); }
};

Settings settings(const ExperimentConfig &config);

/// 1/h as a mesh resolution; throws unless it is a power of two.
int cells_for(double h, const char *what);

}  // namespace hcwave
