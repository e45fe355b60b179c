#include "hcwave/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcwave/error.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/interpolation.hpp"
#include "hcwave/lod.hpp"
#include "hcwave/timestep.hpp"

namespace hcwave {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::string> row) {
  require(row.size() == columns.size(), "table '" + name + "': row has wrong width");
  rows.push_back(std::move(row));
}

int Table::column(const std::string &col) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == col) return static_cast<int>(i);
  fail(ErrorKind::invalid_argument, "table '" + name + "' has no column '" + col + "'");
}

double Table::number(std::size_t row, const std::string &col) const {
  require(row < rows.size(), "table '" + name + "': row out of range");
  return std::stod(rows[row][static_cast<std::size_t>(column(col))]);
}

const Table &Report::table(const std::string &name) const {
  for (const Table &t : tables)
    if (t.name == name) return t;
  fail(ErrorKind::invalid_argument, "report has no table '" + name + "'");
}

bool Report::has_table(const std::string &name) const {
  return std::any_of(tables.begin(), tables.end(),
                     [&](const Table &t) { return t.name == name; });
}

void Report::write(const std::string &dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory '" + dir + "'");
  for (const Table &t : tables) {
    const std::string path = (std::filesystem::path(dir) / (t.name + ".csv")).string();
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
    out << "# config: " << config_echo << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto &row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
    if (!out) fail(ErrorKind::io, "write failed for '" + path + "'");
  }
}

Coefficient build_coefficient(const Settings &s, const TensorMesh &fine,
                              double eps, double a0) {
  switch (s.coeff_kind) {
    case CoefficientKind::periodic:
      return periodic_inclusion(fine, eps, a0);
    case CoefficientKind::random_checkerboard:
      return random_checkerboard(fine, eps, a0, s.seed, s.region);
    case CoefficientKind::constant:
      return constant_coefficient(fine, a0);
  }
  throw std::logic_error("unknown coefficient kind");
}

namespace {

LoadProvider constant_load(const TensorMesh &mesh, const Field &f) {
  if (f.kind == FieldKind::zero) return {};
  const Vector fixed = assemble_load(mesh, f);
  return [fixed](double) { return fixed; };
}

}  // namespace

FineTrajectory run_fine_reference(const Settings &s, double eps, double a0) {
  const TensorMesh mesh = build_mesh(s.dim, cells_for(s.fine_h, "fine.h"));
  FineTrajectory traj;
  traj.mesh = mesh;
  traj.coeff = build_coefficient(s, mesh, eps, a0);
  traj.stiffness = assemble_stiffness(mesh, traj.coeff);
  traj.mass = assemble_mass(mesh);
  const Observer keep = [&](const WaveState &state) {
    traj.states.push_back(state.zeta);
    traj.energies.push_back(discrete_energy(traj.mass, traj.stiffness, state));
  };
  simulate(traj.mass, traj.stiffness, constant_load(mesh, s.f),
           interpolate_field(mesh, s.u0), interpolate_field(mesh, s.v0), s.tau,
           s.final_time, s.step, keep);
  return traj;
}

FineTrajectory run_fine_reference(const Settings &s) {
  return run_fine_reference(s, s.eps, s.a0());
}

Report run_solve_fine(const ExperimentConfig &config) {
  const Settings s = settings(config);
  const FineTrajectory traj = run_fine_reference(s);
  Report report{config.echo(), {}};

  Table energy{"energy", {"step", "t", "energy", "l2_norm"}, {}};
  for (std::size_t n = 0; n < traj.states.size(); ++n)
    energy.add_row({std::to_string(n), format_double(static_cast<double>(n) * s.tau),
                    format_double(traj.energies[n]),
                    format_double(norm_l2(traj.states[n], traj.mass))});
  report.tables.push_back(std::move(energy));

  for (double t : s.snapshot_times) {
    const Index n = step_count(s.tau, t);
    require(n < static_cast<Index>(traj.states.size()),
            "snapshot time " + format_double(t) + " lies beyond time.T");
    Table snap{"snapshot_" + format_double(t), {"node_index", "x"}, {}};
    if (s.dim == 2) snap.columns.push_back("y");
    snap.columns.push_back("value");
    const Vector &z = traj.states[static_cast<std::size_t>(n)];
    for (Index node = 0; node < traj.mesh.node_count(); ++node) {
      const Point p = traj.mesh.node_point(node);
      const Index dof = traj.mesh.dof_of_node(node);
      std::vector<std::string> row{std::to_string(node), format_double(p[0])};
      if (s.dim == 2) row.push_back(format_double(p[1]));
      row.push_back(format_double(dof >= 0 ? z[dof] : 0.0));
      snap.add_row(std::move(row));
    }
    report.tables.push_back(std::move(snap));
  }
  return report;
}

CellResult run_homogenize(const ExperimentConfig &config, bool perforated) {
  const Settings s = settings(config);
  const TensorMesh cell = build_mesh(s.dim, s.cell_cells);
  return solve_cell_problems(centered_inclusion(cell, s.cell_side, s.a0()), perforated);
}

namespace {

/// Norm matrices by name, all on the fine mesh.
struct NormSet {
  std::vector<std::string> names;
  std::vector<SparseMatrix> matrices;
};

NormSet norm_set(const std::vector<std::string> &names, const TensorMesh &mesh,
                 const Coefficient &coeff, const SparseMatrix &mass,
                 const SparseMatrix &stiffness) {
  NormSet set;
  for (const std::string &n : names) {
    set.names.push_back(n);
    if (n == "l2") set.matrices.push_back(mass);
    else if (n == "weighted_l2") set.matrices.push_back(assemble_mass(mesh, &coeff));
    else set.matrices.push_back(stiffness);
  }
  return set;
}

double ratio_or_nan(double num, double den) {
  return den > 0.0 ? num / den : std::nan("");
}

}  // namespace

Report run_homogenization_error(const ExperimentConfig &config) {
  const Settings s = settings(config);
  Report report{config.echo(), {}};
  Table errors{"errors", {"eps", "a0", "a_hat", "norm", "error", "relative_error"}, {}};
  for (double eps : s.hom_eps_list) {
    for (double a0 : s.hom_a0_list) {
      Settings run = s;
      run.coeff_kind = CoefficientKind::periodic;
      const FineTrajectory traj = run_fine_reference(run, eps, a0);

      HomogenizedTensor tensor;
      tensor.dim = s.dim;
      if (s.dim == 1) {
        tensor.entries(0, 0) = harmonic_average_1d(a0, 0.5);
      } else {
        const TensorMesh cell = build_mesh(2, s.cell_cells);
        tensor = solve_cell_problems(centered_inclusion(cell, 0.5, a0), false).tensor;
      }
      std::vector<Vector> hom;
      homogenized_reference(tensor, traj.mesh, s.f, s.u0, s.v0, s.tau, s.final_time,
                            s.step, [&](const WaveState &st) { hom.push_back(st.zeta); });

      const NormSet norms =
          norm_set(s.norms, traj.mesh, traj.coeff, traj.mass, traj.stiffness);
      for (std::size_t k = 0; k < norms.names.size(); ++k) {
        double err = 0.0, ref = 0.0;
        for (std::size_t n = 0; n < hom.size(); ++n) {
          err = std::max(err, quadratic_norm(traj.states[n] - hom[n], norms.matrices[k]));
          ref = std::max(ref, quadratic_norm(traj.states[n], norms.matrices[k]));
        }
        errors.add_row({format_double(eps), format_double(a0),
                        format_double(tensor.entries(0, 0)), norms.names[k],
                        format_double(err), format_double(ratio_or_nan(err, ref))});
      }
    }
  }
  report.tables.push_back(std::move(errors));
  return report;
}

Report run_highcontrast_limit(const ExperimentConfig &config) {
  const Settings s = settings(config);
  require(s.dim == 1, "limit-1d requires dim = 1");
  require(s.f.kind == FieldKind::zero, "limit-1d requires field.f = zero");
  Report report{config.echo(), {}};
  Table series{"limit", {"p", "a0", "t", "distance", "relative_distance"}, {}};
  Table summary{"limit_summary",
                {"p", "a0", "distance_T", "relative_distance_T",
                 "relative_difference_to_previous"},
                {}};
  Vector previous;
  for (double p : s.p_list) {
    const double a0 = high_contrast_value(s.eps, p);
    Settings run = s;
    run.coeff_kind = CoefficientKind::periodic;
    const FineTrajectory traj = run_fine_reference(run, s.eps, a0);
    double dist = 0.0, rel = 0.0;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
      const double t = static_cast<double>(n) * s.tau;
      const LimitSolution lim = limit_solution_1d(s.u0, s.v0, t);
      const Vector target =
          interpolate_function(traj.mesh, [&](const Point &x) { return lim(x, 1); });
      dist = norm_l2(traj.states[n] - target, traj.mass);
      rel = ratio_or_nan(dist, norm_l2(target, traj.mass));
      series.add_row({format_double(p), format_double(a0), format_double(t),
                      format_double(dist), format_double(rel)});
    }
    const Vector &final_state = traj.states.back();
    const double diff = previous.size() == 0
                            ? std::nan("")
                            : ratio_or_nan(norm_l2(final_state - previous, traj.mass),
                                           norm_l2(previous, traj.mass));
    summary.add_row({format_double(p), format_double(a0), format_double(dist),
                     format_double(rel), format_double(diff)});
    previous = final_state;
  }
  report.tables.push_back(std::move(series));
  report.tables.push_back(std::move(summary));
  return report;
}

double estimate_rate(const std::vector<double> &H, const std::vector<double> &errors) {
  require(H.size() == errors.size(), "rate: H and error lists differ in length");
  require(H.size() >= 3, "rate: need at least three (H, error) pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) {
    require(H[i] > 0.0 && errors[i] > 0.0, "rate: values must be positive");
    const double x = std::log(H[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "rate: H values must not all coincide");
  return (n * sxy - sx * sy) / den;
}

std::vector<double> pairwise_rates(const std::vector<double> &H,
                                   const std::vector<double> &errors) {
  require(H.size() == errors.size(), "rate: H and error lists differ in length");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < H.size(); ++i) {
    require(H[i] > 0.0 && errors[i] > 0.0 && H[i + 1] > 0.0 && errors[i + 1] > 0.0,
            "rate: values must be positive");
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(H[i] / H[i + 1]));
  }
  return out;
}

Report run_lod_convergence(const ExperimentConfig &config) {
  const Settings s = settings(config);
  require(!s.H_list.empty() && !s.k_list.empty(), "lod: empty H or k list");
  const FineTrajectory ref = run_fine_reference(s);
  const NormSet norms = norm_set(s.norms, ref.mesh, ref.coeff, ref.mass, ref.stiffness);
  std::vector<double> ref_norms(norms.names.size(), 0.0);
  for (std::size_t k = 0; k < norms.names.size(); ++k)
    for (const Vector &z : ref.states)
      ref_norms[k] = std::max(ref_norms[k], quadratic_norm(z, norms.matrices[k]));

  const Vector u0 = interpolate_field(ref.mesh, s.u0);
  const Vector v0 = interpolate_field(ref.mesh, s.v0);
  const Vector fine_load =
      s.f.kind == FieldKind::zero ? Vector() : assemble_load(ref.mesh, s.f);

  Report report{config.echo(), {}};
  Table errors{"errors", {"H", "k", "norm", "error", "relative_error"}, {}};
  Table diagnostics{"lod_diagnostics", {"H", "k", "kernel_residual", "coarse_dofs"}, {}};
  // err[k-index][norm][H-index]
  std::vector<std::vector<std::vector<double>>> err(
      s.k_list.size(), std::vector<std::vector<double>>(norms.names.size()));

  for (double H : s.H_list) {
    const TensorMesh coarse = build_mesh(s.dim, cells_for(H, "lod.H_list entry"));
    const LodSetup setup =
        make_lod_setup(coarse, ref.mesh, ref.coeff, s.weighted_interpolation);
    for (std::size_t ki = 0; ki < s.k_list.size(); ++ki) {
      const int k = s.k_list[ki];
      const LodOperators ops = assemble_lod(setup, k, s.formulation, s.threads);

      const SparseMatrix iq = setup.interp.matrix * ops.corrector;
      const double qmax = ops.corrector.nonZeros() ? Eigen::Map<const Vector>(
                              ops.corrector.valuePtr(), ops.corrector.nonZeros())
                              .cwiseAbs().maxCoeff() : 0.0;
      const double iqmax = iq.nonZeros() ? Eigen::Map<const Vector>(
                               iq.valuePtr(), iq.nonZeros()).cwiseAbs().maxCoeff() : 0.0;
      diagnostics.add_row({format_double(H), std::to_string(k),
                           format_double(qmax > 0 ? iqmax / qmax : 0.0),
                           std::to_string(coarse.interior_node_count())});

      const Vector zeta0 = elliptic_projection(u0, ops, ref.stiffness);
      const Vector eta0 = s.v0_elliptic ? elliptic_projection(v0, ops, ref.stiffness)
                                        : l2_projection(v0, ops, ref.mass);
      LoadProvider load;
      if (fine_load.size() > 0) {
        const Vector coarse_load = corrected_load(ops, fine_load);
        load = [coarse_load](double) { return coarse_load; };
      }
      std::vector<double> worst(norms.names.size(), 0.0);
      const Observer compare = [&](const WaveState &state) {
        const Vector diff =
            reconstruct(state.zeta, ops) - ref.states[static_cast<std::size_t>(state.step_index)];
        for (std::size_t n = 0; n < norms.names.size(); ++n)
          worst[n] = std::max(worst[n], quadratic_norm(diff, norms.matrices[n]));
      };
      simulate(ops.mass, ops.stiffness, load, zeta0, eta0, s.tau, s.final_time, s.step,
               compare, ops.symmetric());
      for (std::size_t n = 0; n < norms.names.size(); ++n) {
        err[ki][n].push_back(worst[n]);
        errors.add_row({format_double(H), std::to_string(k), norms.names[n],
                        format_double(worst[n]),
                        format_double(ratio_or_nan(worst[n], ref_norms[n]))});
      }

      if (s.dump_operators) {
        const std::string tag =
            "_H" + std::to_string(coarse.cells_per_axis()) + "_k" + std::to_string(k);
        auto dump = [&](const std::string &name, const SparseMatrix &m) {
          Table t{name + tag, {"row", "col", "value"}, {}};
          for (int r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it)
              t.add_row({std::to_string(it.row()), std::to_string(it.col()),
                         format_double(it.value())});
          report.tables.push_back(std::move(t));
        };
        dump("Q", ops.corrector);
        dump("Sm", ops.stiffness);
        dump("Mm", ops.mass);
      }
    }
  }

  Table rates{"rates", {"norm", "k", "rate"}, {}};
  Table pairwise{"pairwise_rates", {"norm", "k", "H_coarse", "H_fine", "rate"}, {}};
  for (std::size_t ki = 0; ki < s.k_list.size(); ++ki) {
    for (std::size_t n = 0; n < norms.names.size(); ++n) {
      const std::vector<double> &e = err[ki][n];
      const bool positive = std::all_of(e.begin(), e.end(), [](double v) { return v > 0.0; });
      if (!positive) continue;
      if (e.size() >= 3)
        rates.add_row({norms.names[n], std::to_string(s.k_list[ki]),
                       format_double(estimate_rate(s.H_list, e))});
      const std::vector<double> pr = pairwise_rates(s.H_list, e);
      for (std::size_t i = 0; i < pr.size(); ++i)
        pairwise.add_row({norms.names[n], std::to_string(s.k_list[ki]),
                          format_double(s.H_list[i]), format_double(s.H_list[i + 1]),
                          format_double(pr[i])});
    }
  }
  report.tables.insert(report.tables.begin(),
                       {std::move(errors), std::move(rates), std::move(pairwise),
                        std::move(diagnostics)});
  return report;
}

}  // namespace hcwave
