#include "hcwave/homogenize.hpp"

#include <cmath>
#include <numeric>

#include "hcwave/error.hpp"

namespace hcwave {

double harmonic_average_1d(double a0, double sigma_fraction) {
  require(a0 > 0.0, "a0 must be positive");
  require(sigma_fraction >= 0.0 && sigma_fraction <= 1.0,
          "inclusion fraction must lie in [0, 1]");
  return a0 / (a0 + (1.0 - a0) * sigma_fraction);
}

LimitSolution limit_solution_1d(const Field &u0, const Field &v0, double t) {
  require(t >= 0.0, "limit solution: time must be non-negative");
  return {u0, v0, t};
}

namespace {

Index periodic_node(const TensorMesh &mesh, Index node) {
  const int n = mesh.cells_per_axis();
  const GridCoord c = mesh.node_coord(node);
  const Index i = c[0] % n;
  const Index j = mesh.dim() == 2 ? c[1] % n : 0;
  return i + static_cast<Index>(n) * j;
}

Index find_root(std::vector<Index> &parent, Index x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

CellResult solve_cell_problems(const Coefficient &cell_coeff, bool perforated) {
  const TensorMesh &mesh = cell_coeff.mesh;
  const int dim = mesh.dim();
  const int n = mesh.cells_per_axis();
  require(static_cast<Index>(cell_coeff.values.size()) == mesh.element_count(),
          "cell problem: coefficient does not match the cell mesh");
  const Index periodic_count = dim == 2 ? static_cast<Index>(n) * n : n;

  CellResult result;
  CellSolution &cell = result.cells;
  cell.cell_mesh = mesh;
  cell.active_elements.assign(static_cast<std::size_t>(mesh.element_count()), true);
  if (perforated)
    for (Index e = 0; e < mesh.element_count(); ++e)
      cell.active_elements[e] = cell_coeff.values[e] == 1.0;

  // Unknowns: periodic nodes touched by an active element.
  std::vector<Index> unknown(static_cast<std::size_t>(periodic_count), -1);
  std::vector<Index> parent(static_cast<std::size_t>(periodic_count));
  std::iota(parent.begin(), parent.end(), Index{0});
  Index active_count = 0;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    if (!cell.active_elements[e]) continue;
    ++active_count;
    const auto nodes = mesh.element_nodes(e);
    const Index first = periodic_node(mesh, nodes[0]);
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
      const Index p = periodic_node(mesh, nodes[a]);
      unknown[p] = 0;
      parent[find_root(parent, p)] = find_root(parent, first);
    }
  }
  if (active_count == 0)
    fail(ErrorKind::numerical, "cell problem: no active elements");
  Index root = -1;
  for (Index p = 0; p < periodic_count; ++p) {
    if (unknown[p] < 0) continue;
    const Index r = find_root(parent, p);
    if (root < 0) root = r;
    if (r != root)
      fail(ErrorKind::numerical,
           "cell problem: the region outside the inclusion is disconnected");
  }
  for (Index p = 0; p < periodic_count; ++p) {
    if (unknown[p] < 0) continue;
    unknown[p] = static_cast<Index>(cell.node_of_unknown.size());
    cell.node_of_unknown.push_back(p);
  }
  const Index nu = static_cast<Index>(cell.node_of_unknown.size());

  const ReferenceElement ref = reference_element(dim, mesh.h());
  std::vector<Triplet> kt;
  std::vector<Triplet> mt;
  DenseMatrix rhs = DenseMatrix::Zero(nu, dim);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    if (!cell.active_elements[e]) continue;
    const double a = cell_coeff.values[e];
    const auto nodes = mesh.element_nodes(e);
    std::array<Index, 4> u{};
    for (int b = 0; b < ref.functions; ++b) u[b] = unknown[periodic_node(mesh, nodes[b])];
    for (int b = 0; b < ref.functions; ++b) {
      for (int c = 0; c < ref.functions; ++c)
        kt.emplace_back(static_cast<int>(u[b]), static_cast<int>(u[c]),
                        a * ref.stiffness(b, c));
      double mass_b = 0.0;
      for (int q = 0; q < ref.points; ++q) {
        mass_b += ref.weights[q] * ref.values(q, b);
        for (int k = 0; k < dim; ++k)
          rhs(u[b], k) -= a * ref.weights[q] * ref.gradients[q](b, k);
      }
      mt.emplace_back(0, static_cast<int>(u[b]), mass_b);
    }
  }
  const SparseMatrix stiffness = from_triplets(nu, nu, kt);
  const SparseMatrix mean_row = from_triplets(1, nu, mt);

  const DenseMatrix xi = solve_constrained(stiffness, mean_row, rhs);
  for (int k = 0; k < dim; ++k) {
    cell.xi.push_back(xi.col(k));
    cell.mean_residual =
        std::max(cell.mean_residual, std::abs((mean_row * cell.xi.back())[0]));
  }

  // a_kl = sum_T a int_T (e_k + grad xi_k) . (e_l + grad xi_l)
  Eigen::Matrix2d tensor = Eigen::Matrix2d::Zero();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    if (!cell.active_elements[e]) continue;
    const double a = cell_coeff.values[e];
    const auto nodes = mesh.element_nodes(e);
    for (int q = 0; q < ref.points; ++q) {
      Eigen::Matrix2d g = Eigen::Matrix2d::Zero();  // column k: e_k + grad xi_k
      for (int k = 0; k < dim; ++k) {
        g(k, k) = 1.0;
        for (int b = 0; b < ref.functions; ++b) {
          const double v = cell.xi[k][unknown[periodic_node(mesh, nodes[b])]];
          for (int d = 0; d < dim; ++d) g(d, k) += v * ref.gradients[q](b, d);
        }
      }
      tensor += a * ref.weights[q] * (g.transpose() * g);
    }
  }
  result.tensor.dim = dim;
  result.tensor.entries = 0.5 * (tensor + tensor.transpose());
  return result;
}

WaveState homogenized_reference(const HomogenizedTensor &tensor,
                                const TensorMesh &mesh, const Field &f,
                                const Field &u0, const Field &v0, double tau,
                                double final_time, const StepOptions &options,
                                const Observer &observer) {
  require(tensor.dim == mesh.dim(), "homogenized tensor dimension mismatch");
  const Eigen::Matrix2d block =
      mesh.dim() == 1 ? Eigen::Matrix2d(Eigen::Vector2d(tensor.entries(0, 0), 0.0)
                                            .asDiagonal())
                      : tensor.entries;
  const SparseMatrix stiffness = assemble_stiffness(mesh, block);
  const SparseMatrix mass = assemble_mass(mesh);
  LoadProvider load;
  if (f.kind != FieldKind::zero) {
    const Vector fixed = assemble_load(mesh, f);
    load = [fixed](double) { return fixed; };
  }
  return simulate(mass, stiffness, load, interpolate_field(mesh, u0),
                  interpolate_field(mesh, v0), tau, final_time, options,
                  observer);
}

}  // namespace hcwave
