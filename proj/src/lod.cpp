#include "hcwave/lod.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "hcwave/error.hpp"
#include "hcwave/fem.hpp"

namespace hcwave {

LodSetup make_lod_setup(const TensorMesh &coarse, const TensorMesh &fine,
                        const Coefficient &coeff, bool weighted_interpolation) {
  refinement_ratio(coarse, fine);
  require(coeff.mesh == fine, "LOD: coefficient must live on the fine mesh");
  LodSetup s{coarse, fine, coeff, {}, {}, {}, {}};
  s.stiffness = assemble_stiffness(fine, coeff);
  s.mass = assemble_mass(fine);
  s.prolong = prolongation(coarse, fine);
  s.interp = build_interpolation(coarse, fine, coeff, weighted_interpolation);
  return s;
}

ElementCorrector element_corrector(const LodSetup &setup, Index element, int m) {
  const TensorMesh &coarse = setup.coarse;
  const TensorMesh &fine = setup.fine;
  const int dim = coarse.dim();
  const int nv = coarse.nodes_per_element();
  const int r = refinement_ratio(coarse, fine);

  ElementCorrector ec;
  ec.element = element;
  ec.patch = build_patch(coarse, fine, element, m);
  const auto nodes = coarse.element_nodes(element);
  for (int a = 0; a < nv; ++a) ec.coarse_dofs[a] = coarse.dof_of_node(nodes[a]);

  const std::vector<Index> &dofs = ec.patch.fine_dofs;
  const Index np = static_cast<Index>(dofs.size());
  ec.values = DenseMatrix::Zero(np, nv);
  if (np == 0) return ec;  // coarse and fine spaces coincide on this patch

  std::unordered_map<Index, Index> local;
  local.reserve(dofs.size() * 2);
  for (Index i = 0; i < np; ++i) local.emplace(dofs[i], i);

  // rhs_a = -(a grad phi_z, grad phi_j)_K for the fine dofs j of the patch.
  const ReferenceElement ref = reference_element(dim, fine.h());
  const GridCoord c = coarse.element_coord(element);
  DenseMatrix rhs = DenseMatrix::Zero(np, nv);
  bool any_rhs = false;
  for (int tj = 0; tj < (dim == 2 ? r : 1); ++tj) {
    for (int ti = 0; ti < r; ++ti) {
      const Index fe = fine.element_index({c[0] * r + ti, c[1] * r + tj});
      const auto fnodes = fine.element_nodes(fe);
      const double coef = setup.coeff.values[fe];
      for (int a = 0; a < nv; ++a) {
        if (ec.coarse_dofs[a] < 0) continue;
        any_rhs = true;
        Vector phi(ref.functions);
        for (int b = 0; b < ref.functions; ++b) {
          const double sx = (ti + (b & 1)) / static_cast<double>(r);
          double v = (a & 1) ? sx : 1.0 - sx;
          if (dim == 2) {
            const double sy = (tj + (b >> 1)) / static_cast<double>(r);
            v *= (a >> 1) ? sy : 1.0 - sy;
          }
          phi[b] = v;
        }
        const Vector action = coef * (ref.stiffness * phi);
        for (int b = 0; b < ref.functions; ++b) {
          const Index dof = fine.dof_of_node(fnodes[b]);
          if (dof < 0) continue;
          auto found = local.find(dof);
          if (found != local.end()) rhs(found->second, a) -= action[b];
        }
      }
    }
  }
  if (!any_rhs) return ec;

  const ConstraintBlock constraints =
      kernel_constraint_rows(setup.interp, coarse, ec.patch);
  if (constraints.rows.rows() == 0)
    fail(ErrorKind::numerical, "element corrector: empty constraint set on patch");
  const SparseMatrix a_patch = submatrix(setup.stiffness, dofs, dofs);
  ec.values = solve_constrained(a_patch, constraints.rows, rhs);
  for (int a = 0; a < nv; ++a)
    if (ec.coarse_dofs[a] < 0) ec.values.col(a).setZero();
  return ec;
}

Vector corrector_column(const LodSetup &setup, Index coarse_dof, int m) {
  require(coarse_dof >= 0 && coarse_dof < setup.coarse.interior_node_count(),
          "corrector column: coarse dof out of range");
  const TensorMesh &coarse = setup.coarse;
  const GridCoord z = coarse.node_coord(coarse.node_of_dof(coarse_dof));
  Vector col = Vector::Zero(setup.fine.interior_node_count());
  for (int dj = (coarse.dim() == 2 ? -1 : 0); dj <= 0; ++dj) {
    for (int di = -1; di <= 0; ++di) {
      const Index k = coarse.element_index({z[0] + di, z[1] + dj});
      const ElementCorrector ec = element_corrector(setup, k, m);
      const int a = (-di) + 2 * (-dj);
      for (std::size_t i = 0; i < ec.patch.fine_dofs.size(); ++i)
        col[ec.patch.fine_dofs[i]] += ec.values(static_cast<Index>(i), a);
    }
  }
  return col;
}

LodOperators assemble_lod(const LodSetup &setup, int m, Formulation formulation,
                          int threads) {
  require(m >= 0, "LOD: localization parameter must be non-negative");
  const Index n_elements = setup.coarse.element_count();
  std::vector<ElementCorrector> correctors(static_cast<std::size_t>(n_elements));

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n_elements)));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (Index k = next++; k < n_elements && !failed; k = next++) {
      try {
        correctors[static_cast<std::size_t>(k)] = element_corrector(setup, k, m);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Accumulate in element order so the sums are reproducible.
  std::vector<Triplet> t;
  for (const ElementCorrector &ec : correctors) {
    for (int a = 0; a < setup.coarse.nodes_per_element(); ++a) {
      const Index z = ec.coarse_dofs[a];
      if (z < 0) continue;
      for (std::size_t i = 0; i < ec.patch.fine_dofs.size(); ++i) {
        const double v = ec.values(static_cast<Index>(i), a);
        if (v != 0.0)
          t.emplace_back(static_cast<int>(ec.patch.fine_dofs[i]),
                         static_cast<int>(z), v);
      }
    }
  }

  LodOperators ops;
  ops.m = m;
  ops.formulation = formulation;
  ops.prolong = setup.prolong;
  ops.corrector = from_triplets(setup.fine.interior_node_count(),
                                setup.coarse.interior_node_count(), t);
  ops.basis = ops.prolong + ops.corrector;
  ops.basis.makeCompressed();
  const SparseMatrix &test = ops.test_basis();
  const SparseMatrix a_basis = setup.stiffness * ops.basis;
  const SparseMatrix m_basis = setup.mass * ops.basis;
  ops.stiffness = SparseMatrix(test.transpose()) * a_basis;
  ops.mass = SparseMatrix(test.transpose()) * m_basis;
  if (formulation == Formulation::galerkin) {
    ops.stiffness = symmetrized(ops.stiffness);
    ops.mass = symmetrized(ops.mass);
  }
  ops.stiffness.makeCompressed();
  ops.mass.makeCompressed();
  return ops;
}

Vector corrected_load(const LodOperators &ops, const Vector &fine_load) {
  return ops.test_basis().transpose() * fine_load;
}

namespace {

Vector project(const SparseMatrix &coarse_matrix, bool symmetric,
               const Vector &rhs) {
  const Factorization f = symmetric ? Factorization::spd(coarse_matrix)
                                    : Factorization::general(coarse_matrix);
  return f.solve(rhs);
}

}  // namespace

Vector elliptic_projection(const Vector &u0_fine, const LodOperators &ops,
                           const SparseMatrix &fine_stiffness) {
  require(u0_fine.size() == fine_stiffness.rows(),
          "elliptic projection: vector does not match the fine mesh");
  if (u0_fine.isZero(0.0)) return Vector::Zero(ops.stiffness.rows());
  const Vector rhs = ops.test_basis().transpose() * (fine_stiffness * u0_fine);
  return project(ops.stiffness, ops.symmetric(), rhs);
}

Vector l2_projection(const Vector &v0_fine, const LodOperators &ops,
                     const SparseMatrix &fine_mass) {
  require(v0_fine.size() == fine_mass.rows(),
          "L2 projection: vector does not match the fine mesh");
  if (v0_fine.isZero(0.0)) return Vector::Zero(ops.mass.rows());
  const Vector rhs = ops.test_basis().transpose() * (fine_mass * v0_fine);
  return project(ops.mass, ops.symmetric(), rhs);
}

Vector reconstruct(const Vector &zeta, const LodOperators &ops) {
  require(zeta.size() == ops.basis.cols(),
          "reconstruct: coarse vector has wrong length");
  return ops.basis * zeta;
}

int saturation_layers(const TensorMesh &coarse) {
  return coarse.cells_per_axis() - 1;
}

std::vector<double> truncation_error_curve(const LodSetup &setup,
                                           const std::vector<int> &m_list,
                                           Index coarse_dof) {
  const Vector global =
      corrector_column(setup, coarse_dof, saturation_layers(setup.coarse));
  std::vector<double> curve;
  curve.reserve(m_list.size());
  for (int m : m_list) {
    const Vector diff = corrector_column(setup, coarse_dof, m) - global;
    curve.push_back(norm_energy(diff, setup.stiffness));
  }
  return curve;
}

void write_triplets_csv(std::ostream &os, const SparseMatrix &m) {
  os << "row,col,value\n";
  os.precision(17);
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      os << it.row() << ',' << it.col() << ',' << it.value() << '\n';
}

}  // namespace hcwave
