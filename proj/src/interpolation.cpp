#include "hcwave/interpolation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hcwave/error.hpp"
#include "hcwave/fem.hpp"

namespace hcwave {

namespace {

/// Bilinear (or linear) coarse basis a evaluated at s in [0,1]^dim of K.
double coarse_basis(int a, const Point &s, int dim) {
  const double vx = (a & 1) ? s[0] : 1.0 - s[0];
  if (dim == 1) return vx;
  const double vy = (a >> 1) ? s[1] : 1.0 - s[1];
  return vx * vy;
}

/// Fine interior dof of each node of the closed coarse element (or -1).
std::vector<Index> closure_fine_dofs(const TensorMesh &coarse,
                                     const TensorMesh &fine, Index element) {
  const int r = refinement_ratio(coarse, fine);
  const GridCoord c = coarse.element_coord(element);
  const int ny = coarse.dim() == 2 ? r + 1 : 1;
  std::vector<Index> dofs;
  dofs.reserve(static_cast<std::size_t>(r + 1) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= r; ++i)
      dofs.push_back(fine.dof_of_node(fine.node_index({c[0] * r + i, c[1] * r + j})));
  return dofs;
}

}  // namespace

SparseMatrix prolongation(const TensorMesh &coarse, const TensorMesh &fine) {
  const int r = refinement_ratio(coarse, fine);
  const int dim = coarse.dim();
  std::vector<Triplet> t;
  for (Index z = 0; z < coarse.interior_node_count(); ++z) {
    const GridCoord zc = coarse.node_coord(coarse.node_of_dof(z));
    const int reach_y = dim == 2 ? r - 1 : 0;
    for (int dj = -reach_y; dj <= reach_y; ++dj) {
      for (int di = -r + 1; di <= r - 1; ++di) {
        const GridCoord fc{zc[0] * r + di, zc[1] * r + dj};
        const Index dof = fine.dof_of_node(fine.node_index(fc));
        if (dof < 0) continue;
        double v = 1.0 - std::abs(di) / static_cast<double>(r);
        if (dim == 2) v *= 1.0 - std::abs(dj) / static_cast<double>(r);
        t.emplace_back(static_cast<int>(dof), static_cast<int>(z), v);
      }
    }
  }
  return from_triplets(fine.interior_node_count(), coarse.interior_node_count(), t);
}

DenseMatrix local_projection_operator(const TensorMesh &coarse,
                                      const TensorMesh &fine, Index element,
                                      const Coefficient *weight) {
  const int r = refinement_ratio(coarse, fine);
  const int dim = coarse.dim();
  const ReferenceElement ref = reference_element(dim, fine.h());
  const int nv = coarse.nodes_per_element();
  const int side = r + 1;
  const int nf = dim == 2 ? side * side : side;
  const GridCoord c = coarse.element_coord(element);

  DenseMatrix gram = DenseMatrix::Zero(nv, nv);
  DenseMatrix rhs = DenseMatrix::Zero(nv, nf);
  const int ty_end = dim == 2 ? r : 1;
  for (int tj = 0; tj < ty_end; ++tj) {
    for (int ti = 0; ti < r; ++ti) {
      const Index fe = fine.element_index({c[0] * r + ti, c[1] * r + tj});
      const double w = weight ? weight->values[fe] : 1.0;
      for (int q = 0; q < ref.points; ++q) {
        const Point &p = ref.reference_points[q];
        const Point s{(ti + p[0]) / r, dim == 2 ? (tj + p[1]) / r : 0.0};
        const double wq = w * ref.weights[q];
        for (int a = 0; a < nv; ++a) {
          const double psi_a = coarse_basis(a, s, dim);
          for (int b = 0; b < nv; ++b) gram(a, b) += wq * psi_a * coarse_basis(b, s, dim);
          for (int b = 0; b < ref.functions; ++b) {
            const int li = (ti + (b & 1)) + side * (tj + (b >> 1));
            rhs(a, li) += wq * psi_a * ref.values(q, b);
          }
        }
      }
    }
  }
  Eigen::LDLT<DenseMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0)
    fail(ErrorKind::numerical, "local projection: singular Gram matrix");
  return ldlt.solve(rhs);
}

Vector elementwise_projection(const TensorMesh &coarse, const TensorMesh &fine,
                              Index element, const Vector &fine_dofs,
                              const Coefficient *weight) {
  require(fine_dofs.size() == fine.interior_node_count(),
          "projection: vector does not match the fine mesh");
  const DenseMatrix op = local_projection_operator(coarse, fine, element, weight);
  const std::vector<Index> dofs = closure_fine_dofs(coarse, fine, element);
  Vector local(static_cast<Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i)
    local[static_cast<Index>(i)] = dofs[i] >= 0 ? fine_dofs[dofs[i]] : 0.0;
  return op * local;
}

Vector averaging(const TensorMesh &coarse,
                 const std::vector<Vector> &element_values) {
  require(static_cast<Index>(element_values.size()) == coarse.element_count(),
          "averaging: need vertex values for every coarse element");
  Vector sum = Vector::Zero(coarse.interior_node_count());
  std::vector<int> count(static_cast<std::size_t>(sum.size()), 0);
  for (Index k = 0; k < coarse.element_count(); ++k) {
    const auto nodes = coarse.element_nodes(k);
    for (int a = 0; a < coarse.nodes_per_element(); ++a) {
      const Index z = coarse.dof_of_node(nodes[a]);
      if (z < 0) continue;
      sum[z] += element_values[k][a];
      ++count[static_cast<std::size_t>(z)];
    }
  }
  for (Index z = 0; z < sum.size(); ++z) sum[z] /= count[static_cast<std::size_t>(z)];
  return sum;
}

InterpolationMatrix build_interpolation(const TensorMesh &coarse,
                                        const TensorMesh &fine,
                                        const Coefficient &coeff, bool weighted) {
  require(static_cast<Index>(coeff.values.size()) == fine.element_count(),
          "interpolation: coefficient does not match the fine mesh");
  const int nv = coarse.nodes_per_element();
  std::vector<Triplet> t;
  for (Index k = 0; k < coarse.element_count(); ++k) {
    const DenseMatrix op =
        local_projection_operator(coarse, fine, k, weighted ? &coeff : nullptr);
    const std::vector<Index> dofs = closure_fine_dofs(coarse, fine, k);
    const auto nodes = coarse.element_nodes(k);
    for (int a = 0; a < nv; ++a) {
      const Index z = coarse.dof_of_node(nodes[a]);
      if (z < 0) continue;
      // Every interior vertex is shared by exactly 2^dim elements.
      for (std::size_t li = 0; li < dofs.size(); ++li) {
        const double v = op(a, static_cast<Index>(li));
        if (dofs[li] >= 0 && v != 0.0)
          t.emplace_back(static_cast<int>(z), static_cast<int>(dofs[li]), v / nv);
      }
    }
  }
  SparseMatrix m = from_triplets(coarse.interior_node_count(), fine.interior_node_count(), t);
  // Roundoff left where the projection is exact (H = h) would keep rows alive
  // that vanish on a patch and make the patch constraints rank deficient.
  Vector row_max = Vector::Zero(m.rows());
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      row_max[r] = std::max(row_max[r], std::abs(it.value()));
  m.prune([&](Index r, Index, double v) { return std::abs(v) > 1e-13 * row_max[r]; });
  return {std::move(m), weighted};
}

ConstraintBlock kernel_constraint_rows(const InterpolationMatrix &interp,
                                       const TensorMesh &coarse,
                                       const Patch &patch) {
  require(!patch.elements.empty() && !patch.fine_dofs.empty(),
          "constraint rows: patch has no fine dofs");
  std::unordered_map<Index, int> col;
  col.reserve(patch.fine_dofs.size() * 2);
  for (std::size_t j = 0; j < patch.fine_dofs.size(); ++j)
    col.emplace(patch.fine_dofs[j], static_cast<int>(j));

  ConstraintBlock block;
  std::vector<Triplet> t;
  const int j_hi = coarse.dim() == 2 ? patch.hi[1] + 1 : 0;
  for (int j = patch.lo[1]; j <= j_hi; ++j) {
    for (int i = patch.lo[0]; i <= patch.hi[0] + 1; ++i) {
      const Index z = coarse.dof_of_node(coarse.node_index({i, j}));
      if (z < 0) continue;
      const int row = static_cast<int>(block.coarse_dofs.size());
      bool any = false;
      for (SparseMatrix::InnerIterator it(interp.matrix, z); it; ++it) {
        auto found = col.find(it.col());
        if (found == col.end() || it.value() == 0.0) continue;
        t.emplace_back(row, found->second, it.value());
        any = true;
      }
      if (any) block.coarse_dofs.push_back(z);
    }
  }
  block.rows = from_triplets(static_cast<Index>(block.coarse_dofs.size()),
                             static_cast<Index>(patch.fine_dofs.size()), t);
  return block;
}

double interpolation_stability_estimate(const InterpolationMatrix &interp,
                                        const SparseMatrix &prolong,
                                        const SparseMatrix &fine_stiffness,
                                        int samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const Index n = fine_stiffness.rows();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
      v[i] = 2.0 * static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 1.0;
    const Vector iv = prolong * (interp.matrix * v);
    const double denom = norm_energy(v, fine_stiffness);
    if (denom > 0.0) worst = std::max(worst, norm_energy(iv, fine_stiffness) / denom);
  }
  return worst;
}

double weighted_poincare_constant(const SparseMatrix &mass,
                                  const SparseMatrix &stiffness) {
  const DenseMatrix m = DenseMatrix(mass);
  const DenseMatrix a = DenseMatrix(stiffness);
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> solver(
      m, a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::numerical, "poincare estimate: eigensolver failed");
  return std::sqrt(solver.eigenvalues().maxCoeff());
}

}  // namespace hcwave
