#pragma once

#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/linalg.hpp"
#include "hcwave/mesh.hpp"

namespace hcwave {

/// I_H = E_H o Pi_H (or E_H o Pi_{H,a}) as a sparse matrix from fine interior
/// dofs to coarse interior dofs. Coarse boundary rows are omitted.
struct InterpolationMatrix {
  SparseMatrix matrix;
  bool weighted = false;
};

/// Q1 prolongation: column z holds the coarse hat phi_z at fine interior nodes.
SparseMatrix prolongation(const TensorMesh &coarse, const TensorMesh &fine);

/// Local projection operator on coarse element K: maps the values at the fine
/// nodes of the closed element (lexicographic over the (r+1)^dim block) to the
/// 2^dim vertex values of the (weighted) L2(K)-best Q1 approximation.
DenseMatrix local_projection_operator(const TensorMesh &coarse,
                                      const TensorMesh &fine, Index element,
                                      const Coefficient *weight);

/// Pi_H (or Pi_{H,a}) of a fine dof vector on element K: 2^dim vertex values.
Vector elementwise_projection(const TensorMesh &coarse, const TensorMesh &fine,
                              Index element, const Vector &fine_dofs,
                              const Coefficient *weight);

/// E_H: arithmetic mean over elements sharing each coarse vertex; boundary
/// vertices dropped. element_values[K] holds the 2^dim vertex values of K.
Vector averaging(const TensorMesh &coarse,
                 const std::vector<Vector> &element_values);

InterpolationMatrix build_interpolation(const TensorMesh &coarse,
                                        const TensorMesh &fine,
                                        const Coefficient &coeff, bool weighted);

/// Constraint rows of I restricted to the fine dofs of a patch: the coarse
/// nodes whose node patch overlaps the element patch, dropping rows that
/// vanish on the patch dofs.
struct ConstraintBlock {
  SparseMatrix rows;                 // constraints x patch.fine_dofs
  std::vector<Index> coarse_dofs;    // coarse dof of each row
};

ConstraintBlock kernel_constraint_rows(const InterpolationMatrix &interp,
                                       const TensorMesh &coarse,
                                       const Patch &patch);

/// max over samples of ||sqrt(a) grad P I v|| / ||sqrt(a) grad v|| for random
/// fine vectors v (diagnostic only).
double interpolation_stability_estimate(const InterpolationMatrix &interp,
                                        const SparseMatrix &prolong,
                                        const SparseMatrix &fine_stiffness,
                                        int samples, std::uint64_t seed);

/// Weighted Poincare constant sqrt(lambda_max(M, A)) = sup ||v|| / ||sqrt(a) grad v||
/// by a dense generalized eigensolve (small meshes only).
double weighted_poincare_constant(const SparseMatrix &mass,
                                  const SparseMatrix &stiffness);

}  // namespace hcwave
