#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/interpolation.hpp"
#include "hcwave/linalg.hpp"
#include "hcwave/mesh.hpp"

namespace hcwave {

enum class Formulation { galerkin, petrov_galerkin };

/// Fine-scale data shared by every corrector problem of one (H, h, a) triple.
struct LodSetup {
  TensorMesh coarse{1, 2};
  TensorMesh fine{1, 2};
  Coefficient coeff;
  SparseMatrix stiffness;  // fine, interior dofs
  SparseMatrix mass;       // fine, interior dofs
  SparseMatrix prolong;    // fine dofs x coarse dofs
  InterpolationMatrix interp;
};

LodSetup make_lod_setup(const TensorMesh &coarse, const TensorMesh &fine,
                        const Coefficient &coeff, bool weighted_interpolation);

/// Correctors C^K_{h,m}(phi_z) for the vertices z of one coarse element K,
/// supported on the fine dofs of U_m(K).
struct ElementCorrector {
  Index element = 0;
  Patch patch;
  std::array<Index, 4> coarse_dofs{-1, -1, -1, -1};  // per local vertex
  DenseMatrix values;  // patch.fine_dofs x vertices; boundary vertices zero
};

ElementCorrector element_corrector(const LodSetup &setup, Index element, int m);

/// C_{h,m}(phi_z) = sum over K containing z of C^K_{h,m}(phi_z), as a fine
/// dof vector.
Vector corrector_column(const LodSetup &setup, Index coarse_dof, int m);

/// Corrected operators. basis = P + Q; galerkin tests with P + Q,
/// petrov_galerkin with P.
struct LodOperators {
  SparseMatrix prolong;
  SparseMatrix corrector;  // Q: fine dofs x coarse dofs
  SparseMatrix basis;      // P + Q
  SparseMatrix stiffness;  // S_m
  SparseMatrix mass;       // M_m
  int m = 0;
  Formulation formulation = Formulation::galerkin;

  const SparseMatrix &test_basis() const {
    return formulation == Formulation::galerkin ? basis : prolong;
  }
  bool symmetric() const { return formulation == Formulation::galerkin; }
};

/// Element correctors are independent; `threads` > 1 computes them
/// concurrently. Results do not depend on the thread count.
LodOperators assemble_lod(const LodSetup &setup, int m, Formulation formulation,
                          int threads = 1);

/// F_m = (test basis)^T F_fine
Vector corrected_load(const LodOperators &ops, const Vector &fine_load);

/// Coarse coefficients of the energy projection of u0 onto the multiscale
/// space.
Vector elliptic_projection(const Vector &u0_fine, const LodOperators &ops,
                           const SparseMatrix &fine_stiffness);
/// Coarse coefficients of the L2 projection of v0 onto the multiscale space.
Vector l2_projection(const Vector &v0_fine, const LodOperators &ops,
                     const SparseMatrix &fine_mass);

/// (P + Q) zeta
Vector reconstruct(const Vector &zeta, const LodOperators &ops);

/// Smallest m whose patches cover the whole coarse mesh.
int saturation_layers(const TensorMesh &coarse);

/// ||sqrt(a) grad (C_{h,m} - C_{h,Omega}) phi_z|| for each m.
std::vector<double> truncation_error_curve(const LodSetup &setup,
                                           const std::vector<int> &m_list,
                                           Index coarse_dof);

/// row,col,value triplets
void write_triplets_csv(std::ostream &os, const SparseMatrix &m);

}  // namespace hcwave
