#include <doctest.h>

#include <random>
#include <sstream>

#include "hcwave/coefficients.hpp"
#include "hcwave/error.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/lod.hpp"
#include "hcwave/timestep.hpp"

using namespace hcwave;

namespace {

Vector random_vector(Index n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// random elements of ker(I): (1 - P (I P)^{-1} I) v = (1 - P I) v
Vector kernel_vector(const LodSetup &s, std::mt19937_64 &rng) {
  const Vector v = random_vector(s.fine.interior_node_count(), rng);
  return v - s.prolong * (s.interp.matrix * v);
}

LodSetup periodic_setup(int dim, int nc, int nf, double eps, bool weighted) {
  const TensorMesh coarse = build_mesh(dim, nc), fine = build_mesh(dim, nf);
  return make_lod_setup(coarse, fine, periodic_inclusion(fine, eps, eps * eps), weighted);
}

}  // namespace

TEST_CASE("element corrector properties") {
  const LodSetup s = periodic_setup(1, 8, 64, 0.125, false);
  const Index k = 3;
  const ElementCorrector c = element_corrector(s, k, 1);
  CHECK(c.patch.elements == std::vector<Index>{2, 3, 4});
  const auto &dofs = c.patch.fine_dofs;
  CHECK(c.values.rows() == static_cast<Index>(dofs.size()));
  CHECK(c.values.cols() == 2);

  const SparseMatrix a_patch = submatrix(s.stiffness, dofs, dofs);
  const DenseMatrix cd(kernel_constraint_rows(s.interp, s.coarse, c.patch).rows);
  const DenseMatrix kernel = Eigen::FullPivLU<DenseMatrix>(cd).kernel();
  const ReferenceElement ref = reference_element(1, s.fine.h());
  const std::vector<Index> children = refinement_map(s.coarse, s.fine)[k];
  std::mt19937_64 rng(5);
  for (int v = 0; v < 2; ++v) {
    const Index z = c.coarse_dofs[v];
    REQUIRE(z >= 0);
    const Vector phi = s.prolong.col(z);
    // r = -(a grad phi, grad .) over the fine elements of K only
    Vector r = Vector::Zero(static_cast<Index>(dofs.size()));
    for (Index e : children) {
      const auto nodes = s.fine.element_nodes(e);
      Vector local(2);
      for (int i = 0; i < 2; ++i) {
        const Index d = s.fine.dof_of_node(nodes[i]);
        local(i) = d >= 0 ? phi(d) : 0.0;
      }
      const Vector contrib = -s.coeff[e] * (ref.stiffness * local);
      for (int i = 0; i < 2; ++i) {
        const Index d = s.fine.dof_of_node(nodes[i]);
        const auto it = std::find(dofs.begin(), dofs.end(), d);
        if (it != dofs.end()) r(it - dofs.begin()) += contrib(i);
      }
    }
    const Vector defect = a_patch * c.values.col(v) - r;
    for (int t = 0; t < 20; ++t) {
      const Vector w = kernel * random_vector(kernel.cols(), rng);
      CHECK(std::abs(w.dot(defect)) <= 1e-9 * w.norm() * std::max(1.0, r.norm()));
    }
    CHECK((cd * c.values.col(v)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("saturated correctors equal the global corrector") {
  const LodSetup s = periodic_setup(1, 8, 64, 0.125, false);
  const int sat = saturation_layers(s.coarse);
  CHECK(sat == 7);
  const Vector q_sat = corrector_column(s, 3, sat);
  const Vector q_big = corrector_column(s, 3, sat + 5);
  CHECK((q_sat - q_big).cwiseAbs().maxCoeff() <= 1e-12);

  // global orthogonality: b(phi_z + Q_z, w) = 0 for w in ker I
  const LodOperators ops = assemble_lod(s, sat, Formulation::galerkin);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Vector w = kernel_vector(s, rng);
    const Vector res = DenseMatrix(ops.basis).transpose() * (s.stiffness * w);
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-9 * w.norm());
  }
}

TEST_CASE("operators are symmetric and definite") {
  for (int dim = 1; dim <= 2; ++dim) {
    const LodSetup s = dim == 1 ? periodic_setup(1, 8, 64, 0.125, true)
                                : periodic_setup(2, 4, 16, 0.25, false);
    const LodOperators ops = assemble_lod(s, 1, Formulation::galerkin);
    CHECK(is_symmetric(ops.stiffness, 1e-12));
    CHECK(is_symmetric(ops.mass, 1e-12));
    CHECK(Eigen::SelfAdjointEigenSolver<DenseMatrix>(DenseMatrix(ops.mass))
              .eigenvalues()
              .minCoeff() > 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<DenseMatrix>(DenseMatrix(ops.stiffness))
              .eigenvalues()
              .minCoeff() > 0.0);
    const DenseMatrix iq = DenseMatrix(s.interp.matrix * ops.corrector);
    const double qmax = DenseMatrix(ops.corrector).cwiseAbs().maxCoeff();
    CHECK(iq.cwiseAbs().maxCoeff() <= 1e-10 * qmax);

    const LodOperators pg = assemble_lod(s, 1, Formulation::petrov_galerkin);
    CHECK(&pg.test_basis() == &pg.prolong);
    CHECK_FALSE(pg.symmetric());
    const DenseMatrix expected = DenseMatrix(s.prolong).transpose() * (s.stiffness * DenseMatrix(ops.basis));
    CHECK((DenseMatrix(pg.stiffness) - expected).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("constant coefficient gives symmetric operators") {
  const TensorMesh coarse = build_mesh(2, 4), fine = build_mesh(2, 16);
  const LodSetup s = make_lod_setup(coarse, fine, constant_coefficient(fine, 1.0), false);
  const LodOperators ops = assemble_lod(s, 2, Formulation::galerkin);
  CHECK(is_symmetric(ops.stiffness, 1e-12));
}

TEST_CASE("coarse equals fine") {
  for (int dim = 1; dim <= 2; ++dim) {
    const TensorMesh mesh = build_mesh(dim, dim == 1 ? 32 : 8);
    for (bool weighted : {false, true}) {
      const LodSetup s =
          make_lod_setup(mesh, mesh, periodic_inclusion(mesh, 0.5, 0.01), weighted);
      const LodOperators ops = assemble_lod(s, 2, Formulation::galerkin);
      CHECK(DenseMatrix(ops.corrector).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK((DenseMatrix(ops.stiffness) - DenseMatrix(s.stiffness)).cwiseAbs().maxCoeff() <=
            1e-12);
      CHECK((DenseMatrix(ops.mass) - DenseMatrix(s.mass)).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("projections and reconstruction") {
  const LodSetup s = periodic_setup(1, 8, 64, 0.125, false);
  const LodOperators ops = assemble_lod(s, 2, Formulation::galerkin);
  const Index nc = s.coarse.interior_node_count();
  const Vector zero = Vector::Zero(s.fine.interior_node_count());
  CHECK(elliptic_projection(zero, ops, s.stiffness).norm() == 0.0);
  CHECK(l2_projection(zero, ops, s.mass).norm() == 0.0);
  CHECK(reconstruct(Vector::Zero(nc), ops).norm() == 0.0);

  const Vector c = Vector::LinSpaced(nc, -1.0, 1.0);
  const Vector member = reconstruct(c, ops);
  CHECK((elliptic_projection(member, ops, s.stiffness) - c).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((l2_projection(member, ops, s.mass) - c).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((s.interp.matrix * member - c).cwiseAbs().maxCoeff() <= 1e-10);

  Vector e = Vector::Zero(nc);
  e(2) = 1.0;
  CHECK((reconstruct(e, ops) - (s.prolong.col(2) + ops.corrector.col(2))).norm() == 0.0);

  const Vector u0 = interpolate_field(s.fine, Field::gaussian(0.5, 0.1));
  const Vector ze = elliptic_projection(u0, ops, s.stiffness);
  const Vector re = DenseMatrix(ops.basis).transpose() * (s.stiffness * (u0 - reconstruct(ze, ops)));
  CHECK(re.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, (s.stiffness * u0).norm()));
  const Vector zm = l2_projection(u0, ops, s.mass);
  const Vector rm = DenseMatrix(ops.basis).transpose() * (s.mass * (u0 - reconstruct(zm, ops)));
  CHECK(rm.cwiseAbs().maxCoeff() <= 1e-9);

  const Vector f = assemble_load(s.fine, Field::poly_bubble());
  CHECK((corrected_load(ops, f) - DenseMatrix(ops.basis).transpose() * f).norm() <= 1e-14);
}

TEST_CASE("corrector locality") {
  const LodSetup s = periodic_setup(2, 8, 32, 0.25, false);
  const int m = 1;
  const LodOperators ops = assemble_lod(s, m, Formulation::galerkin);
  const Index z = s.coarse.dof_of_node(s.coarse.node_index({3, 4}));
  const Vector q = ops.corrector.col(z);
  // union of U_1(K) over the four elements around node (3,4): elements 1..4 x 2..5
  for (Index d = 0; d < q.size(); ++d) {
    if (q(d) == 0.0) continue;
    const Point x = s.fine.node_point(s.fine.node_of_dof(d));
    CHECK(x[0] > 1.0 / 8);
    CHECK(x[0] < 5.0 / 8);
    CHECK(x[1] > 2.0 / 8);
    CHECK(x[1] < 6.0 / 8);
  }
}

TEST_CASE("thread count does not change the operators") {
  const LodSetup s = periodic_setup(2, 4, 16, 0.25, true);
  const LodOperators a = assemble_lod(s, 1, Formulation::galerkin, 1);
  const LodOperators b = assemble_lod(s, 1, Formulation::galerkin, 3);
  CHECK((DenseMatrix(a.corrector).array() == DenseMatrix(b.corrector).array()).all());
  CHECK((DenseMatrix(a.stiffness).array() == DenseMatrix(b.stiffness).array()).all());
}

TEST_CASE("coarse energy is conserved") {
  const LodSetup s = periodic_setup(1, 8, 64, 0.125, false);
  const LodOperators ops = assemble_lod(s, 2, Formulation::galerkin);
  const Vector z0 = elliptic_projection(interpolate_field(s.fine, Field::gaussian(0.5, 0.1)),
                                        ops, s.stiffness);
  const Vector e0 = Vector::Zero(z0.size());
  const double e_start = discrete_energy(ops.mass, ops.stiffness, {z0, e0, 0, 1.0 / 128});
  double drift = 0.0;
  simulate(ops.mass, ops.stiffness, {}, z0, e0, 1.0 / 128, 0.25, {}, [&](const WaveState &w) {
    drift = std::max(drift, std::abs(discrete_energy(ops.mass, ops.stiffness, w) - e_start));
  });
  CHECK(drift / std::max(e_start, 1.0) <= 1e-10);
}

TEST_CASE("truncation curve and dumps") {
  const LodSetup s = periodic_setup(1, 8, 64, 0.125, false);
  const std::vector<double> curve = truncation_error_curve(s, {1, 2, 3, 7}, 3);
  REQUIRE(curve.size() == 4);
  CHECK(curve[0] > curve[1]);
  CHECK(curve[1] > curve[2]);
  CHECK(curve[3] <= 1e-9);

  std::ostringstream os;
  write_triplets_csv(os, from_triplets(2, 2, {{1, 0, 2.5}}));
  CHECK(os.str() == "row,col,value\n1,0,2.5\n");
}
