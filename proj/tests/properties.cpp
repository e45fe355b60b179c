// Randomized invariant checks: 100 trials per property on small meshes.
#include <doctest.h>

#include <random>

#include "hcwave/coefficients.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/homogenize.hpp"
#include "hcwave/interpolation.hpp"
#include "hcwave/lod.hpp"
#include "hcwave/timestep.hpp"

using namespace hcwave;

namespace {

constexpr int trials = 100;

struct Instance {
  TensorMesh coarse{1, 2};
  TensorMesh fine{1, 2};
  Coefficient coeff;
  bool weighted = false;
};

int pick(std::mt19937_64 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// 1D: fine n <= 64; 2D: fine n <= 16.
Instance random_instance(std::mt19937_64 &rng) {
  const int dim = pick(rng, 1, 2);
  const int fine_log = dim == 1 ? pick(rng, 3, 6) : pick(rng, 2, 4);
  const int coarse_log = pick(rng, 1, fine_log);
  const int nf = 1 << fine_log;
  Instance in;
  in.coarse = build_mesh(dim, 1 << coarse_log);
  in.fine = build_mesh(dim, nf);
  const double a0 = std::ldexp(1.0, -pick(rng, 1, 8));
  switch (pick(rng, 0, 2)) {
    case 0: {
      // eps with h | eps/4
      const double eps = std::ldexp(1.0, -pick(rng, 0, fine_log - 2));
      in.coeff = periodic_inclusion(in.fine, eps, a0);
      break;
    }
    case 1: {
      const double eps = std::ldexp(1.0, -pick(rng, 0, fine_log));
      in.coeff = random_checkerboard(in.fine, eps, a0, rng(), Box::unit());
      break;
    }
    default:
      in.coeff = constant_coefficient(in.fine, a0);
  }
  in.weighted = pick(rng, 0, 1) == 1;
  return in;
}

Vector random_vector(Index n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

double max_abs(const DenseMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("interpolation is a left inverse of prolongation") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < trials; ++t) {
    const Instance in = random_instance(rng);
    const InterpolationMatrix i = build_interpolation(in.coarse, in.fine, in.coeff, in.weighted);
    const DenseMatrix ip(i.matrix * prolongation(in.coarse, in.fine));
    CHECK(max_abs(ip - DenseMatrix::Identity(ip.rows(), ip.cols())) <= 1e-12);
  }
}

TEST_CASE("correctors lie in the kernel and operators are symmetric definite") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < trials; ++t) {
    const Instance in = random_instance(rng);
    const LodSetup s = make_lod_setup(in.coarse, in.fine, in.coeff, in.weighted);
    const int m = pick(rng, 1, 3);
    const LodOperators ops = assemble_lod(s, m, Formulation::galerkin);
    const DenseMatrix q(ops.corrector);
    CHECK(max_abs(DenseMatrix(s.interp.matrix * ops.corrector)) <= 1e-10 * std::max(max_abs(q), 1.0));
    CHECK(is_symmetric(ops.stiffness, 1e-12));
    CHECK(is_symmetric(ops.mass, 1e-12));
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> sm{DenseMatrix(ops.stiffness)};
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> mm{DenseMatrix(ops.mass)};
    CHECK(sm.eigenvalues().minCoeff() > 0.0);
    CHECK(mm.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("constrained solves satisfy constraints and the kernel equation") {
  std::mt19937_64 rng(303);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const TensorMesh mesh = build_mesh(dim, dim == 1 ? 1 << pick(rng, 3, 6) : 1 << pick(rng, 2, 4));
    const Coefficient a = random_checkerboard(mesh, mesh.h(), std::ldexp(1.0, -pick(rng, 0, 10)),
                                              rng(), Box::unit());
    const SparseMatrix A = assemble_stiffness(mesh, a);
    const Index n = A.rows();
    const int rows = pick(rng, 1, static_cast<int>(std::min<Index>(n - 1, 6)));
    std::vector<Triplet> c;
    for (int r = 0; r < rows; ++r)
      for (Index j = 0; j < n; ++j)
        if (pick(rng, 0, 2) == 0 || j == r) c.emplace_back(r, static_cast<int>(j), std::normal_distribution<double>()(rng));
    const SparseMatrix C = from_triplets(rows, n, c);
    if (!redundant_rows(C).empty()) continue;
    const Vector b = random_vector(n, rng);
    const Vector w = solve_constrained(A, C, b);
    CHECK((C * w).cwiseAbs().maxCoeff() <= 1e-10 * w.cwiseAbs().maxCoeff() + 1e-14);
    // A w - b lies in range(C^T): its component in ker C vanishes
    const DenseMatrix kernel = Eigen::FullPivLU<DenseMatrix>(DenseMatrix(C)).kernel();
    const Vector r = kernel.transpose() * (A * w - b);
    CHECK(r.norm() <= 1e-9 * std::max(b.norm(), 1.0));

    const Vector x = random_vector(n, rng);
    const Vector ax = A * x;
    CHECK(relative_residual(A, factorize(A).solve(ax), ax) <= 1e-10);
  }
}

TEST_CASE("seeded coefficients are reproducible") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const int log_n = dim == 1 ? pick(rng, 2, 6) : pick(rng, 2, 4);
    const TensorMesh mesh = build_mesh(dim, 1 << log_n);
    const double eps = std::ldexp(1.0, -pick(rng, 0, log_n));
    const std::uint64_t seed = rng();
    const Coefficient a = random_checkerboard(mesh, eps, 0.01, seed, Box::unit());
    const Coefficient b = random_checkerboard(mesh, eps, 0.01, seed, Box::unit());
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK((v == 0.01 || v == 1.0));
  }
}

TEST_CASE("midpoint and crank-nicolson coincide for affine loads") {
  std::mt19937_64 rng(505);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const TensorMesh mesh = build_mesh(dim, dim == 1 ? 1 << pick(rng, 2, 6) : 1 << pick(rng, 2, 4));
    const Coefficient a = random_checkerboard(mesh, mesh.h(), 0.05, rng(), Box::unit());
    const SparseMatrix M = assemble_mass(mesh), S = assemble_stiffness(mesh, a);
    const Vector f0 = random_vector(M.rows(), rng), f1 = random_vector(M.rows(), rng);
    const LoadProvider load = [&](double s) { return Vector(f0 + s * f1); };
    const Vector z0 = random_vector(M.rows(), rng), e0 = random_vector(M.rows(), rng);
    const double tau = std::ldexp(1.0, -pick(rng, 3, 6));
    const WaveState mp = simulate(M, S, load, z0, e0, tau, 8 * tau, {Scheme::midpoint});
    const WaveState cn = simulate(M, S, load, z0, e0, tau, 8 * tau, {Scheme::crank_nicolson});
    const double scale = std::max(1.0, mp.zeta.cwiseAbs().maxCoeff());
    CHECK((mp.zeta - cn.zeta).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((mp.eta - cn.eta).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, mp.eta.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("unforced energy is conserved") {
  std::mt19937_64 rng(606);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const TensorMesh mesh = build_mesh(dim, dim == 1 ? 1 << pick(rng, 2, 6) : 1 << pick(rng, 2, 4));
    const Coefficient a = random_checkerboard(mesh, mesh.h(), 0.01, rng(), Box::unit());
    const SparseMatrix M = assemble_mass(mesh), S = assemble_stiffness(mesh, a);
    const Vector z0 = random_vector(M.rows(), rng), e0 = random_vector(M.rows(), rng);
    const double tau = std::ldexp(1.0, -pick(rng, 2, 7));
    const double e_start = discrete_energy(M, S, {z0, e0, 0, tau});
    double drift = 0.0;
    simulate(M, S, {}, z0, e0, tau, 16 * tau, {}, [&](const WaveState &w) {
      drift = std::max(drift, std::abs(discrete_energy(M, S, w) - e_start));
    });
    CHECK(drift <= 1e-10 * std::max(e_start, 1.0));
  }
}

TEST_CASE("cell tensors respect the Voigt-Reuss bounds") {
  std::mt19937_64 rng(707);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const TensorMesh cell = build_mesh(dim, dim == 1 ? 1 << pick(rng, 2, 6) : 1 << pick(rng, 2, 4));
    const Coefficient a = random_checkerboard(cell, cell.h(), std::ldexp(1.0, -pick(rng, 0, 6)),
                                              rng(), Box::unit());
    double mean = 0.0, inv = 0.0;
    for (double v : a.values) {
      mean += v;
      inv += 1.0 / v;
    }
    mean /= static_cast<double>(a.values.size());
    const double harmonic = static_cast<double>(a.values.size()) / inv;
    const CellResult r = solve_cell_problems(a, false);
    const Eigen::Matrix2d t2 = r.tensor.entries.topLeftCorner(dim, dim);
    CHECK(std::abs(t2(0, dim - 1) - t2(dim - 1, 0)) <= 1e-12);
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(
                                   r.tensor.entries).eigenvalues();
    const double lo = dim == 1 ? t2(0, 0) : ev(0);
    const double hi = dim == 1 ? t2(0, 0) : ev(1);
    CHECK(lo >= harmonic * (1 - 1e-10));
    CHECK(hi <= mean * (1 + 1e-10));
    CHECK(r.cells.mean_residual <= 1e-12);
  }
}

TEST_CASE("patches grow monotonically") {
  std::mt19937_64 rng(808);
  for (int t = 0; t < trials; ++t) {
    const int dim = pick(rng, 1, 2);
    const TensorMesh c = build_mesh(dim, 1 << pick(rng, 1, dim == 1 ? 6 : 4));
    const Index k = std::uniform_int_distribution<Index>(0, c.element_count() - 1)(rng);
    const int m = pick(rng, 0, 4);
    const auto a = build_patch(c, k, m).elements;
    const auto b = build_patch(c, k, m + 1).elements;
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    CHECK(build_patch(c, k, c.cells_per_axis()).elements.size() ==
          static_cast<std::size_t>(c.element_count()));
  }
}
