#include <doctest.h>

#include <cmath>

#include "hcwave/coefficients.hpp"
#include "hcwave/error.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/timestep.hpp"

using namespace hcwave;

namespace {

SparseMatrix scalar(double v) { return from_triplets(1, 1, {{0, 0, v}}); }

WaveState initial(double zeta, double eta, double tau) {
  WaveState s;
  s.zeta = Vector::Constant(1, zeta);
  s.eta = Vector::Constant(1, eta);
  s.tau = tau;
  return s;
}

}  // namespace

TEST_CASE("stepper setup") {
  const Stepper st = prepare_stepper(scalar(1.0), scalar(1.0), 2.0);
  CHECK(st.system.matrix().coeff(0, 0) == 2.0);
  const Stepper free = prepare_stepper(scalar(3.0), scalar(0.0), 0.5);
  CHECK(free.system.matrix().coeff(0, 0) == 3.0);
  CHECK_THROWS_AS(prepare_stepper(scalar(1.0), scalar(1.0), 0.0), Error);
}

TEST_CASE("scalar oscillator by hand") {
  // (1 + 1) eta_half = 0 + 1 * (-1)  =>  eta_half = -1/2
  const SparseMatrix one = scalar(1.0);
  const Stepper st = prepare_stepper(one, one, 2.0);
  const WaveState s1 = step(initial(1.0, 0.0, 2.0), st, one, one, {});
  CHECK(s1.zeta(0) == 0.0);
  CHECK(s1.eta(0) == -1.0);
  CHECK(s1.step_index == 1);
  // second step: 2 eta_half = -1 - 0  =>  eta_half = -1/2, zeta = -1, eta = 0
  const WaveState s2 = step(s1, st, one, one, {});
  CHECK(s2.zeta(0) == -1.0);
  CHECK(s2.eta(0) == 0.0);

  const WaveState end = simulate(one, one, {}, s1.zeta * 0 + Vector::Ones(1),
                                 Vector::Zero(1), 2.0, 4.0, {});
  CHECK(end.zeta(0) == -1.0);
  CHECK(end.step_index == 2);
}

TEST_CASE("trivial trajectories") {
  const TensorMesh mesh = build_mesh(1, 8);
  const SparseMatrix m = assemble_mass(mesh);
  const SparseMatrix s = assemble_stiffness(mesh, constant_coefficient(mesh, 1.0));
  const Vector z = Vector::Zero(m.rows());
  int calls = 0;
  const WaveState end = simulate(m, s, {}, z, z, 0.125, 0.125, {},
                                 [&](const WaveState &w) {
                                   ++calls;
                                   CHECK(w.zeta.norm() == 0.0);
                                 });
  CHECK(calls == 2);
  CHECK(end.step_index == 1);

  // S = 0: free drift zeta^n = zeta^0 + n tau eta^0
  const SparseMatrix zero(m.rows(), m.rows());
  const Vector z0 = Vector::LinSpaced(m.rows(), 0.0, 1.0);
  const Vector e0 = Vector::Constant(m.rows(), 0.75);
  const WaveState drift = simulate(m, zero, {}, z0, e0, 0.25, 1.0, {}, {}, true);
  CHECK((drift.zeta - (z0 + 4 * 0.25 * e0)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("step count") {
  CHECK(step_count(0.25, 1.0) == 4);
  CHECK(step_count(std::ldexp(1.0, -7), 0.25) == 32);
  CHECK_THROWS_AS(step_count(0.3, 1.0), Error);
  CHECK_THROWS_AS(step_count(-0.25, 1.0), Error);
}

TEST_CASE("energy conservation and time reversal") {
  for (int dim = 1; dim <= 2; ++dim) {
    const TensorMesh mesh = build_mesh(dim, dim == 1 ? 64 : 16);
    const Coefficient a = periodic_inclusion(mesh, 0.25, 0.01);
    const SparseMatrix m = assemble_mass(mesh);
    const SparseMatrix s = assemble_stiffness(mesh, a);
    const Vector z0 = interpolate_field(mesh, Field::gaussian(0.5, 0.1));
    const Vector e0 = interpolate_field(mesh, Field::sine());
    WaveState w0{z0, e0, 0, 1.0 / 64};
    const double e_start = discrete_energy(m, s, w0);
    double drift = 0.0;
    const WaveState end = simulate(m, s, {}, z0, e0, 1.0 / 64, 0.5, {},
                                   [&](const WaveState &w) {
                                     drift = std::max(drift, std::abs(discrete_energy(m, s, w) -
                                                                      e_start));
                                   });
    CHECK(drift / std::max(e_start, 1.0) <= 1e-10);

    const Stepper back = prepare_stepper(m, s, -1.0 / 64);
    WaveState w = end;
    w.tau = -1.0 / 64;
    w.step_index = 0;
    for (int n = 0; n < 32; ++n) w = step(w, back, s, m, {});
    CHECK((w.zeta - z0).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((w.eta - e0).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("midpoint and crank-nicolson agree for affine loads") {
  const TensorMesh mesh = build_mesh(1, 32);
  const SparseMatrix m = assemble_mass(mesh);
  const SparseMatrix s = assemble_stiffness(mesh, constant_coefficient(mesh, 1.0));
  const Vector base = assemble_load(mesh, Field::poly_bubble());
  const LoadProvider affine = [&](double t) { return Vector((1.0 + 3.0 * t) * base); };
  const Vector z = Vector::Zero(m.rows());
  const WaveState a = simulate(m, s, affine, z, z, 1.0 / 32, 0.5, {Scheme::midpoint});
  const WaveState b = simulate(m, s, affine, z, z, 1.0 / 32, 0.5, {Scheme::crank_nicolson});
  CHECK((a.zeta - b.zeta).cwiseAbs().maxCoeff() <= 1e-12);

  const LoadProvider quadratic = [&](double t) { return Vector(t * t * base); };
  const WaveState c = simulate(m, s, quadratic, z, z, 1.0 / 32, 0.5, {Scheme::midpoint});
  const WaveState d =
      simulate(m, s, quadratic, z, z, 1.0 / 32, 0.5, {Scheme::crank_nicolson});
  CHECK((c.zeta - d.zeta).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("literal mass-load option multiplies the load by M") {
  const SparseMatrix m = scalar(2.0), s = scalar(1.0);
  const Stepper st = prepare_stepper(m, s, 1.0);
  const LoadProvider f = [](double) { return Vector(Vector::Ones(1)); };
  const WaveState w0 = initial(0.0, 0.0, 1.0);
  // (2 + 1/4) eta_half = 1/2 * F  or  1/2 * 2F
  const WaveState plain = step(w0, st, s, m, f, {});
  const WaveState literal = step(w0, st, s, m, f, {Scheme::midpoint, true});
  CHECK(plain.zeta(0) == doctest::Approx(0.5 / 2.25));
  CHECK(literal.zeta(0) == doctest::Approx(1.0 / 2.25));
}
