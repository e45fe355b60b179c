#pragma once

#include <functional>

#include "hcwave/linalg.hpp"

namespace hcwave {

enum class Scheme { midpoint, crank_nicolson };

/// (zeta^n, eta^n) with eta the velocity coefficients.
struct WaveState {
  Vector zeta;
  Vector eta;
  Index step_index = 0;
  double tau = 0.0;

  double time() const { return static_cast<double>(step_index) * tau; }
};

/// Assembled load vector F(t); an empty provider means F = 0.
using LoadProvider = std::function<Vector(double)>;

/// Factorization of M + tau^2/4 S, computed once per run.
struct Stepper {
  Factorization system;
  double tau = 0.0;
};

/// tau may be negative for backward integration; tau = 0 is rejected.
/// `symmetric` selects LDL^T (requires SPD) versus LU.
Stepper prepare_stepper(const SparseMatrix &mass, const SparseMatrix &stiffness,
                        double tau, bool symmetric = true);

struct StepOptions {
  Scheme scheme = Scheme::midpoint;
  /// Uses M F^{n+1/2} instead of F^{n+1/2} on the right-hand side.
  bool literal_mass_load = false;
};

/// One step of
///   (M + tau^2/4 S) eta^{n+1/2} = M eta^n + tau/2 (-S zeta^n + F^{n+1/2})
///   zeta^{n+1} = zeta^n + tau eta^{n+1/2},  eta^{n+1} = 2 eta^{n+1/2} - eta^n
WaveState step(const WaveState &state, const Stepper &stepper,
               const SparseMatrix &stiffness, const SparseMatrix &mass,
               const LoadProvider &load, const StepOptions &options = {});

/// Called for n = 0..N with t^n and the state at t^n.
using Observer = std::function<void(const WaveState &)>;

/// Runs exactly T/tau steps; T/tau must be an integer.
WaveState simulate(const SparseMatrix &mass, const SparseMatrix &stiffness,
                   const LoadProvider &load, const Vector &zeta0,
                   const Vector &eta0, double tau, double final_time,
                   const StepOptions &options, const Observer &observer = {},
                   bool symmetric = true);

/// Number of steps T/tau, rejecting non-integer ratios.
Index step_count(double tau, double final_time);

/// 1/2 eta^T M eta + 1/2 zeta^T S zeta
double discrete_energy(const SparseMatrix &mass, const SparseMatrix &stiffness,
                       const WaveState &state);

}  // namespace hcwave
