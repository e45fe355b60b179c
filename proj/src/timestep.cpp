#include "hcwave/timestep.hpp"

#include <cmath>
#include <sstream>

#include "hcwave/error.hpp"

namespace hcwave {

Stepper prepare_stepper(const SparseMatrix &mass, const SparseMatrix &stiffness,
                        double tau, bool symmetric) {
  require(tau != 0.0 && std::isfinite(tau), "time step must be nonzero");
  require(mass.rows() == stiffness.rows() && mass.cols() == stiffness.cols(),
          "mass and stiffness dimensions differ");
  SparseMatrix system = mass + (0.25 * tau * tau) * stiffness;
  system.makeCompressed();
  return {symmetric ? Factorization::spd(system) : Factorization::general(system),
          tau};
}

WaveState step(const WaveState &state, const Stepper &stepper,
               const SparseMatrix &stiffness, const SparseMatrix &mass,
               const LoadProvider &load, const StepOptions &options) {
  const double tau = stepper.tau;
  const double t = state.time();
  Vector rhs = -(stiffness * state.zeta);
  if (load) {
    Vector f_half = options.scheme == Scheme::midpoint
                        ? load(t + 0.5 * tau)
                        : Vector(0.5 * (load(t) + load(t + tau)));
    if (options.literal_mass_load) f_half = mass * f_half;
    rhs += f_half;
  }
  rhs = mass * state.eta + (0.5 * tau) * rhs;
  const Vector eta_half = stepper.system.solve(rhs);

  WaveState next;
  next.zeta = state.zeta + tau * eta_half;
  next.eta = 2.0 * eta_half - state.eta;
  next.step_index = state.step_index + 1;
  next.tau = tau;
  return next;
}

Index step_count(double tau, double final_time) {
  require(tau > 0.0, "time step must be positive");
  require(final_time >= 0.0, "final time must be non-negative");
  const double ratio = final_time / tau;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "final time " << final_time << " is not an integer multiple of tau "
       << tau;
    fail(ErrorKind::invalid_argument, os.str());
  }
  return static_cast<Index>(rounded);
}

WaveState simulate(const SparseMatrix &mass, const SparseMatrix &stiffness,
                   const LoadProvider &load, const Vector &zeta0,
                   const Vector &eta0, double tau, double final_time,
                   const StepOptions &options, const Observer &observer,
                   bool symmetric) {
  const Index steps = step_count(tau, final_time);
  require(zeta0.size() == mass.rows() && eta0.size() == mass.rows(),
          "initial state does not match the system size");
  const Stepper stepper = prepare_stepper(mass, stiffness, tau, symmetric);
  WaveState state{zeta0, eta0, 0, tau};
  if (observer) observer(state);
  for (Index n = 0; n < steps; ++n) {
    state = step(state, stepper, stiffness, mass, load, options);
    if (observer) observer(state);
  }
  return state;
}

double discrete_energy(const SparseMatrix &mass, const SparseMatrix &stiffness,
                       const WaveState &state) {
  return 0.5 * state.eta.dot(mass * state.eta) +
         0.5 * state.zeta.dot(stiffness * state.zeta);
}

}  // namespace hcwave
