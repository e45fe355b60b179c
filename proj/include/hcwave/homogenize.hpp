#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/fem.hpp"
#include "hcwave/linalg.hpp"
#include "hcwave/mesh.hpp"
#include "hcwave/timestep.hpp"

namespace hcwave {

/// a0 / (a0 + (1 - a0) |Sigma|)
double harmonic_average_1d(double a0, double sigma_fraction);

/// u0 + t v0, the high-contrast limit in 1D.
struct LimitSolution {
  Field u0;
  Field v0;
  double t = 0.0;

  double operator()(const Point &x, int dim) const {
    return u0(x, dim) + t * v0(x, dim);
  }
};

LimitSolution limit_solution_1d(const Field &u0, const Field &v0, double t);

struct HomogenizedTensor {
  int dim = 1;
  Eigen::Matrix2d entries = Eigen::Matrix2d::Identity();  // dim x dim block used
};

/// Periodic correctors xi_k on the unit cell. Unknowns are the periodic nodes
/// (opposite faces identified) that touch at least one active element.
struct CellSolution {
  TensorMesh cell_mesh{1, 2};
  std::vector<Index> node_of_unknown;  // periodic node id, i + n j
  std::vector<Vector> xi;              // per direction
  std::vector<bool> active_elements;
  double mean_residual = 0.0;          // max_k |mass . xi_k|
};

struct CellResult {
  CellSolution cells;
  HomogenizedTensor tensor;
};

/// Solves the cell problems and assembles
///   a_kl = int a (e_k + grad xi_k) . (e_l + grad xi_l).
/// With `perforated`, elements where a != 1 are removed from both the
/// problems and the integral.
CellResult solve_cell_problems(const Coefficient &cell_coeff, bool perforated);

/// Constant-tensor wave solve on `mesh` with the standard stepper.
WaveState homogenized_reference(const HomogenizedTensor &tensor,
                                const TensorMesh &mesh, const Field &f,
                                const Field &u0, const Field &v0, double tau,
                                double final_time, const StepOptions &options,
                                const Observer &observer = {});

}  // namespace hcwave
