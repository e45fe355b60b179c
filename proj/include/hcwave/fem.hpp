#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcwave/coefficients.hpp"
#include "hcwave/linalg.hpp"
#include "hcwave/mesh.hpp"

namespace hcwave {

enum class FieldKind { zero, constant, gaussian, poly_bubble, sine, outside_box };

/// Analytic scalar field on the closed unit domain.
///
///   gaussian    exp(-sum_i (x_i - c_i)^2 / sigma^2), params {c, sigma} or
///               {c0, c1, sigma}
///   poly_bubble prod_i x_i (x_i - 1)
///   sine        prod_i sin(pi x_i)
///   constant    params {value}
///   outside_box params {lo, hi, value=1}: value outside (lo, hi)^dim, 0 inside
struct Field {
  FieldKind kind = FieldKind::zero;
  std::vector<double> params;

  double operator()(const Point &x, int dim) const;

  static Field zero() { return {}; }
  static Field constant(double v) { return {FieldKind::constant, {v}}; }
  static Field gaussian(double center, double sigma) {
    return {FieldKind::gaussian, {center, sigma}};
  }
  static Field poly_bubble() { return {FieldKind::poly_bubble, {}}; }
  static Field sine() { return {FieldKind::sine, {}}; }
  static Field outside_box(double lo, double hi, double value = 1.0) {
    return {FieldKind::outside_box, {lo, hi, value}};
  }
};

/// Parses "zero", "constant(1)", "gaussian(0.5,0.1)", "poly_bubble",
/// "sine", "outside_box(0.25,0.75)".
Field parse_field(const std::string &text);
std::string to_string(const Field &field);

/// Q1 element of side h with 2-point Gauss quadrature per axis.
struct ReferenceElement {
  int dim = 1;
  double h = 1.0;
  int points = 2;     // quadrature points
  int functions = 2;  // local basis functions
  std::vector<Point> reference_points;   // in [0,1]^dim
  std::vector<double> weights;           // include the h^dim Jacobian
  DenseMatrix values;                    // points x functions
  std::vector<DenseMatrix> gradients;    // per point: functions x dim
  DenseMatrix stiffness;                 // unit coefficient
  DenseMatrix mass;
};

ReferenceElement reference_element(int dim, double h);

/// Local stiffness for a constant tensor coefficient (dim x dim block used).
DenseMatrix element_stiffness(const ReferenceElement &ref,
                              const Eigen::Matrix2d &tensor);

/// Stiffness on interior dofs, exact for elementwise-constant coefficients.
SparseMatrix assemble_stiffness(const TensorMesh &mesh, const Coefficient &coeff);
/// Stiffness over all nodes, before Dirichlet elimination.
SparseMatrix assemble_stiffness_all_nodes(const TensorMesh &mesh,
                                          const Coefficient &coeff);
/// Stiffness for a constant (possibly anisotropic) tensor coefficient.
SparseMatrix assemble_stiffness(const TensorMesh &mesh,
                                const Eigen::Matrix2d &tensor);

/// Consistent mass on interior dofs, optionally weighted per element.
SparseMatrix assemble_mass(const TensorMesh &mesh,
                           const Coefficient *weight = nullptr);

/// time_scale * (f, phi_i) on interior dofs.
Vector assemble_load(const TensorMesh &mesh, const Field &f,
                     double time_scale = 1.0);

/// Nodal interpolant at interior nodes.
Vector interpolate_field(const TensorMesh &mesh, const Field &f);
Vector interpolate_function(const TensorMesh &mesh,
                            const std::function<double(const Point &)> &f);

/// sqrt(v^T M v); throws when the quadratic form is negative beyond roundoff.
double quadratic_norm(const Vector &v, const SparseMatrix &m);
double norm_l2(const Vector &v, const SparseMatrix &mass);
double norm_energy(const Vector &v, const SparseMatrix &stiffness);

/// CSV: node_index,x(,y),value over all nodes (boundary nodes are zero).
void write_field_csv(std::ostream &os, const TensorMesh &mesh, const Vector &dofs);

}  // namespace hcwave
