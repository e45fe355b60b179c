#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "hcwave/mesh.hpp"

namespace hcwave {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Compressed row storage; column indices sorted and unique per row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

SparseMatrix from_triplets(Index rows, Index cols,
                           const std::vector<Triplet> &triplets);
SparseMatrix sparse_identity(Index n);

/// |Aij - Aji| <= tol * max(|Aij|, |Aji|, 1) for all entries.
bool is_symmetric(const SparseMatrix &a, double tol = 1e-14);
SparseMatrix symmetrized(const SparseMatrix &a);

/// A(rows, cols) with the given index lists.
SparseMatrix submatrix(const SparseMatrix &a, const std::vector<Index> &rows,
                       const std::vector<Index> &cols);

double relative_residual(const SparseMatrix &a, const Vector &x,
                         const Vector &b);

/// Reusable solve handle for a fixed square matrix. Immutable once built;
/// concurrent solves are safe.
class Factorization {
 public:
  enum class Kind { spd, general };

  /// Sparse LDL^T; rejects matrices with a non-positive pivot.
  static Factorization spd(const SparseMatrix &a);
  /// Sparse LU with partial pivoting (nonsymmetric or indefinite input).
  static Factorization general(const SparseMatrix &a);

  Vector solve(const Vector &b) const;
  DenseMatrix solve(const DenseMatrix &b) const;

  Index size() const;
  Kind kind() const;
  const SparseMatrix &matrix() const;

 private:
  struct Impl;
  explicit Factorization(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

Factorization factorize(const SparseMatrix &a);

/// Minimizes over {w : C w = 0}: returns w with C w = 0 and
/// v^T A w = v^T b for every v in ker(C). Solved as the KKT system
/// [[A, C^T], [C, 0]]. Each column of b is an independent right-hand side.
DenseMatrix solve_constrained(const SparseMatrix &a, const SparseMatrix &c,
                              const DenseMatrix &b);
Vector solve_constrained(const SparseMatrix &a, const SparseMatrix &c,
                         const Vector &b);

/// Rows of c that are linearly dependent on earlier rows (tolerance relative
/// to each row's own norm). Empty when c has full row rank.
std::vector<Index> redundant_rows(const SparseMatrix &c, double tol = 1e-7);

}  // namespace hcwave
