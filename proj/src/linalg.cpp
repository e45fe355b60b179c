#include "hcwave/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "hcwave/error.hpp"

namespace hcwave {

namespace {

using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

constexpr double kResidualWarning = 1e-8;

void check_residual(const SparseMatrix &a, const Vector &x, const Vector &b,
                    const char *what) {
  const double res = relative_residual(a, x, b);
  if (!(res <= kResidualWarning)) {
    std::ostringstream os;
    os << what << ": relative residual " << res << " exceeds "
       << kResidualWarning << " (ill-conditioned system)";
    warn(os.str());
  }
}

}  // namespace

SparseMatrix from_triplets(Index rows, Index cols,
                           const std::vector<Triplet> &triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SparseMatrix sparse_identity(Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  m.makeCompressed();
  return m;
}

bool is_symmetric(const SparseMatrix &a, double tol) {
  if (a.rows() != a.cols()) return false;
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  for (int r = 0; r < diff.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(diff, r); it; ++it) {
      const double aij = a.coeff(it.row(), it.col());
      const double aji = a.coeff(it.col(), it.row());
      const double scale = std::max({std::abs(aij), std::abs(aji), 1.0});
      if (std::abs(it.value()) > tol * scale) return false;
    }
  }
  return true;
}

SparseMatrix symmetrized(const SparseMatrix &a) {
  SparseMatrix at = a.transpose();
  SparseMatrix s = 0.5 * (a + at);
  s.makeCompressed();
  return s;
}

SparseMatrix submatrix(const SparseMatrix &a, const std::vector<Index> &rows,
                       const std::vector<Index> &cols) {
  std::unordered_map<Index, int> col_pos;
  col_pos.reserve(cols.size() * 2);
  for (std::size_t j = 0; j < cols.size(); ++j)
    col_pos.emplace(cols[j], static_cast<int>(j));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it) {
      auto found = col_pos.find(it.col());
      if (found != col_pos.end())
        t.emplace_back(static_cast<int>(i), found->second, it.value());
    }
  }
  return from_triplets(static_cast<Index>(rows.size()),
                       static_cast<Index>(cols.size()), t);
}

double relative_residual(const SparseMatrix &a, const Vector &x,
                         const Vector &b) {
  const Vector r = a * x - b;
  return r.norm() / std::max(b.norm(), 1.0);
}

struct Factorization::Impl {
  Kind kind;
  SparseMatrix matrix;
  Eigen::SimplicialLDLT<ColMajorSparse, Eigen::Lower> ldlt;
  Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

Factorization Factorization::spd(const SparseMatrix &a) {
  require(a.rows() == a.cols(), "factorize: matrix must be square");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::spd;
  impl->matrix = a;
  ColMajorSparse cm = a;
  impl->ldlt.compute(cm);
  if (impl->ldlt.info() != Eigen::Success)
    fail(ErrorKind::numerical, "factorize: LDL^T factorization failed");
  const Vector d = impl->ldlt.vectorD();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      std::ostringstream os;
      os << "factorize: non-positive pivot " << d[i]
         << " (matrix is singular or indefinite)";
      fail(ErrorKind::numerical, os.str());
    }
  }
  return Factorization(std::move(impl));
}

Factorization Factorization::general(const SparseMatrix &a) {
  require(a.rows() == a.cols(), "factorize: matrix must be square");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::general;
  impl->matrix = a;
  ColMajorSparse cm = a;
  cm.makeCompressed();
  impl->lu.analyzePattern(cm);
  impl->lu.factorize(cm);
  if (impl->lu.info() != Eigen::Success)
    fail(ErrorKind::numerical,
         "factorize: LU factorization failed (singular matrix): " +
             impl->lu.lastErrorMessage());
  return Factorization(std::move(impl));
}

Vector Factorization::solve(const Vector &b) const {
  require(b.size() == size(), "solve: right-hand side has wrong length");
  Vector x = impl_->kind == Kind::spd ? Vector(impl_->ldlt.solve(b))
                                      : Vector(impl_->lu.solve(b));
  check_residual(impl_->matrix, x, b, "solve");
  return x;
}

DenseMatrix Factorization::solve(const DenseMatrix &b) const {
  DenseMatrix x(b.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) x.col(j) = solve(Vector(b.col(j)));
  return x;
}

Index Factorization::size() const { return impl_->matrix.rows(); }
Factorization::Kind Factorization::kind() const { return impl_->kind; }
const SparseMatrix &Factorization::matrix() const { return impl_->matrix; }

Factorization factorize(const SparseMatrix &a) { return Factorization::spd(a); }

std::vector<Index> redundant_rows(const SparseMatrix &c, double tol) {
  const Index r = c.rows();
  const DenseMatrix gram = DenseMatrix(c * c.transpose());
  // Cholesky of the Gram matrix in row order, skipping dependent rows.
  DenseMatrix l = DenseMatrix::Zero(r, r);
  std::vector<Index> accepted, redundant;
  for (Index i = 0; i < r; ++i) {
    for (std::size_t a = 0; a < accepted.size(); ++a) {
      const Index k = accepted[a];
      double s = gram(i, k);
      for (std::size_t b = 0; b < a; ++b) s -= l(i, accepted[b]) * l(k, accepted[b]);
      l(i, k) = s / l(k, k);
    }
    double d = gram(i, i);
    for (Index k : accepted) d -= l(i, k) * l(i, k);
    if (gram(i, i) == 0.0 || d <= tol * tol * gram(i, i)) {
      redundant.push_back(i);
    } else {
      l(i, i) = std::sqrt(d);
      accepted.push_back(i);
    }
  }
  return redundant;
}

DenseMatrix solve_constrained(const SparseMatrix &a, const SparseMatrix &c,
                              const DenseMatrix &b) {
  const Index n = a.rows();
  const Index r = c.rows();
  require(a.cols() == n, "solve_constrained: A must be square");
  require(c.cols() == n, "solve_constrained: C column count must match A");
  require(b.rows() == n, "solve_constrained: right-hand side has wrong length");

  const std::vector<Index> bad = redundant_rows(c);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "solve_constrained: constraint matrix is rank deficient; redundant rows:";
    for (Index i : bad) os << ' ' << i;
    fail(ErrorKind::numerical, os.str());
  }

  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros() + 2 * c.nonZeros()));
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < c.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(c, i); it; ++it) {
      t.emplace_back(static_cast<int>(n + it.row()), it.col(), it.value());
      t.emplace_back(it.col(), static_cast<int>(n + it.row()), it.value());
    }
  }
  SparseMatrix kkt = from_triplets(n + r, n + r, t);
  const Factorization f = Factorization::general(kkt);

  DenseMatrix w(n, b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    Vector rhs = Vector::Zero(n + r);
    rhs.head(n) = b.col(j);
    const Vector x = f.solve(rhs);
    w.col(j) = x.head(n);
    const double cw = r > 0 ? (c * w.col(j)).cwiseAbs().maxCoeff() : 0.0;
    const double wmax = n > 0 ? w.col(j).cwiseAbs().maxCoeff() : 0.0;
    if (cw > 1e-10 * wmax + 1e-14) {
      std::ostringstream os;
      os << "solve_constrained: constraint violation " << cw;
      warn(os.str());
    }
  }
  return w;
}

Vector solve_constrained(const SparseMatrix &a, const SparseMatrix &c,
                         const Vector &b) {
  DenseMatrix bm = b;
  return solve_constrained(a, c, bm).col(0);
}

}  // namespace hcwave
