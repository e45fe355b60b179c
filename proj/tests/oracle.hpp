#pragma once

// Independent reference computations for the tests: plain dense Gaussian
// elimination on std::vector, no Eigen solvers involved.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hcwave/linalg.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const hcwave::SparseMatrix &a) {
  Dense d(static_cast<std::size_t>(a.rows()), std::vector<double>(a.cols(), 0.0));
  for (int r = 0; r < a.outerSize(); ++r)
    for (hcwave::SparseMatrix::InnerIterator it(a, r); it; ++it)
      d[it.row()][it.col()] += it.value();
  return d;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) throw std::runtime_error("oracle: singular");
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// KKT [[A, C^T], [C, 0]] [w; l] = [b; 0] assembled and eliminated densely.
inline std::vector<double> solve_kkt(const Dense &a, const Dense &c,
                                     const std::vector<double> &b) {
  const std::size_t n = a.size(), m = c.size();
  Dense k(n + m, std::vector<double>(n + m, 0.0));
  std::vector<double> rhs(n + m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = b[i];
    for (std::size_t j = 0; j < n; ++j) k[i][j] = a[i][j];
  }
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < n; ++j) {
      k[n + r][j] = c[r][j];
      k[j][n + r] = c[r][j];
    }
  auto x = solve(k, rhs);
  x.resize(n);
  return x;
}

inline hcwave::Vector to_vector(const std::vector<double> &v) {
  return Eigen::Map<const hcwave::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace oracle
