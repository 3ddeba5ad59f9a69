#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tabml/error.hpp"

namespace tabml {

// Minimal dense helpers for the closed-form models. Sizes here are the
// number of input features (a dozen or so), so plain O(n^3) routines with
// fixed evaluation order are both fast enough and deterministic.

struct SqMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // row-major

  explicit SqMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}

  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += at(i, i);
    return t;
  }

  void add_diagonal(double v) {
    for (std::size_t i = 0; i < n; ++i) at(i, i) += v;
  }
};

// Cholesky factor L (lower triangular) of a symmetric positive definite
// matrix. Throws FitError when the matrix is not positive definite.
inline SqMatrix cholesky(const SqMatrix& m) {
  SqMatrix l(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m.at(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (sum <= 0.0) throw FitError("matrix is not positive definite");
        l.at(i, i) = std::sqrt(sum);
      } else {
        l.at(i, j) = sum / l.at(j, j);
      }
    }
  }
  return l;
}

// Solves L L^T x = b given the Cholesky factor.
inline std::vector<double> cholesky_solve(const SqMatrix& l, std::vector<double> b) {
  const std::size_t n = l.n;
  for (std::size_t i = 0; i < n; ++i) {  // forward: L y = b
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l.at(i, k) * b[k];
    b[i] = sum / l.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {  // backward: L^T x = y
    double sum = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l.at(k, ii) * b[k];
    b[ii] = sum / l.at(ii, ii);
  }
  return b;
}

// log(det(M)) for SPD M via its Cholesky factor.
inline double cholesky_logdet(const SqMatrix& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < l.n; ++i) s += std::log(l.at(i, i));
  return 2.0 * s;
}

// Solves A x = b by Gaussian elimination with partial pivoting; used where
// the system is symmetric but not necessarily definite.
inline std::vector<double> solve(SqMatrix a, std::vector<double> b) {
  const std::size_t n = a.n;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
    if (a.at(pivot, col) == 0.0) throw FitError("singular linear system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a.at(r, col) / a.at(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t c = ii + 1; c < n; ++c) sum -= a.at(ii, c) * x[c];
    x[ii] = sum / a.at(ii, ii);
  }
  return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace tabml
