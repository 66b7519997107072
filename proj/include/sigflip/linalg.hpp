#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sigflip/dual.hpp"
#include "sigflip/errors.hpp"

namespace sigflip {

// Dense square matrix over an arbitrary scalar (double or DualScalar).
// Row-major; deliberately minimal.
template <class T>
class SquareMat {
public:
  explicit SquareMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  int n() const { return n_; }
  T& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

private:
  int n_;
  std::vector<T> a_;
};

namespace detail {

// Laplace expansion along the top active row, tracking live columns in a
// mask. Exact arithmetic tree independent of values; used for n <= 4 where
// it needs no pivoting decisions at all.
template <class T>
T det_cofactor(const SquareMat<T>& m, int row, unsigned colmask) {
  const int n = m.n();
  int live = 0;
  for (int j = 0; j < n; ++j)
    if (colmask & (1u << j)) ++live;
  if (live == 1) {
    for (int j = 0; j < n; ++j)
      if (colmask & (1u << j)) return m.at(row, j);
  }
  T acc(0.0);
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    if (!(colmask & (1u << j))) continue;
    T sub = det_cofactor(m, row + 1, colmask & ~(1u << j));
    T term = m.at(row, j) * sub;
    acc = sign > 0 ? acc + term : acc - term;
    sign = -sign;
  }
  return acc;
}

// LU with partial pivoting; pivot choice compares the value channel only, so
// the reduction sequence is identical for double and dual inputs. A column
// whose value channel is exactly zero below the diagonal contributes a zero
// diagonal factor; elimination is skipped (dividing by a zero-valued dual is
// the one thing forward mode cannot do), which still yields the right dual
// determinant wherever at most one pivot degenerates, i.e. on the rank n-1
// degeneracy sets this project cares about.
template <class T>
T det_lu(SquareMat<T> m) {
  const int n = m.n();
  T det(1.0);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(value_of(m.at(k, k)));
    for (int i = k + 1; i < n; ++i) {
      double cand = std::abs(value_of(m.at(i, k)));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) {
      det = det * m.at(k, k);
      continue;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
      sign = -sign;
    }
    det = det * m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      T factor = m.at(i, k) / m.at(k, k);
      for (int j = k + 1; j < n; ++j)
        m.at(i, j) = m.at(i, j) - factor * m.at(k, j);
    }
  }
  return sign > 0 ? det : -det;
}

}  // namespace detail

template <class T>
T determinant(const SquareMat<T>& m) {
  const int n = m.n();
  if (n <= 0) throw AnalysisError("determinant of empty matrix");
  if (n == 1) return m.at(0, 0);
  if (n <= 4) return detail::det_cofactor<T>(m, 0, (1u << n) - 1u);
  return detail::det_lu<T>(m);
}

inline SquareMat<double> from_eigen(const Eigen::MatrixXd& m) {
  SquareMat<double> out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.n(); ++i)
    for (int j = 0; j < out.n(); ++j) out.at(i, j) = m(i, j);
  return out;
}

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal, matching order
};

// Symmetric eigendecomposition with a deterministic sign convention: each
// eigenvector's first component of largest magnitude is made positive.
EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& sym);

// Orthonormal basis of the hyperplane orthogonal (Euclidean) to w, built from
// one Householder reflector about the largest-|w_i| axis. Deterministic;
// columns ordered by the axis they replace.
Eigen::MatrixXd householder_complement(const Eigen::VectorXd& w);

}  // namespace sigflip
