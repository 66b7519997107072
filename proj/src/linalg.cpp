#include "sigflip/linalg.hpp"

namespace sigflip {

EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw EigenFailure("symmetric eigensolver did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const int n = static_cast<int>(out.values.size());
  for (int j = 0; j < n; ++j) {
    int k = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = std::abs(out.vectors(i, j));
      if (a > best) {
        best = a;
        k = i;
      }
    }
    if (out.vectors(k, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
  }
  return out;
}

Eigen::MatrixXd householder_complement(const Eigen::VectorXd& w) {
  const int n = static_cast<int>(w.size());
  double norm = w.norm();
  if (!(norm > 0.0) || !w.allFinite())
    throw AnalysisError("complement basis of zero or non-finite vector");
  Eigen::VectorXd u = w / norm;
  int k = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double a = std::abs(u[i]);
    if (a > best) {
      best = a;
      k = i;
    }
  }
  double s = u[k] >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd p = u;
  p[k] += s;  // H = I - 2pp^T/(p^Tp) sends u to -s*e_k, so H*e_j (j != k)
              // spans the complement of u with orthonormal columns
  double denom = p.squaredNorm();
  Eigen::MatrixXd basis(n, n - 1);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    Eigen::VectorXd hj = -2.0 * (p[j] / denom) * p;
    hj[j] += 1.0;
    basis.col(col++) = hj;
  }
  return basis;
}

}  // namespace sigflip
