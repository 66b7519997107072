#include "sigflip/geometry.hpp"

#include <cmath>

#include "sigflip/errors.hpp"

namespace sigflip {

SignatureReport classify_spectrum(const Eigen::VectorXd& eigenvalues,
                                  double tol) {
  if (!(tol > 0.0)) throw ConfigError("signature tolerance must be positive");
  SignatureReport r;
  r.tol_used = tol;
  double maxabs = 0.0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    maxabs = std::max(maxabs, std::abs(eigenvalues[i]));
  double band = tol * std::max(1.0, maxabs);
  r.eigenvalues.assign(eigenvalues.data(),
                       eigenvalues.data() + eigenvalues.size());
  for (double lambda : r.eigenvalues) {
    if (std::abs(lambda) <= band) ++r.n_zero;
    else if (lambda < 0.0) ++r.n_neg;
    else ++r.n_pos;
  }
  return r;
}

SignatureReport signature_of(const Eigen::MatrixXd& sym, double tol) {
  return classify_spectrum(symmetric_eigen(sym).values, tol);
}

Eigen::MatrixXd evaluate_metric(const MetricField& m, const Point& p) {
  SquareMat<double> g(m.dim());
  m.eval(p, g);
  const int n = g.n();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(g.at(i, j)))
        throw DomainError("non-finite metric entry");
      out(i, j) = g.at(i, j);
    }
  return out;
}

Covector flat(const MetricField& m, const Point& p, const Eigen::VectorXd& v) {
  if (v.size() != m.dim())
    throw AnalysisError("vector dimension does not match chart");
  return evaluate_metric(m, p) * v;
}

DualScalar metric_determinant(const MetricField& m, const Point& p) {
  SquareMat<DualScalar> g(m.dim());
  m.eval(p, g);
  DualScalar d = determinant(g);
  if (d.g.size() == 0) d.g = Eigen::VectorXd::Zero(m.dim());
  return d;
}

double metric_determinant_value(const MetricField& m, const Point& p) {
  SquareMat<double> g(m.dim());
  m.eval(p, g);
  return determinant(g);
}

SignatureReport signature_at(const MetricField& m, const Point& p,
                             double tol) {
  return signature_of(evaluate_metric(m, p), tol);
}

Frame orthonormal_frame(const MetricField& m, const Point& p,
                        const Eigen::VectorXd& v) {
  const int n = m.dim();
  if (v.size() != n)
    throw AnalysisError("vector dimension does not match chart");
  Eigen::MatrixXd g = evaluate_metric(m, p);

  double det = determinant(from_eigen(g));
  if (std::abs(det) < 1e-12)
    throw DegenerateMetric("metric is degenerate at the frame point");

  double c = v.dot(g * v);
  if (!(c < 0.0)) throw NotTimelike("frame seed vector is not timelike");
  Eigen::VectorXd vhat = v / std::sqrt(-c);

  // Candidates: coordinate basis with its g-projection onto vhat removed
  // (g(vhat,vhat) = -1, so the projection of e onto vhat is -g(e,vhat)*vhat).
  Frame frame;
  frame.timelike = vhat;
  std::vector<Eigen::VectorXd> cands;
  Eigen::VectorXd gvhat = g * vhat;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    cands.push_back(e + e.dot(gvhat) * vhat);
  }

  std::vector<bool> used(cands.size(), false);
  for (int k = 0; k < n - 1; ++k) {
    // pivot: remaining candidate with the largest g-norm after the
    // projections so far (ties resolved to the smallest index)
    int pick = -1;
    double best = -1.0;
    for (std::size_t j = 0; j < cands.size(); ++j) {
      if (used[j]) continue;
      double norm2 = cands[j].dot(g * cands[j]);
      if (norm2 > best) {
        best = norm2;
        pick = static_cast<int>(j);
      }
    }
    if (pick < 0 || best < 1e-12)
      throw PivotFailure("frame pivot norm below threshold");
    used[pick] = true;
    Eigen::VectorXd ek = cands[pick] / std::sqrt(best);
    frame.spacelike.push_back(ek);
    Eigen::VectorXd gek = g * ek;
    for (std::size_t j = 0; j < cands.size(); ++j) {
      if (used[j]) continue;
      cands[j] -= cands[j].dot(gek) * ek;
    }
  }

  // frame relations, part of the contract
  double dev = std::abs(vhat.dot(g * vhat) + 1.0);
  for (int i = 0; i < n - 1; ++i) {
    dev = std::max(dev, std::abs(vhat.dot(g * frame.spacelike[i])));
    for (int j = 0; j < n - 1; ++j) {
      double want = i == j ? 1.0 : 0.0;
      dev = std::max(
          dev, std::abs(frame.spacelike[i].dot(g * frame.spacelike[j]) - want));
    }
  }
  if (dev > 1e-10)
    throw PivotFailure("frame relations exceed tolerance after construction");
  return frame;
}

}  // namespace sigflip
