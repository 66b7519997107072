#pragma once

#include <vector>

#include "sigflip/fields.hpp"

namespace sigflip {

struct SignatureReport {
  int n_neg = 0;
  int n_zero = 0;
  int n_pos = 0;
  std::vector<double> eigenvalues;  // ascending
  double tol_used = 0.0;

  bool is(int nn, int nz, int np) const {
    return n_neg == nn && n_zero == nz && n_pos == np;
  }
  bool lorentzian() const {
    return n_neg == 1 && n_zero == 0 &&
           n_pos == static_cast<int>(eigenvalues.size()) - 1;
  }
  bool riemannian() const {
    return n_neg == 0 && n_zero == 0 &&
           n_pos == static_cast<int>(eigenvalues.size());
  }
};

constexpr double kZeroEigTol = 1e-8;

// Sign counts with the relative zero band |lambda| <= tol*max(1, max|lambda|).
SignatureReport classify_spectrum(const Eigen::VectorXd& eigenvalues,
                                  double tol);

SignatureReport signature_of(const Eigen::MatrixXd& sym, double tol);

Eigen::MatrixXd evaluate_metric(const MetricField& m, const Point& p);

// Musical isomorphism: (flat v)_i = g_ij v^j.
Covector flat(const MetricField& m, const Point& p, const Eigen::VectorXd& v);

// Determinant of the metric matrix with its exact differential, via
// dual-number propagation (cofactor expansion for n <= 4, LU above).
DualScalar metric_determinant(const MetricField& m, const Point& p);

// Value-channel determinant; same arithmetic tree as the dual value.
double metric_determinant_value(const MetricField& m, const Point& p);

SignatureReport signature_at(const MetricField& m, const Point& p,
                             double tol = kZeroEigTol);

struct Frame {
  Eigen::VectorXd timelike;               // V-hat, M(V-hat,V-hat) = -1
  std::vector<Eigen::VectorXd> spacelike; // E_1..E_{n-1}, M-orthonormal
};

// Lorentzian frame containing the normalized V: V-hat = V/sqrt(-M(V,V)),
// then Gram-Schmidt of the coordinate basis against M with largest-|M-norm|
// pivoting. Frame relations hold to 1e-10 (checked).
Frame orthonormal_frame(const MetricField& m, const Point& p,
                        const Eigen::VectorXd& v);

}  // namespace sigflip
