#include "sigflip/transform.hpp"

#include <cmath>
#include <sstream>

#include "sigflip/errors.hpp"

namespace sigflip {

namespace {

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

class TransformedMetricField final : public MetricField {
public:
  TransformedMetricField(Triple t, double tol) : t_(std::move(t)), tol_(tol) {}

  const Chart& chart() const override { return t_.g->chart(); }
  void eval(const Point& p, SquareMat<double>& out) const override {
    eval_impl(p, out);
  }
  void eval(const Point& p, SquareMat<DualScalar>& out) const override {
    eval_impl(p, out);
  }

private:
  template <class T>
  void eval_impl(const Point& p, SquareMat<T>& out) const {
    const int n = chart().dim();
    if (out.n() != n) out = SquareMat<T>(n);
    SquareMat<T> g(n);
    t_.g->eval(p, g);
    std::vector<T> v;
    t_.V->eval(p, v);
    T f;
    t_.f->eval(p, f);
    std::vector<T> vlow = metric_lower(g, v);
    T c = T(0.0);
    for (int i = 0; i < n; ++i) c = c + vlow[i] * v[i];
    if (std::abs(value_of(c) + 1.0) > tol_)
      throw NormalizationError("triple violates g(V,V) = -1 at " +
                               point_str(p));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        T entry = g.at(i, j) + f * vlow[i] * vlow[j];
        out.at(i, j) = entry;
        out.at(j, i) = entry;
      }
    }
  }

  Triple t_;
  double tol_;
};

// Shared evaluation core for the decomposed metric and scalar, so the f and
// g fields of a decomposed triple can never drift apart.
class DecomposeCore {
public:
  DecomposeCore(std::shared_ptr<const MetricField> gt,
                std::shared_ptr<const VectorField> v, double eps_h)
      : gt_(std::move(gt)), v_(std::move(v)), eps_h_(eps_h) {}

  const Chart& chart() const { return gt_->chart(); }

  template <class T>
  T scalar_c(const Point& p) const {
    SquareMat<T> g(chart().dim());
    gt_->eval(p, g);
    std::vector<T> v;
    v_->eval(p, v);
    return metric_pairing(g, v, v);
  }

  // direct closed form; valid only where c is safely nonzero
  template <class T>
  void direct(const Point& p, SquareMat<T>& out) const {
    const int n = chart().dim();
    if (out.n() != n) out = SquareMat<T>(n);
    SquareMat<T> gt(n);
    gt_->eval(p, gt);
    std::vector<T> v;
    v_->eval(p, v);
    T c = metric_pairing(gt, v, v);
    std::vector<T> gtv = metric_lower(gt, v);
    T f = c + 1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        // u = -gt(V,.)/c, entry = gt_ij - f u_i u_j
        T entry = gt.at(i, j) - f * (gtv[i] / c) * (gtv[j] / c);
        out.at(i, j) = entry;
        out.at(j, i) = entry;
      }
    }
  }

  template <class T>
  void eval_g(const Point& p, SquareMat<T>& out) const;

  double eps_h() const { return eps_h_; }
  const MetricField& gt() const { return *gt_; }
  const VectorField& v() const { return *v_; }

private:
  Eigen::VectorXd sample_direction(const Point& p) const;

  std::shared_ptr<const MetricField> gt_;
  std::shared_ptr<const VectorField> v_;
  double eps_h_;
};

// Offsets of the six extrapolation samples in units of 8*eps_h, and the
// least-squares solve for [a0 a1 a2] of a0 + a1 s + a2 s^2 expressed as one
// precomputed 3x6 matrix L: a = L q. Rescaling by 8*eps keeps the fit
// conditioned (raw powers of ~1e-6 would not be).
const double kSigma[6] = {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};

const Eigen::Matrix<double, 3, 6>& fit_matrix() {
  static const Eigen::Matrix<double, 3, 6> L = [] {
    Eigen::Matrix<double, 6, 3> X;
    for (int k = 0; k < 6; ++k) {
      X(k, 0) = 1.0;
      X(k, 1) = kSigma[k];
      X(k, 2) = kSigma[k] * kSigma[k];
    }
    Eigen::Matrix<double, 3, 3> XtX = X.transpose() * X;
    return Eigen::Matrix<double, 3, 6>(XtX.inverse() * X.transpose());
  }();
  return L;
}

Eigen::VectorXd DecomposeCore::sample_direction(const Point& p) const {
  // Preferred line: along V, as the band is defined by c = gt(V,V) vanishing
  // linearly in the transverse case. When the line lies inside the
  // degeneracy set (tangent radical), fall back to the steepest direction of
  // c, which is transverse to H whenever dc != 0.
  Eigen::VectorXd d = v_->values(p);
  auto degenerate_along = [&](const Eigen::VectorXd& dir) {
    for (double s : kSigma) {
      Point q = p + (s * 8.0 * eps_h_) * dir;
      if (std::abs(value_of(scalar_c<double>(q))) < 1e-12) return true;
    }
    return false;
  };
  if (!degenerate_along(d)) return d;
  DualScalar c = scalar_c<DualScalar>(p);
  Eigen::VectorXd grad = c.grad(chart().dim());
  double norm = grad.norm();
  if (norm < 1e-12)
    throw ExtrapolationFailure(
        "cannot extrapolate: the pairing gt(V,V) is stationary at " +
        point_str(p));
  Eigen::VectorXd alt = grad / norm;
  if (degenerate_along(alt))
    throw ExtrapolationFailure(
        "cannot extrapolate: degenerate along every sampling line at " +
        point_str(p));
  return alt;
}

template <class T>
void DecomposeCore::eval_g(const Point& p, SquareMat<T>& out) const {
  const int n = chart().dim();
  double c = value_of(scalar_c<double>(p));
  if (std::abs(c) >= eps_h_) {
    direct(p, out);
    return;
  }
  // Quadratic extrapolation to s=0 of each entry along a transversal line.
  // The line direction is frozen at the base point: dual gradients of an
  // extrapolated entry are gradients under that convention, exact off the
  // band and consistent with it in the limit.
  Eigen::VectorXd d = sample_direction(p);
  const Eigen::Matrix<double, 3, 6>& L = fit_matrix();
  std::vector<SquareMat<T>> samples;
  samples.reserve(6);
  for (double s : kSigma) {
    Point q = p + (s * 8.0 * eps_h_) * d;
    SquareMat<T> m(n);
    direct(q, m);
    samples.push_back(std::move(m));
  }
  if (out.n() != n) out = SquareMat<T>(n);
  double worst_residual = 0.0;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Eigen::Matrix<double, 6, 1> vals;
      for (int k = 0; k < 6; ++k) {
        double v = value_of(samples[k].at(i, j));
        if (!std::isfinite(v))
          throw ExtrapolationFailure("non-finite extrapolation sample at " +
                                     point_str(p));
        vals[k] = v;
        scale = std::max(scale, std::abs(v));
      }
      Eigen::Vector3d coef = L * vals;
      for (int k = 0; k < 6; ++k) {
        double fitted =
            coef[0] + coef[1] * kSigma[k] + coef[2] * kSigma[k] * kSigma[k];
        worst_residual = std::max(worst_residual, std::abs(vals[k] - fitted));
      }
      T entry(0.0);
      for (int k = 0; k < 6; ++k)
        entry = entry + L(0, k) * samples[k].at(i, j);
      out.at(i, j) = entry;
      out.at(j, i) = entry;
    }
  }
  if (worst_residual > 1e-6 * scale)
    throw ExtrapolationFailure(
        "quadratic fit residual " + std::to_string(worst_residual) +
        " exceeds tolerance at " + point_str(p));
}

class DecomposedMetricField final : public MetricField {
public:
  explicit DecomposedMetricField(std::shared_ptr<const DecomposeCore> core)
      : core_(std::move(core)) {}
  const Chart& chart() const override { return core_->chart(); }
  void eval(const Point& p, SquareMat<double>& out) const override {
    core_->eval_g(p, out);
  }
  void eval(const Point& p, SquareMat<DualScalar>& out) const override {
    core_->eval_g(p, out);
  }

private:
  std::shared_ptr<const DecomposeCore> core_;
};

class DecomposedScalarField final : public ScalarField {
public:
  explicit DecomposedScalarField(std::shared_ptr<const DecomposeCore> core)
      : core_(std::move(core)) {}
  void eval(const Point& p, double& out) const override {
    out = core_->scalar_c<double>(p) + 1.0;
  }
  void eval(const Point& p, DualScalar& out) const override {
    out = core_->scalar_c<DualScalar>(p) + 1.0;
  }

private:
  std::shared_ptr<const DecomposeCore> core_;
};

}  // namespace

void validate_triple(const Triple& t, const std::vector<Point>& samples,
                     double tol, double zero_eig) {
  if (!t.g || !t.V || !t.f) throw ConfigError("triple has missing fields");
  if (t.V->dim() != t.g->chart().dim())
    throw ConfigError("triple V dimension does not match chart");
  for (const Point& p : samples) {
    SignatureReport sig = signature_at(*t.g, p, zero_eig);
    if (!sig.lorentzian())
      throw AnalysisError("triple g is not Lorentzian at " + point_str(p));
    Eigen::VectorXd v = t.V->values(p);
    if (v.lpNorm<Eigen::Infinity>() == 0.0)
      throw AnalysisError("triple V vanishes at " + point_str(p));
    double c = v.dot(evaluate_metric(*t.g, p) * v);
    if (std::abs(c + 1.0) > tol)
      throw NormalizationError("triple violates g(V,V) = -1 at " +
                               point_str(p) + " (got " + std::to_string(c) +
                               ")");
  }
}

std::shared_ptr<const MetricField> transform(const Triple& t, double tol) {
  if (!t.g || !t.V || !t.f) throw ConfigError("triple has missing fields");
  if (t.V->dim() != t.g->chart().dim())
    throw ConfigError("triple V dimension does not match chart");
  return std::make_shared<TransformedMetricField>(t, tol);
}

Eigen::VectorXd normalize_against(const MetricField& g, const VectorField& w,
                                  const Point& p) {
  Eigen::VectorXd v = w.values(p);
  double c = v.dot(evaluate_metric(g, p) * v);
  if (!(c < 0.0)) throw NotTimelike("vector is not timelike at " + point_str(p));
  return v / std::sqrt(-c);
}

PointDecomposition decompose_point(const MetricField& gt,
                                   const VectorField& V, const Point& p,
                                   double eps_h) {
  if (V.dim() != gt.chart().dim())
    throw ConfigError("V dimension does not match chart");
  Eigen::VectorXd v = V.values(p);
  if (v.lpNorm<Eigen::Infinity>() == 0.0)
    throw AnalysisError("V vanishes at " + point_str(p));
  Eigen::MatrixXd G = evaluate_metric(gt, p);
  double c = v.dot(G * v);
  if (std::abs(c) < eps_h)
    throw NearHypersurface("decompose_point inside the near-H band at " +
                           point_str(p));
  Eigen::VectorXd u = -(G * v) / c;
  PointDecomposition out;
  out.f = 1.0 + c;
  out.g = G - out.f * u * u.transpose();
  return out;
}

Triple decompose_field(std::shared_ptr<const MetricField> gt,
                       std::shared_ptr<const VectorField> V,
                       const std::vector<Point>& samples, double eps_h) {
  if (!gt || !V) throw ConfigError("decompose_field needs gt and V");
  if (V->dim() != gt->chart().dim())
    throw ConfigError("V dimension does not match chart");

  // sector preconditions at the samples
  for (const Point& p : samples) {
    Eigen::VectorXd v = V->values(p);
    if (v.lpNorm<Eigen::Infinity>() == 0.0)
      throw AnalysisError("V vanishes at " + point_str(p));
    double c = v.dot(evaluate_metric(*gt, p) * v);
    SignatureReport sig = signature_at(*gt, p, kZeroEigTol);
    if (sig.lorentzian() && !(c < 0.0))
      throw NotTimelikeInLorentzSector(
          "V is not timelike in the Lorentzian sector at " + point_str(p));
  }

  auto core = std::make_shared<DecomposeCore>(gt, V, eps_h);
  Triple t;
  t.g = std::make_shared<DecomposedMetricField>(core);
  t.V = V;
  t.f = std::make_shared<DecomposedScalarField>(core);

  std::vector<Point> off_band;
  for (const Point& p : samples) {
    if (std::abs(t.f->value(p) - 1.0) >= eps_h) off_band.push_back(p);
  }
  validate_triple(t, off_band);
  return t;
}

double rescaling_image(double f_value, double phi) {
  if (phi == 0.0) throw ZeroScale("rescaling factor must be nonzero");
  return 1.0 + phi * phi * (f_value - 1.0);
}

EquivalenceVerdict triples_equivalent(const Triple& t1, const Triple& t2,
                                      const std::vector<Point>& samples,
                                      double tol) {
  auto m1 = transform(t1);
  auto m2 = transform(t2);
  if (m1->dim() != m2->dim())
    throw ConfigError("triples live on charts of different dimension");
  EquivalenceVerdict v;
  for (const Point& p : samples) {
    Eigen::MatrixXd a = evaluate_metric(*m1, p);
    Eigen::MatrixXd b = evaluate_metric(*m2, p);
    double dev = (a - b).cwiseAbs().maxCoeff();
    if (dev > v.max_deviation) {
      v.max_deviation = dev;
      v.witness_point = p;
    }
  }
  v.equivalent = v.max_deviation <= tol;
  if (v.equivalent) v.witness_point.reset();
  return v;
}

}  // namespace sigflip
