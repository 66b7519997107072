#pragma once

#include <memory>
#include <vector>

#include "sigflip/chart.hpp"
#include "sigflip/dual.hpp"
#include "sigflip/expr.hpp"
#include "sigflip/linalg.hpp"

namespace sigflip {

// All fields evaluate through two channels: plain values and dual numbers
// (value + full gradient). The channel is selected by the output parameter's
// type so numeric kernels can be written once, templated on the scalar.
// Implementations are immutable after construction and safe to evaluate
// concurrently.

class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual void eval(const Point& p, double& out) const = 0;
  virtual void eval(const Point& p, DualScalar& out) const = 0;

  double value(const Point& p) const {
    double v;
    eval(p, v);
    return v;
  }
  DualScalar dual(const Point& p) const {
    DualScalar d;
    eval(p, d);
    return d;
  }
};

class VectorField {
public:
  virtual ~VectorField() = default;
  virtual int dim() const = 0;
  virtual void eval(const Point& p, std::vector<double>& out) const = 0;
  virtual void eval(const Point& p, std::vector<DualScalar>& out) const = 0;

  Eigen::VectorXd values(const Point& p) const {
    std::vector<double> c;
    eval(p, c);
    return Eigen::Map<const Eigen::VectorXd>(c.data(),
                                             static_cast<long>(c.size()));
  }
};

class MetricField {
public:
  virtual ~MetricField() = default;
  virtual const Chart& chart() const = 0;
  virtual void eval(const Point& p, SquareMat<double>& out) const = 0;
  virtual void eval(const Point& p, SquareMat<DualScalar>& out) const = 0;

  int dim() const { return chart().dim(); }
};

// --- expression-backed implementations ---

class ExpressionScalarField final : public ScalarField {
public:
  explicit ExpressionScalarField(Expression e) : expr_(std::move(e)) {}
  void eval(const Point& p, double& out) const override {
    out = expr_.value(p);
  }
  void eval(const Point& p, DualScalar& out) const override {
    out = expr_.dual(p);
  }
  const Expression& expression() const { return expr_; }

private:
  Expression expr_;
};

class ExpressionVectorField final : public VectorField {
public:
  explicit ExpressionVectorField(std::vector<Expression> comps);
  int dim() const override { return static_cast<int>(comps_.size()); }
  void eval(const Point& p, std::vector<double>& out) const override;
  void eval(const Point& p, std::vector<DualScalar>& out) const override;
  const std::vector<Expression>& components() const { return comps_; }

private:
  std::vector<Expression> comps_;
};

// Symmetric by storage: only the lower triangle is kept; rows[i] has i+1
// entries.
class ExpressionMetricField final : public MetricField {
public:
  ExpressionMetricField(Chart chart, std::vector<std::vector<Expression>> rows);
  const Chart& chart() const override { return chart_; }
  void eval(const Point& p, SquareMat<double>& out) const override;
  void eval(const Point& p, SquareMat<DualScalar>& out) const override;

private:
  template <class T>
  void eval_impl(const Point& p, SquareMat<T>& out) const;

  Chart chart_;
  std::vector<std::vector<Expression>> rows_;
};

// --- simple combinators ---

class ConstantVectorField final : public VectorField {
public:
  explicit ConstantVectorField(std::vector<double> comps)
      : comps_(std::move(comps)) {}
  int dim() const override { return static_cast<int>(comps_.size()); }
  void eval(const Point&, std::vector<double>& out) const override {
    out = comps_;
  }
  void eval(const Point&, std::vector<DualScalar>& out) const override {
    out.clear();
    out.reserve(comps_.size());
    for (double c : comps_) out.emplace_back(c);
  }

private:
  std::vector<double> comps_;
};

class ScaledVectorField final : public VectorField {
public:
  ScaledVectorField(std::shared_ptr<const VectorField> inner, double factor)
      : inner_(std::move(inner)), factor_(factor) {}
  int dim() const override { return inner_->dim(); }
  void eval(const Point& p, std::vector<double>& out) const override {
    inner_->eval(p, out);
    for (auto& c : out) c *= factor_;
  }
  void eval(const Point& p, std::vector<DualScalar>& out) const override {
    inner_->eval(p, out);
    for (auto& c : out) c = c * factor_;
  }

private:
  std::shared_ptr<const VectorField> inner_;
  double factor_;
};

// W / sqrt(-g(W,W)); throws NotTimelike where g(W,W) >= 0.
class NormalizedVectorField final : public VectorField {
public:
  NormalizedVectorField(std::shared_ptr<const MetricField> g,
                        std::shared_ptr<const VectorField> w)
      : g_(std::move(g)), w_(std::move(w)) {}
  int dim() const override { return w_->dim(); }
  void eval(const Point& p, std::vector<double>& out) const override;
  void eval(const Point& p, std::vector<DualScalar>& out) const override;

private:
  template <class T>
  void eval_impl(const Point& p, std::vector<T>& out) const;

  std::shared_ptr<const MetricField> g_;
  std::shared_ptr<const VectorField> w_;
};

class ConstantScalarField final : public ScalarField {
public:
  explicit ConstantScalarField(double v) : v_(v) {}
  void eval(const Point&, double& out) const override { out = v_; }
  void eval(const Point&, DualScalar& out) const override {
    out = DualScalar(v_);
  }

private:
  double v_;
};

// --- shared numeric kernels ---

// g(v, w) for a metric matrix already evaluated in channel T.
template <class T>
T metric_pairing(const SquareMat<T>& g, const std::vector<T>& v,
                 const std::vector<T>& w) {
  const int n = g.n();
  T acc(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc = acc + g.at(i, j) * v[i] * w[j];
  return acc;
}

template <class T>
std::vector<T> metric_lower(const SquareMat<T>& g, const std::vector<T>& v) {
  const int n = g.n();
  std::vector<T> out(static_cast<std::size_t>(n), T(0.0));
  for (int i = 0; i < n; ++i) {
    T acc(0.0);
    for (int j = 0; j < n; ++j) acc = acc + g.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace sigflip
