#include "sigflip/fields.hpp"

#include "sigflip/errors.hpp"

namespace sigflip {

ExpressionVectorField::ExpressionVectorField(std::vector<Expression> comps)
    : comps_(std::move(comps)) {
  if (comps_.empty()) throw ConfigError("vector field needs components");
  for (const auto& c : comps_) {
    if (c.dim() != static_cast<int>(comps_.size()))
      throw ConfigError(
          "vector component arity does not match component count");
  }
}

void ExpressionVectorField::eval(const Point& p,
                                 std::vector<double>& out) const {
  out.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].value(p);
}

void ExpressionVectorField::eval(const Point& p,
                                 std::vector<DualScalar>& out) const {
  out.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].dual(p);
}

ExpressionMetricField::ExpressionMetricField(
    Chart chart, std::vector<std::vector<Expression>> rows)
    : chart_(std::move(chart)), rows_(std::move(rows)) {
  const int n = chart_.dim();
  if (static_cast<int>(rows_.size()) != n)
    throw ConfigError("metric needs one row per coordinate");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows_[i].size()) != i + 1)
      throw ConfigError("metric rows must form a lower triangle");
    for (const auto& e : rows_[i]) {
      if (e.dim() != n)
        throw ConfigError("metric entry arity does not match chart dimension");
    }
  }
}

template <class T>
void ExpressionMetricField::eval_impl(const Point& p, SquareMat<T>& out) const {
  const int n = chart_.dim();
  if (out.n() != n) out = SquareMat<T>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      T v;
      if constexpr (std::is_same_v<T, double>) v = rows_[i][j].value(p);
      else v = rows_[i][j].dual(p);
      out.at(i, j) = v;
      out.at(j, i) = v;
    }
  }
}

void ExpressionMetricField::eval(const Point& p, SquareMat<double>& out) const {
  eval_impl(p, out);
}
void ExpressionMetricField::eval(const Point& p,
                                 SquareMat<DualScalar>& out) const {
  eval_impl(p, out);
}

template <class T>
void NormalizedVectorField::eval_impl(const Point& p,
                                      std::vector<T>& out) const {
  SquareMat<T> g(g_->dim());
  g_->eval(p, g);
  w_->eval(p, out);
  T c = metric_pairing(g, out, out);
  if (value_of(c) >= 0.0)
    throw NotTimelike("cannot normalize: vector is not timelike here");
  if constexpr (std::is_same_v<T, double>) {
    double scale = 1.0 / std::sqrt(-c);
    for (auto& comp : out) comp *= scale;
  } else {
    DualScalar scale = 1.0 / sqrt(-c);
    for (auto& comp : out) comp = comp * scale;
  }
}

void NormalizedVectorField::eval(const Point& p,
                                 std::vector<double>& out) const {
  eval_impl(p, out);
}
void NormalizedVectorField::eval(const Point& p,
                                 std::vector<DualScalar>& out) const {
  eval_impl(p, out);
}

}  // namespace sigflip
