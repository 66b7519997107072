#include "sigflip/hypersurface.hpp"

#include <cmath>
#include <sstream>

#include "sigflip/errors.hpp"
#include "sigflip/parallel.hpp"
#include "sigflip/rng.hpp"

namespace sigflip {

namespace {

constexpr double kNodeZero = 1e-12;      // |det| at which a node counts as on H
constexpr double kBisectCoordTol = 1e-12;
constexpr int kBisectMaxIter = 60;
constexpr double kGradFloor = 1e-10;     // below this, not transverse type-changing

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

struct GridShape {
  std::vector<int> sizes;
  std::vector<double> lo, step;

  int dim() const { return static_cast<int>(sizes.size()); }

  double coord(int axis, int k) const { return lo[axis] + k * step[axis]; }

  Point point(const std::vector<int>& idx) const {
    Point p(dim());
    for (int a = 0; a < dim(); ++a) p[a] = coord(a, idx[a]);
    return p;
  }

  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < dim(); ++a)
      f = f * static_cast<std::size_t>(sizes[a]) +
          static_cast<std::size_t>(idx[a]);
    return f;
  }

  std::vector<int> unflatten(std::size_t f) const {
    std::vector<int> idx(dim());
    for (int a = dim() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(f % static_cast<std::size_t>(sizes[a]));
      f /= static_cast<std::size_t>(sizes[a]);
    }
    return idx;
  }

  std::size_t total() const {
    std::size_t t = 1;
    for (int s : sizes) t *= static_cast<std::size_t>(s);
    return t;
  }
};

GridShape make_grid(const Chart& chart, const std::vector<int>& grid) {
  if (static_cast<int>(grid.size()) != chart.dim())
    throw ConfigError("grid must give one resolution per axis");
  GridShape shape;
  shape.sizes = grid;
  for (int a = 0; a < chart.dim(); ++a) {
    if (grid[a] < 2) throw ConfigError("grid resolutions must be >= 2");
    const auto& [lo, hi] = chart.interval(a);
    shape.lo.push_back(lo);
    shape.step.push_back((hi - lo) / (grid[a] - 1));
  }
  return shape;
}

}  // namespace

std::vector<Point> grid_points(const Chart& chart, const std::vector<int>& grid,
                               std::vector<std::vector<int>>* indices) {
  GridShape shape = make_grid(chart, grid);
  std::vector<Point> pts;
  pts.reserve(shape.total());
  if (indices) {
    indices->clear();
    indices->reserve(shape.total());
  }
  for (std::size_t i = 0; i < shape.total(); ++i) {
    std::vector<int> idx = shape.unflatten(i);
    pts.push_back(shape.point(idx));
    if (indices) indices->push_back(std::move(idx));
  }
  return pts;
}

const char* to_string(RadicalClass c) {
  return c == RadicalClass::Transverse ? "Transverse" : "Tangent";
}

Eigen::VectorXd radical_at(const MetricField& gt, const Point& q, double tol) {
  Eigen::MatrixXd g = evaluate_metric(gt, q);
  EigenDecomposition eig = symmetric_eigen(g);
  const int n = static_cast<int>(eig.values.size());
  double band = tol * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  int kernel_lo = -1, kernel_hi = -1;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eig.values[i]) <= band) {
      if (kernel_lo < 0) kernel_lo = i;
      kernel_hi = i;
    }
  }
  int kernel_dim = kernel_lo < 0 ? 0 : kernel_hi - kernel_lo + 1;
  if (kernel_dim != 1)
    throw KernelDimensionError("radical dimension is " +
                               std::to_string(kernel_dim) + " at " +
                               point_str(q) + " (expected 1)");
  Eigen::VectorXd r = eig.vectors.col(kernel_lo);
  for (int i = 0; i < n; ++i) {
    if (r[i] != 0.0) {
      if (r[i] < 0.0) r = -r;
      break;
    }
  }
  return r;
}

RadicalClass classify_radical(const MetricField& gt, const Point& q,
                              double tol, const ScalarField* f) {
  DualScalar det = metric_determinant(gt, q);
  double grad_norm = det.g.norm();
  if (grad_norm <= kGradFloor)
    throw NotTransverseTypeChanging(
        "d(det) vanishes at " + point_str(q) +
        "; the metric is not transverse type-changing there");
  Eigen::VectorXd r = radical_at(gt, q);
  double pairing_det = std::abs(det.g.dot(r));
  RadicalClass cls = pairing_det > tol * grad_norm ? RadicalClass::Transverse
                                                   : RadicalClass::Tangent;
  if (f != nullptr) {
    DualScalar fd = f->dual(q);
    double f_norm = fd.g.size() ? fd.g.norm() : 0.0;
    double pairing_f = fd.g.size() ? std::abs(fd.g.dot(r)) : 0.0;
    // same relative sign test on (df)(radical); scale-free agreement check
    RadicalClass via_f = pairing_f > tol * std::max(f_norm, kGradFloor)
                             ? RadicalClass::Transverse
                             : RadicalClass::Tangent;
    if (via_f != cls)
      throw AnalysisError(
          std::string("radical classification disagrees between d(det) [") +
          to_string(cls) + "] and df [" + to_string(via_f) + "] at " +
          point_str(q));
  }
  return cls;
}

SignatureReport induced_metric_on_H(const MetricField& gt, const Point& q,
                                    double zero_eig) {
  DualScalar det = metric_determinant(gt, q);
  if (det.g.norm() <= kGradFloor)
    throw NotTransverseTypeChanging(
        "d(det) vanishes at " + point_str(q) +
        "; tangent space of H is undefined there");
  Eigen::MatrixXd basis = householder_complement(det.g);
  Eigen::MatrixXd g = evaluate_metric(gt, q);
  Eigen::MatrixXd restricted = basis.transpose() * g * basis;
  // symmetry by storage for the eigensolver
  restricted = 0.5 * (restricted + restricted.transpose()).eval();
  return signature_of(restricted, zero_eig);
}

PositivityResult positivity_check(const MetricField& gt, const Point& q,
                                  int trials, std::uint64_t rng_seed,
                                  double radical_tol) {
  Eigen::VectorXd r = radical_at(gt, q, radical_tol);
  Eigen::MatrixXd g = evaluate_metric(gt, q);
  const int n = static_cast<int>(r.size());
  Rng rng(rng_seed);
  PositivityResult out;
  out.pass = true;
  for (int k = 0; k < trials; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    x -= x.dot(r) * r;
    double norm = x.norm();
    if (norm < 1e-6) {
      ++out.rejected;
      continue;
    }
    ++out.used;
    double quad = x.dot(g * x);
    out.min_ratio = std::min(out.min_ratio, quad / (norm * norm));
    if (!(quad > 0.0)) out.pass = false;
  }
  return out;
}

BiconditionalReport verify_biconditional(const Triple& t,
                                         const std::vector<Point>& points,
                                         double tol) {
  auto gt = transform(t);
  BiconditionalReport report;
  for (const Point& q : points) {
    BiconditionalEntry e;
    e.q = q;
    e.det_grad_norm = metric_determinant(*gt, q).g.norm();
    DualScalar fd = t.f->dual(q);
    e.f_grad_norm = fd.g.size() ? fd.g.norm() : 0.0;
    e.agree = (e.det_grad_norm > tol) == (e.f_grad_norm > tol);
    if (!e.agree) {
      report.pass = false;
      report.max_deviation = std::max(
          report.max_deviation, std::max(e.det_grad_norm, e.f_grad_norm));
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

BiconditionalReport verify_biconditional(const Triple& t,
                                         const std::vector<HPoint>& hpoints,
                                         double tol) {
  std::vector<Point> pts;
  pts.reserve(hpoints.size());
  for (const HPoint& h : hpoints) pts.push_back(h.q);
  return verify_biconditional(t, pts, tol);
}

FactorizationReport verify_det_factorization(const Triple& t,
                                             const std::vector<Point>& samples,
                                             double tol) {
  auto gt = transform(t);
  const int n = t.chart().dim();
  FactorizationReport report;
  report.n_samples = static_cast<int>(samples.size());
  for (const Point& p : samples) {
    Eigen::VectorXd v = t.V->values(p);
    for (int i = 1; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12)
        throw NotComoving("triple is not co-moving at " + point_str(p) +
                          " (component " + std::to_string(i) + " = " +
                          std::to_string(v[i]) + ")");
    }
    double lhs = metric_determinant_value(*gt, p);
    Eigen::MatrixXd g = evaluate_metric(*t.g, p);
    double f = t.f->value(p);
    double g00 = g(0, 0);
    if (g00 == 0.0)
      throw AnalysisError("g00 vanishes at " + point_str(p) +
                          "; block factorization undefined");
    double rhs;
    if (n == 1) {
      rhs = (1.0 - f) * g00;
    } else {
      SquareMat<double> h(n - 1);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
          h.at(i - 1, j - 1) = g(i, j) - g(i, 0) * g(j, 0) / g00;
      rhs = (1.0 - f) * g00 * determinant(h);
    }
    double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    if (rel > report.max_rel_deviation) {
      report.max_rel_deviation = rel;
      report.worst_point = p;
    }
  }
  report.pass = report.max_rel_deviation <= tol;
  return report;
}

LocateResult locate_hypersurface(const MetricField& gt,
                                 const std::vector<int>& grid,
                                 const Tolerances& tol,
                                 const ScalarField* f_crosscheck,
                                 int threads) {
  const Chart& chart = gt.chart();
  GridShape shape = make_grid(chart, grid);
  const int n = shape.dim();
  const std::size_t total = shape.total();

  std::vector<double> det(total);
  parallel_for(total, threads, [&](std::size_t i) {
    det[i] = metric_determinant_value(gt, shape.point(shape.unflatten(i)));
  });

  struct Task {
    std::vector<int> idx;
    int axis;  // -1: node on H; else edge along axis with a sign change
  };
  std::vector<Task> tasks;
  LocateResult result;

  for (std::size_t i = 0; i < total; ++i) {
    std::vector<int> idx = shape.unflatten(i);
    double d0 = det[i];
    if (std::abs(d0) <= kNodeZero) tasks.push_back({idx, -1});
    for (int a = 0; a < n; ++a) {
      if (idx[a] + 1 >= shape.sizes[a]) continue;
      std::vector<int> nb = idx;
      ++nb[a];
      double d1 = det[shape.flatten(nb)];
      bool z0 = std::abs(d0) <= kNodeZero;
      bool z1 = std::abs(d1) <= kNodeZero;
      if (z0 && z1) {
        result.degenerate_edges.push_back({idx, a});
        continue;
      }
      if (z0 || z1) continue;  // the node pass owns boundary-touching edges
      if ((d0 < 0.0) != (d1 < 0.0)) tasks.push_back({idx, a});
    }
  }

  std::vector<HPoint> points(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    HPoint h;
    h.grid_index = task.idx;
    h.axis = task.axis;
    if (task.axis < 0) {
      h.q = shape.point(task.idx);
    } else {
      const int a = task.axis;
      double lo = shape.coord(a, task.idx[a]);
      double hi = shape.coord(a, task.idx[a] + 1);
      Point p = shape.point(task.idx);
      p[a] = lo;
      double dlo = det[shape.flatten(task.idx)];
      double root = 0.5 * (lo + hi);
      for (int it = 0; it < kBisectMaxIter; ++it) {
        root = 0.5 * (lo + hi);
        p[a] = root;
        double dm = metric_determinant_value(gt, p);
        if (dm == 0.0) break;
        if ((dm < 0.0) == (dlo < 0.0)) {
          lo = root;
          dlo = dm;
        } else {
          hi = root;
        }
        if (hi - lo <= kBisectCoordTol) {
          root = 0.5 * (lo + hi);
          break;
        }
      }
      p[a] = root;
      h.q = p;
    }

    DualScalar d = metric_determinant(gt, h.q);
    h.det_value = d.v;
    h.det_gradient = d.g;
    if (std::abs(h.det_value) > 1e-10)
      throw AnalysisError("bisection failed to pin |det| <= 1e-10 at " +
                          point_str(h.q));
    h.radical_basis = radical_at(gt, h.q, tol.zero_eig);
    Eigen::MatrixXd g = evaluate_metric(gt, h.q);
    if ((g * h.radical_basis).norm() > 1e-8)
      throw AnalysisError("radical residual exceeds 1e-8 at " +
                          point_str(h.q));
    h.radical_class = classify_radical(gt, h.q, tol.classify, f_crosscheck);
    h.induced_signature = induced_metric_on_H(gt, h.q, tol.zero_eig);
    if (f_crosscheck != nullptr) {
      double f = f_crosscheck->value(h.q);
      if (std::abs(f - 1.0) > tol.h_point)
        throw AnalysisError("located point fails the |f-1| cross-check at " +
                            point_str(h.q));
      h.f_value = f;
    }
    points[ti] = std::move(h);
  });

  result.points = std::move(points);
  return result;
}

}  // namespace sigflip
