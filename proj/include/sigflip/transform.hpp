#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sigflip/geometry.hpp"

namespace sigflip {

// The (g, V, f) datum: a Lorentzian metric, a timelike unit field
// (representative of the unordered pair {V, -V}), and a scalar. The derived
// metric is gt = g + f * (flat V) (x) (flat V).
struct Triple {
  std::shared_ptr<const MetricField> g;
  std::shared_ptr<const VectorField> V;
  std::shared_ptr<const ScalarField> f;

  const Chart& chart() const { return g->chart(); }
};

constexpr double kNormalizationTol = 1e-9;
constexpr double kEpsH = 1e-6;

// Checks the triple invariants at the given samples: g Lorentzian
// (signature (1,0,n-1)), g(V,V) = -1 within tol, V nonzero.
void validate_triple(const Triple& t, const std::vector<Point>& samples,
                     double tol = kNormalizationTol,
                     double zero_eig = kZeroEigTol);

// The derived metric as a lazily evaluated field. Every evaluation
// re-checks |g(V,V) + 1| <= tol at that point and throws NormalizationError
// beyond it, so an invalid triple cannot silently produce values.
std::shared_ptr<const MetricField> transform(
    const Triple& t, double tol = kNormalizationTol);

// V = W / sqrt(-g(W,W)) at p; throws NotTimelike.
Eigen::VectorXd normalize_against(const MetricField& g, const VectorField& w,
                                  const Point& p);

struct PointDecomposition {
  double f;
  Eigen::MatrixXd g;
};

// Closed-form pointwise inverse of the prescription: c = gt(V,V),
// u = -gt(V,.)/c, f = 1+c, g = gt - f*u(x)u. Requires |c| >= eps_h; inside
// that band throws NearHypersurface (use decompose_field instead, whose g
// extrapolates across the band).
PointDecomposition decompose_point(const MetricField& gt,
                                   const VectorField& V, const Point& p,
                                   double eps_h = kEpsH);

// Field-level inverse. f is exactly p -> 1 + gt(V,V)(p) everywhere; g uses
// the closed form where |c| >= eps_h and a quadratic extrapolation along the
// line p + s*V(p), s in {+-2e, +-4e, +-8e}, inside the band. The returned
// triple passes validate_triple on every sample with |c| >= eps_h.
Triple decompose_field(std::shared_ptr<const MetricField> gt,
                       std::shared_ptr<const VectorField> V,
                       const std::vector<Point>& samples,
                       double eps_h = kEpsH);

// f -> 1 + phi^2 (f - 1); phi == 0 is ZeroScale.
double rescaling_image(double f_value, double phi);

struct EquivalenceVerdict {
  bool equivalent = false;
  double max_deviation = 0.0;
  std::optional<Point> witness_point;  // a maximizing sample when not equivalent
};

// Entrywise comparison of the two derived metrics over the samples.
EquivalenceVerdict triples_equivalent(const Triple& t1, const Triple& t2,
                                      const std::vector<Point>& samples,
                                      double tol);

}  // namespace sigflip
