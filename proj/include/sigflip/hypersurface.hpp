#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sigflip/transform.hpp"

namespace sigflip {

enum class RadicalClass { Transverse, Tangent };

const char* to_string(RadicalClass c);

struct Tolerances {
  double zero_eig = 1e-8;  // relative zero band for eigenvalue signs
  double h_point = 1e-8;   // on-H checks: |det| bound, |f-1| cross-check
  double classify = 1e-6;  // Transverse/Tangent threshold, biconditional
};

struct HPoint {
  Point q;
  std::vector<int> grid_index;  // owning node (edge roots: the lower corner)
  int axis = -1;                // bisected axis; -1 for a node lying on H
  double det_value = 0.0;
  Covector det_gradient;
  Eigen::VectorXd radical_basis;  // unit, first nonzero component positive
  RadicalClass radical_class = RadicalClass::Transverse;
  SignatureReport induced_signature;  // on T_qH, dimension n-1
  // f at q when located in triple mode (the cross-check tests |f - 1|);
  // unset in metric-only mode
  std::optional<double> f_value;
};

struct DegenerateEdge {
  std::vector<int> grid_index;  // lower corner
  int axis = 0;
};

struct LocateResult {
  std::vector<HPoint> points;                  // sorted by (grid_index, axis)
  std::vector<DegenerateEdge> degenerate_edges;
};

// All grid nodes in lexicographic index order (last axis fastest). Node k on
// axis a sits at lo_a + k * (hi_a - lo_a)/(grid_a - 1). When `indices` is
// non-null it receives the multi-index of each node.
std::vector<Point> grid_points(const Chart& chart, const std::vector<int>& grid,
                               std::vector<std::vector<int>>* indices = nullptr);

// Scans the node grid of det(gt): nodes with |det| <= 1e-12 are H points
// directly; edges with strictly opposite determinant signs are bisected
// (<= 60 iterations, coordinate tolerance 1e-12); edges degenerate at both
// ends are flagged, not fatal. Each located point is enriched via radical_at,
// classify_radical and induced_metric_on_H; in triple mode (f given) the
// location is cross-checked against |f - 1| <= tol.h_point.
LocateResult locate_hypersurface(const MetricField& gt,
                                 const std::vector<int>& grid,
                                 const Tolerances& tol = {},
                                 const ScalarField* f_crosscheck = nullptr,
                                 int threads = 1);

// Unit kernel vector of the metric matrix at q (relative zero band tol);
// kernel dimension must be exactly 1.
Eigen::VectorXd radical_at(const MetricField& gt, const Point& q,
                           double tol = kZeroEigTol);

// Transverse iff |d(det)_q(radical)| > tol * ||d(det)_q||. With f supplied,
// cross-checks that the sign test on (df)(radical) agrees, and throws
// AnalysisError if the two classifications disagree.
RadicalClass classify_radical(const MetricField& gt, const Point& q,
                              double tol = 1e-6,
                              const ScalarField* f = nullptr);

// Signature of gt restricted to T_qH, realized as the coordinate-Euclidean
// complement of the d(det) gradient vector.
SignatureReport induced_metric_on_H(const MetricField& gt, const Point& q,
                                    double zero_eig = kZeroEigTol);

struct PositivityResult {
  bool pass = false;
  double min_ratio = std::numeric_limits<double>::infinity();
  int used = 0;
  int rejected = 0;
};

// Draws `trials` seeded random vectors, removes their projection onto the
// radical, rejects residuals with norm < 1e-6, and requires gt(x,x) > 0 for
// every survivor. min_ratio tracks gt(x,x)/|x|^2.
PositivityResult positivity_check(const MetricField& gt, const Point& q,
                                  int trials, std::uint64_t rng_seed,
                                  double radical_tol = kZeroEigTol);

struct BiconditionalEntry {
  Point q;
  double det_grad_norm = 0.0;
  double f_grad_norm = 0.0;
  bool agree = false;
};

struct BiconditionalReport {
  bool pass = true;
  // 0 when all points agree; otherwise the largest norm participating in a
  // disagreement (the side that should have vanished with its partner)
  double max_deviation = 0.0;
  std::vector<BiconditionalEntry> entries;
};

// At each point computes a = ||d(det gt)|| and b = ||df||; the point agrees
// when (a > tol) == (b > tol). Verdict is the conjunction.
BiconditionalReport verify_biconditional(const Triple& t,
                                         const std::vector<Point>& points,
                                         double tol = 1e-6);
BiconditionalReport verify_biconditional(const Triple& t,
                                         const std::vector<HPoint>& hpoints,
                                         double tol = 1e-6);

struct FactorizationReport {
  bool pass = true;
  double max_rel_deviation = 0.0;
  std::optional<Point> worst_point;
  int n_samples = 0;
};

// Checks det(gt) = (1-f) * g00 * det(h) with h_ij = g_ij - g_i0 g_j0 / g00
// at each sample, relative to max(1, |det gt|). Requires the triple in
// co-moving form: V components 1..n-1 vanish (within 1e-12) at the samples.
FactorizationReport verify_det_factorization(const Triple& t,
                                             const std::vector<Point>& samples,
                                             double tol = 1e-10);

}  // namespace sigflip
