#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sigflip/geometry.hpp"
#include "sigflip/rng.hpp"

using namespace sigflip;
using testutil::make_metric;

namespace {

Eigen::Vector2d pt(double t, double x) { return Eigen::Vector2d(t, x); }

const std::vector<std::string> kTX = {"t", "x"};

// x dt^2 + dx^2: degenerate exactly on x = 0
std::shared_ptr<const MetricField> kriele_like() {
  return make_metric(kTX, {{"x"}, {"0", "1"}});
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("determinant values and exact differentials") {
  auto m = kriele_like();
  DualScalar d = metric_determinant(*m, pt(5, 0.25));
  CHECK(d.v == 0.25);
  CHECK(d.g[0] == 0.0);
  CHECK(d.g[1] == 1.0);
  CHECK(metric_determinant_value(*m, pt(5, 0.25)) == 0.25);

  auto n = make_metric(kTX, {{"t"}, {"0", "1"}});
  DualScalar dn = metric_determinant(*n, pt(0, 3));
  CHECK(dn.v == 0.0);
  CHECK(dn.g[0] == 1.0);
  CHECK(dn.g[1] == 0.0);

  auto mink = make_metric(kTX, {{"-1"}, {"0", "1"}});
  DualScalar dm = metric_determinant(*mink, pt(0.3, -0.4));
  CHECK(dm.v == -1.0);
  CHECK(dm.g.norm() == 0.0);

  // diag(t, 1, 1+x): det = t (1+x), grad = (1+x, t, 0)
  auto m3 = make_metric({"t", "x", "y"},
                        {{"t"}, {"0", "1"}, {"0", "0", "1+x"}}, -5, 5);
  Eigen::Vector3d q(2, 3, 0);
  DualScalar d3 = metric_determinant(*m3, q);
  CHECK(d3.v == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(d3.g[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(d3.g[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d3.g[2] == 0.0);
}

TEST_CASE("LU path: n = 5, row swaps and a rank n-1 point") {
  const std::vector<std::string> c5 = {"t", "x", "y", "z", "w"};
  const double h = 1e-6;

  // coupled first row: at t = 0 the leading entry dies but the matrix stays
  // regular, forcing a pivot swap
  auto m5 = make_metric(c5, {{"t"},
                             {"0.1", "2"},
                             {"0", "0.2", "3"},
                             {"0", "0", "0", "4"},
                             {"0", "0", "0", "0.3", "5"}},
                        -2, 2);
  for (double t0 : {-1.5, 0.0}) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
    q[0] = t0;
    Eigen::MatrixXd G = evaluate_metric(*m5, q);
    DualScalar d = metric_determinant(*m5, q);
    CHECK(d.v == doctest::Approx(G.determinant()).epsilon(1e-12));

    // finite difference of the only varying coordinate
    Eigen::VectorXd up = q, dn = q;
    up[0] += h;
    dn[0] -= h;
    double fd = (metric_determinant_value(*m5, up) -
                 metric_determinant_value(*m5, dn)) /
                (2 * h);
    CHECK(d.g[0] == doctest::Approx(fd).epsilon(1e-6));
    CHECK(d.g[4] == 0.0);
  }

  // clean first row: at t = 0 the whole column vanishes, rank n-1, and the
  // no-pivot branch must still produce the exact zero and its differential
  auto m5s = make_metric(c5, {{"t"},
                              {"0", "2"},
                              {"0", "0.2", "3"},
                              {"0", "0", "0", "4"},
                              {"0", "0", "0", "0.3", "5"}},
                         -2, 2);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
  DualScalar dz = metric_determinant(*m5s, q);
  CHECK(dz.v == 0.0);
  Eigen::VectorXd up = q, dn = q;
  up[0] += h;
  dn[0] -= h;
  double fd = (metric_determinant_value(*m5s, up) -
               metric_determinant_value(*m5s, dn)) /
              (2 * h);
  CHECK(fd != 0.0);
  CHECK(dz.g[0] == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("plain square-matrix determinants match Eigen") {
  Rng rng(7);
  for (int n = 1; n <= 6; ++n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-2, 2);
    double got = determinant(from_eigen(a));
    double want = a.determinant();
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
  // exactly singular
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(5, 5);
  s.diagonal() << 1, 2, 0, 3, 4;
  CHECK(determinant(from_eigen(s)) == 0.0);
}

TEST_CASE("signature trichotomy of x dt^2 + dx^2") {
  auto m = kriele_like();
  CHECK(signature_at(*m, pt(0, 0.5)).is(0, 0, 2));
  CHECK(signature_at(*m, pt(0, -1)).is(1, 0, 1));
  CHECK(signature_at(*m, pt(0, 0)).is(0, 1, 1));
  CHECK(signature_at(*m, pt(0, -1)).lorentzian());
  CHECK(signature_at(*m, pt(0, 0.5)).riemannian());
}

TEST_CASE("classify_spectrum zero band is relative") {
  Eigen::Vector2d ev(-1e-9, 1.0);
  CHECK(classify_spectrum(ev, 1e-8).is(0, 1, 1));
  CHECK(classify_spectrum(ev, 1e-12).is(1, 0, 1));
  // band scales with the largest magnitude
  Eigen::Vector2d big(-5e-7, 100.0);
  CHECK(classify_spectrum(big, 1e-8).is(0, 1, 1));
  CHECK_THROWS_AS(classify_spectrum(ev, 0.0), ConfigError);
  CHECK_THROWS_AS(classify_spectrum(ev, -1.0), ConfigError);
}

TEST_CASE("flat lowers indices") {
  auto mink = make_metric(kTX, {{"-1"}, {"0", "1"}});
  Covector w = flat(*mink, pt(0, 0), Eigen::Vector2d(1, 0));
  CHECK(w[0] == -1.0);
  CHECK(w[1] == 0.0);

  // on the degenerate locus the radical maps to the zero covector
  auto m = kriele_like();
  Covector z = flat(*m, pt(0.7, 0), Eigen::Vector2d(1, 0));
  CHECK(z.norm() == 0.0);
}

TEST_CASE("symmetric_eigen: deterministic signs, ascending order") {
  Eigen::Matrix2d a;
  a << 3, 0, 0, 1;
  EigenDecomposition e = symmetric_eigen(a);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(3.0));
  // largest-|component| entry of each column is positive
  CHECK(e.vectors(1, 0) == doctest::Approx(1.0));
  CHECK(e.vectors(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("householder_complement spans the orthogonal hyperplane") {
  Eigen::Vector2d u(0, 1);
  Eigen::MatrixXd b = householder_complement(u);
  REQUIRE(b.cols() == 1);
  CHECK(std::abs(b.col(0).dot(u)) <= 1e-14);
  CHECK(b.col(0).norm() == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(11);
  for (int n = 2; n <= 5; ++n) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.uniform(-1, 1);
    if (w.norm() < 0.1) w[0] += 1.0;
    Eigen::MatrixXd c = householder_complement(w);
    REQUIRE(c.cols() == n - 1);
    CHECK((c.transpose() * c - Eigen::MatrixXd::Identity(n - 1, n - 1))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    CHECK((c.transpose() * w).cwiseAbs().maxCoeff() <= 1e-12 * w.norm());
  }
}

TEST_CASE("orthonormal_frame on constant Lorentzian metrics") {
  auto mink = make_metric(kTX, {{"-1"}, {"0", "1"}});
  Frame fr = orthonormal_frame(*mink, pt(0, 0), Eigen::Vector2d(2, 0));
  CHECK((fr.timelike - Eigen::Vector2d(1, 0)).norm() <= 1e-14);
  REQUIRE(fr.spacelike.size() == 1);
  CHECK(std::abs(std::abs(fr.spacelike[0][1]) - 1.0) <= 1e-14);

  // off-diagonal Lorentzian: verify the Gram relations directly
  auto g = make_metric(kTX, {{"-1"}, {"0.3", "1"}});
  Eigen::MatrixXd G = evaluate_metric(*g, pt(0, 0));
  Frame fo = orthonormal_frame(*g, pt(0, 0), Eigen::Vector2d(1, 0));
  CHECK(std::abs(fo.timelike.dot(G * fo.timelike) + 1.0) <= 1e-10);
  CHECK(std::abs(fo.timelike.dot(G * fo.spacelike[0])) <= 1e-10);
  CHECK(std::abs(fo.spacelike[0].dot(G * fo.spacelike[0]) - 1.0) <= 1e-10);
}

TEST_CASE("orthonormal_frame rejects bad inputs") {
  auto m = kriele_like();
  CHECK_THROWS_AS(orthonormal_frame(*m, pt(0, 0), Eigen::Vector2d(1, 0)),
                  DegenerateMetric);
  auto mink = make_metric(kTX, {{"-1"}, {"0", "1"}});
  CHECK_THROWS_AS(orthonormal_frame(*mink, pt(0, 0), Eigen::Vector2d(0, 1)),
                  NotTimelike);
}

TEST_CASE("frame Gram identities on random co-moving Lorentzian metrics") {
  Rng rng(99);
  const std::vector<std::string> c3 = {"t", "x", "y"};
  for (int iter = 0; iter < 25; ++iter) {
    // g00 = -u < 0, spatial block A^T A + 0.3 I (SPD); Lorentzian by Schur
    double u = 0.5 + 1.5 * rng.uniform01();
    Eigen::Matrix2d a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = rng.uniform(-1, 1);
    Eigen::Matrix2d spd = a.transpose() * a + 0.3 * Eigen::Matrix2d::Identity();

    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    auto g = make_metric(c3, {{num(-u)},
                              {"0", num(spd(0, 0))},
                              {"0", num(spd(1, 0)), num(spd(1, 1))}});
    Eigen::Vector3d p(rng.uniform(-1, 1), rng.uniform(-1, 1),
                      rng.uniform(-1, 1));
    Eigen::Vector3d v(1.0 / std::sqrt(u), 0, 0);

    Frame fr = orthonormal_frame(*g, p, v);
    Eigen::MatrixXd G = evaluate_metric(*g, p);
    CHECK(std::abs(fr.timelike.dot(G * fr.timelike) + 1.0) <= 1e-10);
    for (std::size_t i = 0; i < fr.spacelike.size(); ++i) {
      CHECK(std::abs(fr.timelike.dot(G * fr.spacelike[i])) <= 1e-10);
      for (std::size_t j = 0; j < fr.spacelike.size(); ++j) {
        double want = i == j ? 1.0 : 0.0;
        CHECK(std::abs(fr.spacelike[i].dot(G * fr.spacelike[j]) - want) <=
              1e-10);
      }
    }
  }
}

TEST_CASE("metric evaluation rejects non-finite entries") {
  auto m = make_metric(kTX, {{"1/t"}, {"0", "1"}});
  CHECK_THROWS_AS(evaluate_metric(*m, pt(0, 0)), DomainError);
}

TEST_CASE("chart construction rules") {
  using sigflip::Chart;
  CHECK_THROWS_AS(Chart({"t"}, {{-1, 1}}), ConfigError);  // needs dim >= 2
  CHECK_THROWS_AS(Chart({"t", "t"}, {{-1, 1}, {-1, 1}}), ConfigError);
  CHECK_THROWS_AS(Chart({"t", "pi"}, {{-1, 1}, {-1, 1}}), ConfigError);
  CHECK_THROWS_AS(Chart({"t", "sin"}, {{-1, 1}, {-1, 1}}), ConfigError);
  CHECK_THROWS_AS(Chart({"t", "2x"}, {{-1, 1}, {-1, 1}}), ConfigError);
  CHECK_THROWS_AS(Chart({"t", "x"}, {{-1, 1}, {1, 1}}), ConfigError);
  Chart ok({"t", "x"}, {{-1, 1}, {0, 2}});
  CHECK(ok.dim() == 2);
  CHECK(ok.contains(pt(0, 1), 0.0));
  CHECK(!ok.contains(pt(0, 3), 0.0));
}

}  // TEST_SUITE
