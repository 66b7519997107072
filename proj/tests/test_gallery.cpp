#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sigflip/gallery.hpp"
#include "sigflip/rng.hpp"

using namespace sigflip;

TEST_SUITE("gallery") {

TEST_CASE("the catalogue") {
  const auto& names = gallery_names();
  for (const char* want : {"kriele2d", "transverse2d", "transverse3d"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  CHECK_THROWS_AS(gallery_get("nope"), UnknownGalleryItem);
}

TEST_CASE("closed-form derived metric agrees with transform(triple)") {
  for (const auto& name : gallery_names()) {
    const GalleryItem& item = gallery_get(name);
    auto gt = transform(item.triple);
    Rng rng(1234);
    for (int i = 0; i < 100; ++i) {
      Point p = rng.point_in(item.chart);
      Eigen::MatrixXd a = evaluate_metric(*gt, p);
      Eigen::MatrixXd b = evaluate_metric(*item.gt_metric, p);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("triples validate on their charts") {
  for (const auto& name : gallery_names()) {
    const GalleryItem& item = gallery_get(name);
    Rng rng(99);
    std::vector<Point> samples;
    for (int i = 0; i < 50; ++i) samples.push_back(rng.point_in(item.chart));
    CHECK_NOTHROW(validate_triple(item.triple, samples));
  }
}

TEST_CASE("stated truths hold on the located hypersurface") {
  for (const auto& name : gallery_names()) {
    const GalleryItem& item = gallery_get(name);
    std::vector<int> grid(item.chart.dim(), 9);
    LocateResult loc = locate_hypersurface(*item.gt_metric, grid);
    CHECK(!loc.points.empty());
    for (const auto& h : loc.points) {
      CHECK(h.radical_class == item.truth.radical_class);
      CHECK(h.induced_signature.is(item.truth.induced_signature[0],
                                   item.truth.induced_signature[1],
                                   item.truth.induced_signature[2]));
    }
  }
}

TEST_CASE("kriele2d specifics") {
  const GalleryItem& item = gallery_get("kriele2d");
  CHECK(item.truth.radical_class == RadicalClass::Tangent);
  REQUIRE(item.truth.f_expression.has_value());
  CHECK(*item.truth.f_expression == "1+x");
  CHECK(item.f_source == "1+x");
  // H is the x = 0 line
  std::vector<int> grid(2, 9);
  for (const auto& h : locate_hypersurface(*item.gt_metric, grid).points)
    CHECK(std::abs(h.q[1]) <= 1e-10);
}

TEST_CASE("transverse items change type across t = 0") {
  for (const char* name : {"transverse2d", "transverse3d"}) {
    const GalleryItem& item = gallery_get(name);
    CHECK(item.truth.radical_class == RadicalClass::Transverse);
    const int n = item.chart.dim();
    Point lorentz = Point::Constant(n, 0.3);
    lorentz[0] = -0.5;
    Point riem = lorentz;
    riem[0] = 0.5;
    CHECK(signature_at(*item.gt_metric, lorentz).lorentzian());
    CHECK(signature_at(*item.gt_metric, riem).riemannian());
  }
}

}  // TEST_SUITE
