#pragma once

// Shared construction shorthand for tests: expression-backed fields from
// string sources on a cube chart.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "sigflip/fields.hpp"
#include "sigflip/transform.hpp"

namespace testutil {

inline sigflip::Chart cube_chart(const std::vector<std::string>& coords,
                                 double lo = -1.0, double hi = 1.0) {
  std::vector<std::array<double, 2>> dom(coords.size(), {lo, hi});
  return sigflip::Chart(coords, dom);
}

inline std::shared_ptr<const sigflip::MetricField> make_metric(
    const std::vector<std::string>& coords,
    const std::vector<std::vector<std::string>>& rows, double lo = -1.0,
    double hi = 1.0) {
  std::vector<std::vector<sigflip::Expression>> parsed;
  for (const auto& r : rows) {
    std::vector<sigflip::Expression> pr;
    for (const auto& s : r)
      pr.push_back(sigflip::Expression::parse(s, coords));
    parsed.push_back(std::move(pr));
  }
  return std::make_shared<sigflip::ExpressionMetricField>(
      cube_chart(coords, lo, hi), std::move(parsed));
}

inline std::shared_ptr<const sigflip::VectorField> make_vector(
    const std::vector<std::string>& coords,
    const std::vector<std::string>& comps) {
  std::vector<sigflip::Expression> parsed;
  for (const auto& s : comps)
    parsed.push_back(sigflip::Expression::parse(s, coords));
  return std::make_shared<sigflip::ExpressionVectorField>(std::move(parsed));
}

inline std::shared_ptr<const sigflip::ScalarField> make_scalar(
    const std::vector<std::string>& coords, const std::string& src) {
  return std::make_shared<sigflip::ExpressionScalarField>(
      sigflip::Expression::parse(src, coords));
}

inline sigflip::Triple make_triple(
    const std::vector<std::string>& coords,
    const std::vector<std::vector<std::string>>& g_rows,
    const std::vector<std::string>& v_comps, const std::string& f_src,
    double lo = -1.0, double hi = 1.0) {
  sigflip::Triple t;
  t.g = make_metric(coords, g_rows, lo, hi);
  t.V = make_vector(coords, v_comps);
  t.f = make_scalar(coords, f_src);
  return t;
}

}  // namespace testutil
