#include "sigflip/gallery.hpp"

#include <memory>

#include "sigflip/errors.hpp"

namespace sigflip {

namespace {

std::shared_ptr<const MetricField> metric_from_sources(
    const Chart& chart, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Expression>> parsed;
  for (const auto& row : rows) {
    std::vector<Expression> r;
    for (const auto& src : row)
      r.push_back(Expression::parse(src, chart.coords()));
    parsed.push_back(std::move(r));
  }
  return std::make_shared<ExpressionMetricField>(chart, std::move(parsed));
}

GalleryItem make_item(std::string name, std::vector<std::string> coords,
                      std::vector<std::vector<std::string>> g_rows,
                      std::vector<std::string> v_components,
                      std::string f_source,
                      std::vector<std::vector<std::string>> gt_rows,
                      GalleryTruth truth) {
  const int n = static_cast<int>(coords.size());
  Chart chart(std::move(coords),
              std::vector<std::array<double, 2>>(
                  static_cast<std::size_t>(n), {-1.0, 1.0}));

  std::vector<Expression> v_parsed;
  for (const auto& src : v_components)
    v_parsed.push_back(Expression::parse(src, chart.coords()));

  Triple triple;
  triple.g = metric_from_sources(chart, g_rows);
  triple.V = std::make_shared<ExpressionVectorField>(std::move(v_parsed));
  triple.f = std::make_shared<ExpressionScalarField>(
      Expression::parse(f_source, chart.coords()));

  GalleryItem item{std::move(name),
                   chart,
                   std::move(g_rows),
                   std::move(v_components),
                   std::move(f_source),
                   gt_rows,
                   std::move(triple),
                   metric_from_sources(chart, gt_rows),
                   std::move(truth)};
  return item;
}

std::vector<GalleryItem> build_items() {
  std::vector<GalleryItem> items;
  items.push_back(make_item(
      "kriele2d", {"t", "x"}, {{"-1"}, {"0", "1"}}, {"1", "0"}, "1+x",
      {{"x"}, {"0", "1"}},
      GalleryTruth{"x = 0", RadicalClass::Tangent, {0, 1, 0}, "1+x"}));
  items.push_back(make_item(
      "transverse2d", {"t", "x"}, {{"-1"}, {"0", "1"}}, {"1", "0"}, "1+t",
      {{"t"}, {"0", "1"}},
      GalleryTruth{"t = 0", RadicalClass::Transverse, {0, 0, 1}, "1+t"}));
  items.push_back(make_item(
      "transverse3d", {"t", "x", "y"}, {{"-1"}, {"0", "1"}, {"0", "0", "1"}},
      {"1", "0", "0"}, "1+t", {{"t"}, {"0", "1"}, {"0", "0", "1"}},
      GalleryTruth{"t = 0", RadicalClass::Transverse, {0, 0, 2}, "1+t"}));
  return items;
}

const std::vector<GalleryItem>& items() {
  static const std::vector<GalleryItem> all = build_items();
  return all;
}

}  // namespace

const GalleryItem& gallery_get(const std::string& name) {
  for (const GalleryItem& item : items())
    if (item.name == name) return item;
  throw UnknownGalleryItem("unknown gallery item '" + name + "' (have: " +
                           [] {
                             std::string s;
                             for (const auto& n : gallery_names())
                               s += (s.empty() ? "" : ", ") + n;
                             return s;
                           }() +
                           ")");
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const GalleryItem& item : items()) out.push_back(item.name);
    return out;
  }();
  return names;
}

}  // namespace sigflip
