#include "sigflip/config.hpp"

#include <fstream>

#include "sigflip/errors.hpp"

namespace sigflip {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string("config is missing '") + key + "'");
  return *it;
}

std::vector<std::vector<std::string>> parse_lower_triangle(const json& j,
                                                           const char* key,
                                                           int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ConfigError(std::string("'") + key + "' must be an array of " +
                      std::to_string(n) + " rows (lower triangle)");
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != i + 1)
      throw ConfigError(std::string("'") + key + "' row " + std::to_string(i) +
                        " must have " + std::to_string(i + 1) +
                        " entries (lower triangle)");
    std::vector<std::string> r;
    for (const json& cell : row) {
      if (!cell.is_string())
        throw ConfigError(std::string("'") + key +
                          "' entries must be expression strings");
      r.push_back(cell.get<std::string>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void check_expressions(const std::vector<std::vector<std::string>>& rows,
                       const std::vector<std::string>& coords) {
  for (const auto& row : rows)
    for (const auto& src : row) Expression::parse(src, coords);
}

}  // namespace

Chart Config::make_chart() const { return Chart(coords, domain); }

std::shared_ptr<const MetricField> Config::build_metric() const {
  if (mode != Mode::Metric)
    throw ConfigError("config is not in metric mode");
  Chart chart = make_chart();
  std::vector<std::vector<Expression>> rows;
  for (const auto& row : metric_rows) {
    std::vector<Expression> r;
    for (const auto& src : row) r.push_back(Expression::parse(src, coords));
    rows.push_back(std::move(r));
  }
  return std::make_shared<ExpressionMetricField>(std::move(chart),
                                                 std::move(rows));
}

Triple Config::build_triple() const {
  if (mode != Mode::Triple)
    throw ConfigError("config is not in triple mode");
  Chart chart = make_chart();
  std::vector<std::vector<Expression>> rows;
  for (const auto& row : g_rows) {
    std::vector<Expression> r;
    for (const auto& src : row) r.push_back(Expression::parse(src, coords));
    rows.push_back(std::move(r));
  }
  std::vector<Expression> v;
  for (const auto& src : v_components)
    v.push_back(Expression::parse(src, coords));
  Triple t;
  t.g = std::make_shared<ExpressionMetricField>(std::move(chart),
                                                std::move(rows));
  t.V = std::make_shared<ExpressionVectorField>(std::move(v));
  t.f = std::make_shared<ExpressionScalarField>(
      Expression::parse(f_source, coords));
  return t;
}

std::shared_ptr<const MetricField> Config::analysis_metric() const {
  return mode == Mode::Triple ? transform(build_triple()) : build_metric();
}

Config config_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  Config c;
  c.source = source;

  std::string mode = require(j, "mode").get<std::string>();
  if (mode == "triple") c.mode = Mode::Triple;
  else if (mode == "metric") c.mode = Mode::Metric;
  else throw ConfigError("mode must be 'triple' or 'metric'");

  c.dimension = require(j, "dimension").get<int>();
  if (c.dimension < 2) throw ConfigError("dimension must be >= 2");

  for (const json& name : require(j, "coords")) {
    if (!name.is_string()) throw ConfigError("coords must be strings");
    c.coords.push_back(name.get<std::string>());
  }
  if (static_cast<int>(c.coords.size()) != c.dimension)
    throw ConfigError("coords length must equal dimension");

  const json& dom = require(j, "domain");
  if (!dom.is_array() || static_cast<int>(dom.size()) != c.dimension)
    throw ConfigError("domain must have one [lo, hi] pair per coordinate");
  for (const json& pair : dom) {
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("each domain entry must be [lo, hi]");
    c.domain.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }

  const json& grid = require(j, "grid");
  if (!grid.is_array() || static_cast<int>(grid.size()) != c.dimension)
    throw ConfigError("grid must have one resolution per coordinate");
  for (const json& g : grid) {
    int v = g.get<int>();
    if (v < 2) throw ConfigError("grid resolutions must be >= 2");
    c.grid.push_back(v);
  }

  // chart validation (names, reserved words, intervals)
  [[maybe_unused]] Chart chart(c.coords, c.domain);

  if (c.mode == Mode::Metric) {
    c.metric_rows = parse_lower_triangle(require(j, "metric"), "metric",
                                         c.dimension);
    check_expressions(c.metric_rows, c.coords);
  } else {
    c.g_rows = parse_lower_triangle(require(j, "g"), "g", c.dimension);
    check_expressions(c.g_rows, c.coords);
    const json& v = require(j, "V");
    if (!v.is_array() || static_cast<int>(v.size()) != c.dimension)
      throw ConfigError("'V' must have one component per coordinate");
    for (const json& comp : v) {
      if (!comp.is_string())
        throw ConfigError("'V' components must be expression strings");
      c.v_components.push_back(comp.get<std::string>());
    }
    check_expressions({c.v_components}, c.coords);
    const json& f = require(j, "f");
    if (!f.is_string()) throw ConfigError("'f' must be an expression string");
    c.f_source = f.get<std::string>();
    Expression::parse(c.f_source, c.coords);
  }

  if (auto it = j.find("tolerances"); it != j.end()) {
    const json& t = *it;
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    if (auto z = t.find("zero_eig"); z != t.end())
      c.tol.zero_eig = z->get<double>();
    if (auto h = t.find("h_point"); h != t.end())
      c.tol.h_point = h->get<double>();
    if (auto cl = t.find("classify"); cl != t.end())
      c.tol.classify = cl->get<double>();
    if (!(c.tol.zero_eig > 0.0) || !(c.tol.h_point > 0.0) ||
        !(c.tol.classify > 0.0))
      throw ConfigError("tolerances must be positive");
  }

  if (auto it = j.find("seed"); it != j.end())
    c.seed = it->get<std::uint64_t>();

  return c;
}

namespace {

Config config_from_gallery(const std::string& name) {
  const GalleryItem& item = gallery_get(name);
  Config c;
  c.mode = Mode::Triple;
  c.dimension = item.chart.dim();
  c.coords = item.chart.coords();
  c.domain = item.chart.domain();
  c.grid.assign(c.coords.size(), 9);
  c.g_rows = item.g_rows;
  c.v_components = item.v_components;
  c.f_source = item.f_source;
  // the item's closed-form derived metric doubles as the metric-mode view
  c.metric_rows = item.gt_rows;
  c.source = "gallery:" + name;
  c.gallery_name = name;
  return c;
}

}  // namespace

Config load_config(const std::string& spec) {
  if (spec.rfind("gallery:", 0) == 0)
    return config_from_gallery(spec.substr(8));
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open config file '" + spec + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config JSON parse failure: " + std::string(e.what()));
  }
  return config_from_json(j, spec);
}

nlohmann::ordered_json config_echo(const Config& c) {
  nlohmann::ordered_json out;
  out["source"] = c.source;
  out["mode"] = c.mode == Mode::Triple ? "triple" : "metric";
  out["dimension"] = c.dimension;
  out["coords"] = c.coords;
  nlohmann::ordered_json dom = nlohmann::ordered_json::array();
  for (const auto& [lo, hi] : c.domain)
    dom.push_back(nlohmann::ordered_json::array({lo, hi}));
  out["domain"] = std::move(dom);
  out["grid"] = c.grid;
  if (c.mode == Mode::Metric) {
    out["metric"] = c.metric_rows;
  } else {
    out["g"] = c.g_rows;
    out["V"] = c.v_components;
    out["f"] = c.f_source;
  }
  out["tolerances"] = {{"zero_eig", c.tol.zero_eig},
                       {"h_point", c.tol.h_point},
                       {"classify", c.tol.classify}};
  out["seed"] = c.seed;
  return out;
}

}  // namespace sigflip
