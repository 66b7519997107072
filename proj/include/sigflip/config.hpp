#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sigflip/gallery.hpp"

namespace sigflip {

enum class Mode { Triple, Metric };

// A validated run configuration. File configs come from JSON; `gallery:NAME`
// resolves to the named item with the default 9-node grid per axis.
struct Config {
  Mode mode = Mode::Metric;
  int dimension = 0;
  std::vector<std::string> coords;
  std::vector<std::array<double, 2>> domain;
  std::vector<int> grid;

  // mode == Metric
  std::vector<std::vector<std::string>> metric_rows;  // lower triangle

  // mode == Triple
  std::vector<std::vector<std::string>> g_rows;
  std::vector<std::string> v_components;
  std::string f_source;

  Tolerances tol;
  std::uint64_t seed = 42;

  std::string source;  // "gallery:NAME" or the config path, echoed in reports
  std::optional<std::string> gallery_name;

  Chart make_chart() const;
  std::shared_ptr<const MetricField> build_metric() const;       // Metric mode
  Triple build_triple() const;                                   // Triple mode
  // The derived metric to analyze: transform(triple) or the metric itself.
  std::shared_ptr<const MetricField> analysis_metric() const;
};

Config config_from_json(const nlohmann::json& j, const std::string& source);

// spec is either a filesystem path to a JSON config or "gallery:NAME".
Config load_config(const std::string& spec);

nlohmann::ordered_json config_echo(const Config& c);

}  // namespace sigflip
