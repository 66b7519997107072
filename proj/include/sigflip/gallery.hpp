#pragma once

#include <array>
#include <optional>
#include <string>

#include "sigflip/hypersurface.hpp"

namespace sigflip {

struct GalleryTruth {
  std::string h_description;
  RadicalClass radical_class;
  std::array<int, 3> induced_signature;  // (n_neg, n_zero, n_pos) on T_qH
  std::optional<std::string> f_expression;
};

// A built-in example: the derived metric both as a closed-form expression
// field (gt_metric) and as transform(triple); the two agree within 1e-12.
struct GalleryItem {
  std::string name;
  Chart chart;
  std::vector<std::vector<std::string>> g_rows;  // lower-triangle sources
  std::vector<std::string> v_components;
  std::string f_source;
  std::vector<std::vector<std::string>> gt_rows;
  Triple triple;
  std::shared_ptr<const MetricField> gt_metric;
  GalleryTruth truth;
};

const GalleryItem& gallery_get(const std::string& name);
const std::vector<std::string>& gallery_names();

}  // namespace sigflip
