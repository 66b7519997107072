#include "sigflip/chart.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "sigflip/errors.hpp"
#include "sigflip/expr.hpp"

namespace sigflip {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

Chart::Chart(std::vector<std::string> coords,
             std::vector<std::array<double, 2>> domain)
    : coords_(std::move(coords)), domain_(std::move(domain)) {
  if (coords_.size() < 2)
    throw ConfigError("chart needs at least 2 coordinates");
  if (domain_.size() != coords_.size())
    throw ConfigError("domain must give one interval per coordinate");
  std::set<std::string> seen;
  for (const auto& name : coords_) {
    if (!valid_identifier(name))
      throw ConfigError("invalid coordinate name '" + name + "'");
    if (is_reserved_name(name))
      throw ConfigError("coordinate name '" + name +
                        "' shadows a builtin function or constant");
    if (!seen.insert(name).second)
      throw ConfigError("duplicate coordinate name '" + name + "'");
  }
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const auto& [lo, hi] = domain_[i];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw ConfigError("domain interval for '" + coords_[i] +
                        "' must be finite with lo < hi");
  }
}

bool Chart::contains(const Point& p, double slack) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < domain_[i][0] - slack || p[i] > domain_[i][1] + slack)
      return false;
  }
  return true;
}

}  // namespace sigflip
