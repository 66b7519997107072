#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace sigflip {

using Point = Eigen::VectorXd;
using Covector = Eigen::VectorXd;  // components w.r.t. the coordinate basis

inline double pair(const Covector& w, const Eigen::VectorXd& v) {
  return w.dot(v);
}

// Coordinate chart: named coordinates plus a closed box domain. Validation
// lives in the constructor so every chart in the system is well-formed.
class Chart {
public:
  Chart(std::vector<std::string> coords,
        std::vector<std::array<double, 2>> domain);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::array<double, 2>& interval(int axis) const { return domain_[axis]; }
  const std::vector<std::array<double, 2>>& domain() const { return domain_; }

  bool contains(const Point& p, double slack = 0.0) const;

private:
  std::vector<std::string> coords_;
  std::vector<std::array<double, 2>> domain_;
};

}  // namespace sigflip
