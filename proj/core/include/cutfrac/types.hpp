#pragma once

#include <Eigen/Dense>
#include <functional>

namespace cutfrac {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;

using ScalarFn = std::function<double(const Vec2&)>;
using VecFn = std::function<Vec2(const Vec2&)>;
using MatFn = std::function<Mat2(const Vec2&)>;

struct BBox {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

} // namespace cutfrac
