#pragma once

#include "pdest/core.hpp"

#include <cstddef>
#include <vector>

namespace pdest {

class GridMismatch : public Error
{
public:
  GridMismatch() : Error("scalar fields do not share grid geometry") {}
};

/// Geometry of a regular grid of square cells. Values live at cell centers:
/// node (i, j) sits at origin + ((i + 1/2) cell, (j + 1/2) cell), with i
/// running along the birth axis and j along the death axis.
struct GridShape
{
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  /// nodes x nodes grid covering [0, L]^2.
  static GridShape covering(double L, std::size_t nodes);

  Point2 node(std::size_t i, std::size_t j) const
  {
    return {origin_x + (static_cast<double>(i) + 0.5) * cell,
            origin_y + (static_cast<double>(j) + 0.5) * cell};
  }
  std::size_t size() const { return nx * ny; }

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Grid samples of a function on the plane, row-major (row j, column i).
class ScalarField
{
public:
  explicit ScalarField(GridShape shape, double fill = 0.0);
  ScalarField(GridShape shape, std::vector<double> values);

  template <typename F>
  static ScalarField sample(GridShape shape, F&& f)
  {
    ScalarField out(shape);
    for (std::size_t j = 0; j < shape.ny; ++j)
      for (std::size_t i = 0; i < shape.nx; ++i)
        out.at(i, j) = f(shape.node(i, j));
    return out;
  }

  const GridShape& shape() const { return shape_; }
  double& at(std::size_t i, std::size_t j) { return values_[j * shape_.nx + i]; }
  double at(std::size_t i, std::size_t j) const
  {
    return values_[j * shape_.nx + i];
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// cell^2 times the sum of all values.
  double integral() const;
  double max_abs() const;

  void require_same_geometry(const ScalarField& other) const
  {
    if (!(shape_ == other.shape_))
      throw GridMismatch();
  }

private:
  GridShape shape_;
  std::vector<double> values_;
};

} // namespace pdest
