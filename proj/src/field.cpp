#include "pdest/field.hpp"

#include <cmath>

namespace pdest {

GridShape GridShape::covering(double L, std::size_t nodes)
{
  if (nodes == 0 || !(L > 0.0))
    throw Error("grid needs at least one node and L > 0");
  return {0.0, 0.0, L / static_cast<double>(nodes), nodes, nodes};
}

ScalarField::ScalarField(GridShape shape, double fill)
  : shape_(shape), values_(shape.size(), fill)
{
  if (!(shape.cell > 0.0))
    throw Error("grid cell must be positive");
}

ScalarField::ScalarField(GridShape shape, std::vector<double> values)
  : shape_(shape), values_(std::move(values))
{
  if (!(shape.cell > 0.0))
    throw Error("grid cell must be positive");
  if (values_.size() != shape_.size())
    throw Error("field value count does not match grid shape");
  for (double v : values_)
    if (!std::isfinite(v))
      throw Error("field values must be finite");
}

double ScalarField::integral() const
{
  double s = 0.0;
  for (double v : values_)
    s += v;
  return s * shape_.cell * shape_.cell;
}

double ScalarField::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

} // namespace pdest
