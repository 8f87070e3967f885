#pragma once

#include "pdest/core.hpp"

#include <cstddef>
#include <vector>

namespace pdest {

class EmptyCloud : public Error
{
public:
  EmptyCloud() : Error("point cloud is empty") {}
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class TooLarge : public Error
{
public:
  using Error::Error;
};

/// N points of equal ambient dimension (2 or 3), stored row-major.
class PointCloud
{
public:
  PointCloud(std::vector<std::vector<double>> points);
  PointCloud(std::size_t ambient_dim, std::vector<double> flat_coords);

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t ambient_dim() const { return dim_; }
  double coord(std::size_t i, std::size_t k) const
  {
    return coords_[i * dim_ + k];
  }
  const std::vector<double>& flat() const { return coords_; }

  double distance(std::size_t i, std::size_t j) const;

private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

struct FiltrationSpec
{
  int max_dim = 1;          ///< 0 or 1
  double max_edge = 0.0;    ///< edge-length cap; <= 0 means "use L"
  bool cap_essential = false; ///< replace infinite deaths by L instead of dropping
};

/// Vietoris-Rips persistence in dimensions 0..max_dim.
///
/// H0 comes from a union-find sweep over the sorted edges. H1 is computed as
/// persistent cohomology: edge coboundaries are reduced over Z/2 in reverse
/// filtration order with implicit (never materialized) triangle columns and
/// with spanning-tree edges cleared. Simplices are ordered by (value,
/// dimension, vertex tuple), so ties are deterministic.
///
/// Memory is O(N^2) for the distance and edge-rank tables plus one entry per
/// finite H1 pivot; 1500 planar points with an uncapped filtration run in a
/// few seconds. Reported values are exact pairwise distances.
PersistenceDiagram rips_persistence(const PointCloud& cloud,
                                    const FiltrationSpec& spec,
                                    const OmegaBox& box);

/// Reference implementation: enumerates every simplex up to dimension
/// max_dim + 1 and runs the textbook column reduction of the full boundary
/// matrix. Limited to 8 points.
PersistenceDiagram rips_persistence_oracle(const PointCloud& cloud,
                                           const FiltrationSpec& spec,
                                           const OmegaBox& box);

DiagramSample batch_rips(const std::vector<PointCloud>& clouds,
                         const FiltrationSpec& spec,
                         const OmegaBox& box);

} // namespace pdest
