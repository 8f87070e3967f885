#pragma once

#include "pdest/core.hpp"
#include "pdest/field.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace pdest {

enum class KernelFamily
{
  epanechnikov2d, ///< (2/pi) (1 - |x|^2) on the unit disk
  quartic2d,      ///< (3/pi) (1 - |x|^2)^2 on the unit disk
};

KernelFamily parse_kernel_family(const std::string& name);

/// Radially symmetric, compactly supported, unit-mass kernel with bandwidth.
/// Construction checks the normalization numerically (512^2 midpoint rule,
/// tolerance 1e-4).
class KernelSpec
{
public:
  KernelSpec(KernelFamily family, double bandwidth);

  KernelFamily family() const { return family_; }
  double bandwidth() const { return h_; }

  /// K(x), without the bandwidth scaling.
  double operator()(double x, double y) const;

  /// K_h(x) = K(x / h) / h^2.
  double scaled(double x, double y) const;

private:
  KernelFamily family_;
  double h_;
};

double kernel_eval(const KernelSpec& spec, Point2 x);

enum class EmptyDiagramPolicy
{
  strict, ///< reject a sample containing an empty diagram
  skip,   ///< drop empty diagrams and report how many were dropped
};

class EmptyDiagramInSample : public Error
{
public:
  explicit EmptyDiagramInSample(std::size_t index);
  std::size_t index() const { return index_; }

private:
  std::size_t index_;
};

/// Kernel estimate of the persistence intensity:
///   (1/n) sum_i sum_{r in D_i} K_h(r - w)
/// at every grid node. Empty diagrams count toward n and contribute nothing.
ScalarField estimate_intensity(const DiagramSample& sample,
                               const KernelSpec& kernel,
                               const GridShape& grid);

/// Kernel estimate of the persistence density: as above with each point of
/// D_i weighted by 1 / N(D_i).
ScalarField estimate_density(const DiagramSample& sample,
                             const KernelSpec& kernel, const GridShape& grid,
                             EmptyDiagramPolicy policy = EmptyDiagramPolicy::strict,
                             std::size_t* dropped = nullptr);

struct WeightedPoint
{
  Point2 at;
  double weight = 1.0;
};

/// sum_k weight_k K_h(at_k - w) at every node. Points are visited in
/// (death, birth) order so the per-node summation order is fixed.
ScalarField smooth_atoms(std::vector<WeightedPoint> atoms,
                         const KernelSpec& kernel, const GridShape& grid);

using PlaneFunction = std::function<double(Point2)>;

/// (K_h * f)(w) at every node, by polar Gauss-Legendre quadrature over the
/// kernel support. This is the expectation of the estimators when f is the
/// true intensity (or density).
ScalarField smooth_with_kernel(const PlaneFunction& f, const KernelSpec& kernel,
                               const GridShape& grid);

enum class ErrorDomain
{
  omega_2h,  ///< nodes of Omega at diagonal distance >= 2h
  full_grid, ///< every node
};

struct SupError
{
  double value = 0.0;
  std::size_t nodes = 0; ///< qualifying nodes
  bool empty_domain = true;
};

/// max over qualifying nodes of l_w^q |estimate(w) - truth(w)| with
/// l_w = diag_distance(w) - h. q = 0 gives the plain sup-norm.
SupError weighted_sup_error(const ScalarField& estimate,
                            const PlaneFunction& truth, double q, double h,
                            ErrorDomain domain = ErrorDomain::omega_2h);

/// Same metric against a reference field on the same grid.
SupError weighted_sup_error(const ScalarField& estimate,
                            const ScalarField& truth, double q, double h,
                            ErrorDomain domain = ErrorDomain::omega_2h);

} // namespace pdest
