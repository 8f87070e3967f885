#pragma once

#include "pdest/core.hpp"
#include "pdest/field.hpp"
#include "pdest/kde.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pdest {

enum class BettiMode
{
  raw,
  normalized,
};

/// Query region B = [0, x1) x (x2, L]. The Betti number at scale x is the
/// diagonal case x1 = x2 = x.
struct BettiQuery
{
  double x1 = 0.0;
  double x2 = 0.0;

  static BettiQuery at(double x) { return {x, x}; }
  static BettiQuery persistent(double x1, double x2);

  bool contains(Point2 p) const { return p.birth < x1 && p.death > x2; }
};

/// Empirical (persistent) Betti number of the averaged measure. In normalized
/// mode each diagram's points carry weight 1 / N(D_i).
double betti_empirical(const DiagramSample& sample, const BettiQuery& query,
                       BettiMode mode = BettiMode::raw,
                       EmptyDiagramPolicy policy = EmptyDiagramPolicy::strict);

/// Node-center rectangle rule integral of the field over B.
double betti_from_field(const ScalarField& field, const BettiQuery& query);

struct BettiCurve
{
  std::vector<double> x;
  std::vector<double> mean;
  /// Per-x empirical quantiles across diagrams; empty for field curves.
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Betti curve of a sample on `resolution` equispaced scales of [0, L], with
/// type-7 pointwise quantile bands at (q_lo, q_hi).
BettiCurve betti_curve(const DiagramSample& sample, BettiMode mode,
                       std::size_t resolution, double q_lo = 0.05,
                       double q_hi = 0.95,
                       EmptyDiagramPolicy policy = EmptyDiagramPolicy::strict);

/// Betti curve of an estimated intensity or density field.
BettiCurve betti_curve(const ScalarField& field, double L,
                       std::size_t resolution);

/// Linear-interpolation (type 7) quantile of unsorted data.
double quantile_type7(std::vector<double> values, double p);

struct SurfaceSpec
{
  double weight_q = 1.0;
  KernelSpec kernel;
  GridShape grid;
};

/// Persistence surface of the averaged measure with weight
/// f(w) = diag_distance(w)^q.
ScalarField persistence_surface(const DiagramSample& sample,
                                const SurfaceSpec& spec);

/// cell^2 sum_nodes f(node) field(node).
double linear_functional(const ScalarField& field, const PlaneFunction& f);

} // namespace pdest
