#pragma once

#include "pdest/core.hpp"
#include "pdest/field.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pdest {

class SolverLimit : public Error
{
public:
  using Error::Error;
};

class InvalidQ : public Error
{
public:
  using Error::Error;
};

class NegativeDensity : public Error
{
public:
  using Error::Error;
};

/// Weighted point mass.
struct Atom
{
  Point2 at;
  double mass = 1.0;
};

/// Index value marking the diagonal as a move endpoint.
inline constexpr long kDiagonal = -1;

/// One leg of a transport plan. A diagonal endpoint sits at the diagonal
/// projection of the other endpoint.
struct TransportMove
{
  long source = kDiagonal; ///< atom index on the source side, or kDiagonal
  long target = kDiagonal; ///< atom index on the target side, or kDiagonal
  Point2 from;
  Point2 to;
  double mass = 0.0;
  double unit_cost = 0.0; ///< |from - to|^q
};

/// Admissible transport between two measures; `cost` is the q-th power cost
/// sum(mass * unit_cost). Zero-cost diagonal-to-diagonal mass is omitted.
struct TransportPlan
{
  std::vector<TransportMove> moves;
  double q = 1.0;
  double cost = 0.0;

  /// Order-independent recomputation of `cost` from the moves.
  double recomputed_cost() const;
};

struct OtResult
{
  double distance = 0.0; ///< OT_q, i.e. cost^(1/q)
  TransportPlan plan;
};

/// Largest |a| + |b| accepted by the exact solver.
inline constexpr std::size_t kSolverLimit = 4000;

/// Exact q-th order optimal transport with diagonal absorption between two
/// finite weighted measures. Solved as a dense transportation problem
/// (each side gains a diagonal node carrying the other side's total mass)
/// by successive shortest paths with Dijkstra and node potentials.
/// q must lie in [1, 16].
OtResult ot_distance(std::span<const Atom> a, std::span<const Atom> b, double q);

/// Same for persistence diagrams (unit masses). Atom indices in the plan are
/// indices into a.pairs() and b.pairs().
OtResult ot_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                     double q);

/// Plan that keeps min(p_a, p_b) in place cell by cell, sends the surplus of
/// p_a to the diagonal projection of the cell center and brings the surplus
/// of p_b from it. Atom indices are linear cell indices.
TransportPlan constructed_transport(const ScalarField& p_a,
                                    const ScalarField& p_b, double q);

/// omega_weighted_volume(q, L) * max |p_a - p_b|: the upper bound on OT_q^q
/// implied by the sup-norm gap between two intensities.
double sup_gap_transport_bound(const ScalarField& p_a, const ScalarField& p_b,
                               double q, double L);

/// One atom per nonzero cell at the cell center, mass value * cell^2.
std::vector<Atom> discretize_field_to_measure(const ScalarField& field);

/// Grid slack used when comparing discretized transport against continuous
/// bounds: 3 * cell * total_mass * L^(q-1).
double grid_tolerance(double cell, double total_mass, double L, double q);

} // namespace pdest
