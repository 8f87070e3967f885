#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A point of the (birth, death) plane.
struct Point2
{
  double birth = 0.0;
  double death = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// The triangle {0 <= b < d <= L} that holds every persistence diagram.
class OmegaBox
{
public:
  explicit OmegaBox(double side_length);

  double side_length() const { return L_; }

  bool contains(double birth, double death) const
  {
    return birth >= 0.0 && birth < death && death <= L_;
  }
  bool contains(Point2 p) const { return contains(p.birth, p.death); }

  friend bool operator==(const OmegaBox&, const OmegaBox&) = default;

private:
  double L_;
};

struct PersistencePair
{
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;

  Point2 point() const { return {birth, death}; }

  friend bool operator==(const PersistencePair&,
                         const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair&,
                          const PersistencePair&) = default;
};

/// Finite multiset of persistence pairs inside an OmegaBox. Doubles as the
/// counting measure placing unit mass at every pair.
///
/// Pairs with birth == death are discarded at construction; any other pair
/// outside the box raises an Error.
class PersistenceDiagram
{
public:
  explicit PersistenceDiagram(OmegaBox box) : box_(box) {}
  PersistenceDiagram(std::vector<PersistencePair> pairs, OmegaBox box);

  const std::vector<PersistencePair>& pairs() const { return pairs_; }
  const OmegaBox& box() const { return box_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Pairs of one homology dimension only.
  PersistenceDiagram restricted_to(int dim) const;

  /// Multiset union, as used for additivity of linear statistics.
  PersistenceDiagram concatenated(const PersistenceDiagram& other) const;

  /// Pairs in canonical (birth, death, dim) order.
  std::vector<PersistencePair> sorted_pairs() const;

private:
  std::vector<PersistencePair> pairs_;
  OmegaBox box_;
};

/// An ordered collection of n >= 1 diagrams sharing one box.
class DiagramSample
{
public:
  DiagramSample(std::vector<PersistenceDiagram> diagrams, OmegaBox box);

  const std::vector<PersistenceDiagram>& diagrams() const { return diagrams_; }
  const OmegaBox& box() const { return box_; }
  std::size_t size() const { return diagrams_.size(); }
  const PersistenceDiagram& operator[](std::size_t i) const
  {
    return diagrams_[i];
  }

  DiagramSample restricted_to(int dim) const;
  DiagramSample concatenated(const DiagramSample& other) const;

  /// Same sample with empty diagrams removed; `dropped` receives the count.
  /// Throws if nothing remains.
  DiagramSample without_empty(std::size_t* dropped = nullptr) const;

private:
  std::vector<PersistenceDiagram> diagrams_;
  OmegaBox box_;
};

/// Orthogonal distance to the diagonal, |d - b| / sqrt(2).
double diag_distance(Point2 p);

/// Closest point of the diagonal, ((b+d)/2, (b+d)/2).
Point2 diag_projection(Point2 p);

/// Order-independent sum of non-negative terms: sorted ascending, then
/// accumulated. Two callers summing the same multiset get the same bits.
double stable_sum(std::vector<double> terms);

/// Pers_q: sum of diag_distance^q over the pairs. q > 0.
double total_persistence(const PersistenceDiagram& diagram, double q);

/// Number of pairs at diagonal distance >= ell.
std::size_t mass_above(const PersistenceDiagram& diagram, double ell);

/// Closed form of the integral of diag_distance^q over Omega(L).
double omega_weighted_volume(double q, double L);

} // namespace pdest
