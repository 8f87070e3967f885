#include "pdest/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pdest {

OmegaBox::OmegaBox(double side_length) : L_(side_length)
{
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw Error("OmegaBox: side length must be positive and finite");
}

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePair> pairs,
                                       OmegaBox box)
  : box_(box)
{
  pairs_.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.birth == p.death)
      continue;
    if (!box_.contains(p.birth, p.death) || p.dim < 0) {
      std::ostringstream msg;
      msg << "persistence pair (" << p.birth << ", " << p.death << ", dim "
          << p.dim << ") outside Omega(L = " << box_.side_length() << ")";
      throw Error(msg.str());
    }
    pairs_.push_back(p);
  }
}

PersistenceDiagram PersistenceDiagram::restricted_to(int dim) const
{
  PersistenceDiagram out(box_);
  for (const auto& p : pairs_)
    if (p.dim == dim)
      out.pairs_.push_back(p);
  return out;
}

PersistenceDiagram
PersistenceDiagram::concatenated(const PersistenceDiagram& other) const
{
  if (!(other.box_ == box_))
    throw Error("cannot concatenate diagrams with different L");
  PersistenceDiagram out = *this;
  out.pairs_.insert(out.pairs_.end(), other.pairs_.begin(), other.pairs_.end());
  return out;
}

std::vector<PersistencePair> PersistenceDiagram::sorted_pairs() const
{
  auto out = pairs_;
  std::sort(out.begin(), out.end());
  return out;
}

DiagramSample::DiagramSample(std::vector<PersistenceDiagram> diagrams,
                             OmegaBox box)
  : diagrams_(std::move(diagrams)), box_(box)
{
  if (diagrams_.empty())
    throw Error("DiagramSample needs at least one diagram");
  for (const auto& d : diagrams_)
    if (!(d.box() == box_))
      throw Error("all diagrams of a sample must share the same L");
}

DiagramSample DiagramSample::restricted_to(int dim) const
{
  std::vector<PersistenceDiagram> out;
  out.reserve(diagrams_.size());
  for (const auto& d : diagrams_)
    out.push_back(d.restricted_to(dim));
  return {std::move(out), box_};
}

DiagramSample DiagramSample::concatenated(const DiagramSample& other) const
{
  auto out = diagrams_;
  out.insert(out.end(), other.diagrams_.begin(), other.diagrams_.end());
  return {std::move(out), box_};
}

DiagramSample DiagramSample::without_empty(std::size_t* dropped) const
{
  std::vector<PersistenceDiagram> kept;
  for (const auto& d : diagrams_)
    if (!d.empty())
      kept.push_back(d);
  if (dropped)
    *dropped = diagrams_.size() - kept.size();
  if (kept.empty())
    throw Error("every diagram of the sample is empty");
  return {std::move(kept), box_};
}

double diag_distance(Point2 p)
{
  return std::abs(p.death - p.birth) / std::numbers::sqrt2;
}

Point2 diag_projection(Point2 p)
{
  const double m = 0.5 * (p.birth + p.death);
  return {m, m};
}

double stable_sum(std::vector<double> terms)
{
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms)
    s += t;
  return s;
}

double total_persistence(const PersistenceDiagram& diagram, double q)
{
  if (!(q > 0.0))
    throw Error("total_persistence: q must be positive");
  std::vector<double> terms;
  terms.reserve(diagram.size());
  for (const auto& p : diagram.pairs())
    terms.push_back(std::pow(diag_distance(p.point()), q));
  return stable_sum(std::move(terms));
}

std::size_t mass_above(const PersistenceDiagram& diagram, double ell)
{
  return static_cast<std::size_t>(
    std::count_if(diagram.pairs().begin(), diagram.pairs().end(),
                  [ell](const PersistencePair& p) {
                    return diag_distance(p.point()) >= ell;
                  }));
}

double omega_weighted_volume(double q, double L)
{
  if (!(q >= 0.0) || !(L > 0.0))
    throw Error("omega_weighted_volume: need q >= 0 and L > 0");
  return 2.0 / ((q + 1.0) * (q + 2.0)) *
         std::pow(L / std::numbers::sqrt2, q + 2.0);
}

} // namespace pdest
