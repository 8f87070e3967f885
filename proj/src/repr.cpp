#include "pdest/repr.hpp"

#include <algorithm>
#include <cmath>

namespace pdest {

namespace {

void require_nonempty(const DiagramSample& sample)
{
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (sample[i].empty())
      throw EmptyDiagramInSample(i);
}

// Per-diagram Betti values; empty diagrams are skipped in normalized mode
// under the skip policy.
std::vector<double> per_diagram(const DiagramSample& sample,
                                const BettiQuery& query, BettiMode mode)
{
  std::vector<double> out;
  out.reserve(sample.size());
  for (const auto& d : sample.diagrams()) {
    const auto count = static_cast<double>(
      std::count_if(d.pairs().begin(), d.pairs().end(),
                    [&](const PersistencePair& p) {
                      return query.contains(p.point());
                    }));
    if (mode == BettiMode::raw)
      out.push_back(count);
    else if (!d.empty())
      out.push_back(count / static_cast<double>(d.size()));
  }
  return out;
}

void check_mode(const DiagramSample& sample, BettiMode mode,
                EmptyDiagramPolicy policy)
{
  if (mode == BettiMode::normalized && policy == EmptyDiagramPolicy::strict)
    require_nonempty(sample);
  if (mode == BettiMode::normalized) {
    const bool any = std::any_of(sample.diagrams().begin(),
                                 sample.diagrams().end(),
                                 [](const auto& d) { return !d.empty(); });
    if (!any)
      throw Error("every diagram of the sample is empty");
  }
}

double mean(const std::vector<double>& v)
{
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> scale_grid(double L, std::size_t resolution)
{
  if (resolution < 2)
    throw Error("betti curve resolution must be at least 2");
  std::vector<double> xs(resolution);
  for (std::size_t k = 0; k < resolution; ++k)
    xs[k] = L * static_cast<double>(k) / static_cast<double>(resolution - 1);
  return xs;
}

} // namespace

BettiQuery BettiQuery::persistent(double x1, double x2)
{
  if (!(x1 < x2))
    throw Error("persistent Betti query needs x1 < x2");
  return {x1, x2};
}

double betti_empirical(const DiagramSample& sample, const BettiQuery& query,
                       BettiMode mode, EmptyDiagramPolicy policy)
{
  check_mode(sample, mode, policy);
  return mean(per_diagram(sample, query, mode));
}

double betti_from_field(const ScalarField& field, const BettiQuery& query)
{
  const auto& g = field.shape();
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const Point2 w = g.node(i, j);
      if (w.birth >= 0.0 && query.contains(w))
        s += field.at(i, j);
    }
  return s * g.cell * g.cell;
}

double quantile_type7(std::vector<double> values, double p)
{
  if (values.empty())
    throw Error("quantile of an empty set");
  if (!(p >= 0.0 && p <= 1.0))
    throw Error("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return values[lo] + t * (values[hi] - values[lo]);
}

BettiCurve betti_curve(const DiagramSample& sample, BettiMode mode,
                       std::size_t resolution, double q_lo, double q_hi,
                       EmptyDiagramPolicy policy)
{
  check_mode(sample, mode, policy);
  BettiCurve curve;
  curve.x = scale_grid(sample.box().side_length(), resolution);
  for (double x : curve.x) {
    auto values = per_diagram(sample, BettiQuery::at(x), mode);
    curve.mean.push_back(mean(values));
    curve.lower.push_back(quantile_type7(values, q_lo));
    curve.upper.push_back(quantile_type7(std::move(values), q_hi));
  }
  return curve;
}

BettiCurve betti_curve(const ScalarField& field, double L,
                       std::size_t resolution)
{
  BettiCurve curve;
  curve.x = scale_grid(L, resolution);
  for (double x : curve.x)
    curve.mean.push_back(betti_from_field(field, BettiQuery::at(x)));
  return curve;
}

ScalarField persistence_surface(const DiagramSample& sample,
                                const SurfaceSpec& spec)
{
  if (!(spec.weight_q > 0.0))
    throw Error("surface weight exponent must be positive");
  const double scale = 1.0 / static_cast<double>(sample.size());
  std::vector<WeightedPoint> atoms;
  for (const auto& d : sample.diagrams())
    for (const auto& p : d.pairs())
      atoms.push_back(
        {p.point(), scale * std::pow(diag_distance(p.point()), spec.weight_q)});
  return smooth_atoms(std::move(atoms), spec.kernel, spec.grid);
}

double linear_functional(const ScalarField& field, const PlaneFunction& f)
{
  const auto& g = field.shape();
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double v = field.at(i, j);
      if (v != 0.0)
        s += f(g.node(i, j)) * v;
    }
  return s * g.cell * g.cell;
}

} // namespace pdest
