#include "pdest/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace pdest {

namespace {

double wrap_unit(double v)
{
  double w = std::fmod(v, 1.0);
  if (w < 0.0)
    w += 1.0;
  return w >= 1.0 ? 0.0 : w;
}

constexpr std::size_t kCdfNodes = 4096;

class AngularInverseCdf
{
public:
  explicit AngularInverseCdf(double kappa)
    : phi_(kCdfNodes), cdf_(kCdfNodes, 0.0)
  {
    const double pi = std::numbers::pi;
    const double step = 2.0 * pi / static_cast<double>(kCdfNodes - 1);
    double prev = std::pow(0.0, kappa);
    phi_[0] = -pi;
    for (std::size_t k = 1; k < kCdfNodes; ++k) {
      phi_[k] = -pi + step * static_cast<double>(k);
      const double g = std::pow(std::max(0.0, 1.0 + std::cos(phi_[k])), kappa);
      cdf_[k] = cdf_[k - 1] + 0.5 * step * (prev + g);
      prev = g;
    }
    const double total = cdf_.back();
    for (auto& c : cdf_)
      c /= total;
  }

  double operator()(double u) const
  {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin())
      return phi_.front();
    if (it == cdf_.end())
      return phi_.back();
    const std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    const double span = cdf_[k] - cdf_[k - 1];
    const double t = span > 0.0 ? (u - cdf_[k - 1]) / span : 0.0;
    return phi_[k - 1] + t * (phi_[k] - phi_[k - 1]);
  }

private:
  std::vector<double> phi_;
  std::vector<double> cdf_;
};

} // namespace

PointCloud linked_twist_orbit(double x0, double y0, double r,
                              std::size_t n_points)
{
  if (n_points == 0)
    throw EmptyCloud();
  std::vector<double> flat;
  flat.reserve(2 * n_points);
  double x = x0;
  double y = y0;
  flat.push_back(x);
  flat.push_back(y);
  for (std::size_t k = 1; k < n_points; ++k) {
    x = wrap_unit(x + r * y * (1.0 - y));
    y = wrap_unit(y + r * x * (1.0 - x));
    flat.push_back(x);
    flat.push_back(y);
  }
  return PointCloud(2, std::move(flat));
}

PointCloud gen_orbit(const OrbitSpec& spec)
{
  if (!(spec.r > 0.0))
    throw Error("orbit: r must be positive");
  if (spec.n_points < 2)
    throw Error("orbit: need at least two points");
  Rng rng(spec.seed);
  const double x0 = rng.uniform();
  const double y0 = rng.uniform();
  return linked_twist_orbit(x0, y0, spec.r, spec.n_points);
}

PointCloud gen_circle(const CircleSpec& spec)
{
  if (spec.n_points == 0)
    throw EmptyCloud();
  if (!(spec.kappa >= 0.0) || !(spec.noise_sd >= 0.0))
    throw Error("circle: kappa and noise_sd must be non-negative");
  Rng rng(spec.seed);
  std::vector<double> flat;
  flat.reserve(2 * spec.n_points);
  std::optional<AngularInverseCdf> inverse;
  if (spec.distribution == CircleDistribution::power_spherical)
    inverse.emplace(spec.kappa);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double theta = inverse ? spec.mu_angle + (*inverse)(rng.uniform())
                                 : 2.0 * std::numbers::pi * rng.uniform();
    double x = std::cos(theta);
    double y = std::sin(theta);
    if (spec.noise_sd > 0.0) {
      x += spec.noise_sd * rng.normal();
      y += spec.noise_sd * rng.normal();
    }
    flat.push_back(x);
    flat.push_back(y);
  }
  return PointCloud(2, std::move(flat));
}

SyntheticDensity::SyntheticDensity(std::vector<GaussianBump> bumps,
                                   OmegaBox box)
  : bumps_(std::move(bumps)), box_(box)
{
  if (bumps_.empty())
    throw Error("synthetic density needs at least one bump");
  double total = 0.0;
  for (const auto& b : bumps_) {
    if (!(b.weight > 0.0) || !(b.sigma > 0.0) || !(b.radius > 0.0))
      throw Error("bump weight, sigma and radius must be positive");
    total += b.weight;
  }
  for (auto& b : bumps_) {
    b.weight /= total;
    const double s2 = b.sigma * b.sigma;
    const double kept = -std::expm1(-b.radius * b.radius / (2.0 * s2));
    norm_.push_back(b.weight / (2.0 * std::numbers::pi * s2 * kept));
  }
  if (!(margin() > 0.0))
    throw Error("synthetic density support must lie strictly inside Omega");
}

SyntheticDensity SyntheticDensity::preset(const std::string& id, OmegaBox box)
{
  const double L = box.side_length();
  if (id == "two_bumps") {
    return SyntheticDensity(
      {
        {{0.27 * L, 0.73 * L}, 0.6, 0.024 * L, 0.11 * L},
        {{0.31 * L, 0.70 * L}, 0.4, 0.024 * L, 0.11 * L},
      },
      box);
  }
  if (id == "broad_bump")
    return SyntheticDensity({{{0.29 * L, 0.71 * L}, 1.0, 0.05 * L, 0.13 * L}}, box);
  throw Error("unknown synthetic density '" + id + "'");
}

double SyntheticDensity::operator()(Point2 w) const
{
  double v = 0.0;
  for (std::size_t k = 0; k < bumps_.size(); ++k) {
    const auto& b = bumps_[k];
    const double dx = w.birth - b.center.birth;
    const double dy = w.death - b.center.death;
    const double r2 = dx * dx + dy * dy;
    if (r2 <= b.radius * b.radius)
      v += norm_[k] * std::exp(-r2 / (2.0 * b.sigma * b.sigma));
  }
  return v;
}

Point2 SyntheticDensity::sample(Rng& rng) const
{
  double u = rng.uniform();
  std::size_t k = 0;
  while (k + 1 < bumps_.size() && u >= bumps_[k].weight) {
    u -= bumps_[k].weight;
    ++k;
  }
  const auto& b = bumps_[k];
  for (;;) {
    const double dx = b.sigma * rng.normal();
    const double dy = b.sigma * rng.normal();
    if (dx * dx + dy * dy <= b.radius * b.radius)
      return {b.center.birth + dx, b.center.death + dy};
  }
}

double SyntheticDensity::margin() const
{
  const double L = box_.side_length();
  double m = L;
  for (const auto& b : bumps_) {
    const double room = std::min({b.center.birth, L - b.center.death,
                                  (b.center.death - b.center.birth) /
                                    std::numbers::sqrt2});
    m = std::min(m, room - b.radius);
  }
  return m;
}

SyntheticModel::SyntheticModel(const SyntheticMeasureSpec& spec)
  : spec_(spec),
    density_(SyntheticDensity::preset(spec.density_id, OmegaBox(spec.L)))
{
  if (!(spec.lambda > 0.0))
    throw Error("synthetic sample: lambda must be positive");
}

PersistenceDiagram SyntheticModel::draw(Rng& rng) const
{
  const auto count = rng.poisson(spec_.lambda);
  std::vector<PersistencePair> pairs;
  pairs.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const Point2 p = density_.sample(rng);
    pairs.push_back({p.birth, p.death, 1});
  }
  return PersistenceDiagram(std::move(pairs), density_.box());
}

DiagramSample gen_synthetic_sample(const SyntheticMeasureSpec& spec,
                                   std::size_t n)
{
  if (n == 0)
    throw Error("synthetic sample: n must be at least 1");
  const SyntheticModel model(spec);
  Rng rng(spec.seed);
  std::vector<PersistenceDiagram> diagrams;
  diagrams.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    diagrams.push_back(model.draw(rng));
  return {std::move(diagrams), model.box()};
}

CounterexamplePair gen_counterexample_pair(int n, double L,
                                           std::size_t cells_per_radius)
{
  if (n < 1)
    throw Error("counterexample index n must be at least 1");
  if (!(L > 0.0))
    throw Error("counterexample: L must be positive");
  if (cells_per_radius < 8)
    throw ResolutionTooCoarse(
      "counterexample grid needs at least 8 cells per ball radius");

  const double R = std::numbers::sqrt2 * L / std::ldexp(1.0, n + 1);
  const double c = std::numbers::sqrt2 * L / 4.0;
  const Point2 u{c, c + R};
  const Point2 d{c - R, c};
  const auto k = static_cast<double>(cells_per_radius);
  const double cell = R / k;

  // Node offsets from either center are (half-integer, integer) multiples of
  // the cell, so no node falls on a ball boundary.
  GridShape shape;
  shape.cell = cell;
  shape.origin_x = c - (2.0 * k + 1.0) * cell;
  shape.origin_y = c + R - (2.0 * k + 1.5) * cell;
  shape.nx = 3 * cells_per_radius + 2;
  shape.ny = 3 * cells_per_radius + 3;

  const double height = std::ldexp(1.0, 2 * n) / (L * L);
  auto ball = [&](Point2 center) {
    return [=](Point2 x) {
      const double l1 =
        std::abs(x.birth - center.birth) + std::abs(x.death - center.death);
      return l1 < R ? height : 0.0;
    };
  };
  return {ScalarField::sample(shape, ball(u)), ScalarField::sample(shape, ball(d)),
          u, d, R};
}

} // namespace pdest
