#include "pdest/kde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace pdest {

namespace {

double profile(KernelFamily family, double r2)
{
  if (r2 > 1.0)
    return 0.0;
  const double t = 1.0 - r2;
  switch (family) {
  case KernelFamily::epanechnikov2d:
    return (2.0 / std::numbers::pi) * t;
  case KernelFamily::quartic2d:
    return (3.0 / std::numbers::pi) * t * t;
  }
  return 0.0;
}

double midpoint_mass(KernelFamily family)
{
  constexpr int n = 512;
  const double cell = 2.0 / n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = -1.0 + (j + 0.5) * cell;
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + (i + 0.5) * cell;
      s += profile(family, x * x + y * y);
    }
  }
  return s * cell * cell;
}

void check_normalization(KernelFamily family)
{
  static const std::array<double, 2> mass = {
    midpoint_mass(KernelFamily::epanechnikov2d),
    midpoint_mass(KernelFamily::quartic2d),
  };
  if (std::abs(mass[static_cast<std::size_t>(family)] - 1.0) > 1e-4)
    throw Error("kernel does not integrate to one");
}

struct GaussRule
{
  std::vector<double> nodes;   // on [0, 1]
  std::vector<double> weights; // sum to 1
};

GaussRule gauss_legendre_unit(int n)
{
  GaussRule rule;
  for (int k = 1; k <= n; ++k) {
    double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15)
        break;
    }
    rule.nodes.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

// Inclusive index range of nodes whose center lies within `reach` of `c`.
bool node_range(double c, double reach, double origin, double cell,
                std::size_t count, std::size_t& lo, std::size_t& hi)
{
  const double first = std::ceil((c - reach - origin) / cell - 0.5);
  const double last = std::floor((c + reach - origin) / cell - 0.5);
  if (last < 0.0 || first > static_cast<double>(count) - 1.0 || first > last)
    return false;
  lo = static_cast<std::size_t>(std::max(first, 0.0));
  hi = static_cast<std::size_t>(std::min(last, static_cast<double>(count) - 1.0));
  return true;
}

bool in_domain(Point2 w, double h, ErrorDomain domain)
{
  if (domain == ErrorDomain::full_grid)
    return true;
  return w.birth >= 0.0 && w.death > w.birth && diag_distance(w) >= 2.0 * h;
}

template <typename Diff>
SupError sup_error_impl(const GridShape& shape, double q, double h,
                        ErrorDomain domain, Diff&& diff)
{
  if (!(q >= 0.0) || !(h >= 0.0))
    throw Error("weighted_sup_error: need q >= 0 and h >= 0");
  SupError out;
  for (std::size_t j = 0; j < shape.ny; ++j)
    for (std::size_t i = 0; i < shape.nx; ++i) {
      const Point2 w = shape.node(i, j);
      if (!in_domain(w, h, domain))
        continue;
      double weight = 1.0;
      if (q > 0.0)
        weight = std::pow(std::max(diag_distance(w) - h, 0.0), q);
      out.value = std::max(out.value, weight * std::abs(diff(i, j, w)));
      ++out.nodes;
    }
  out.empty_domain = out.nodes == 0;
  return out;
}

} // namespace

KernelFamily parse_kernel_family(const std::string& name)
{
  if (name == "epanechnikov" || name == "epanechnikov2d")
    return KernelFamily::epanechnikov2d;
  if (name == "quartic" || name == "quartic2d" || name == "biweight")
    return KernelFamily::quartic2d;
  throw Error("unknown kernel family '" + name + "'");
}

KernelSpec::KernelSpec(KernelFamily family, double bandwidth)
  : family_(family), h_(bandwidth)
{
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw Error("kernel bandwidth must be positive");
  check_normalization(family);
}

double KernelSpec::operator()(double x, double y) const
{
  return profile(family_, x * x + y * y);
}

double KernelSpec::scaled(double x, double y) const
{
  return (*this)(x / h_, y / h_) / (h_ * h_);
}

double kernel_eval(const KernelSpec& spec, Point2 x)
{
  return spec(x.birth, x.death);
}

EmptyDiagramInSample::EmptyDiagramInSample(std::size_t index)
  : Error("diagram " + std::to_string(index) +
          " of the sample is empty; its normalized measure is undefined"),
    index_(index)
{
}

ScalarField smooth_atoms(std::vector<WeightedPoint> atoms,
                         const KernelSpec& kernel, const GridShape& grid)
{
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const WeightedPoint& a, const WeightedPoint& b) {
                     if (a.at.death != b.at.death)
                       return a.at.death < b.at.death;
                     return a.at.birth < b.at.birth;
                   });
  ScalarField out(grid);
  const double h = kernel.bandwidth();
  const double inv_h2 = 1.0 / (h * h);
  for (const auto& a : atoms) {
    std::size_t i0, i1, j0, j1;
    if (!node_range(a.at.birth, h, grid.origin_x, grid.cell, grid.nx, i0, i1) ||
        !node_range(a.at.death, h, grid.origin_y, grid.cell, grid.ny, j0, j1))
      continue;
    for (std::size_t j = j0; j <= j1; ++j)
      for (std::size_t i = i0; i <= i1; ++i) {
        const Point2 w = grid.node(i, j);
        const double k = kernel((a.at.birth - w.birth) / h,
                                (a.at.death - w.death) / h);
        if (k != 0.0)
          out.at(i, j) += a.weight * k * inv_h2;
      }
  }
  return out;
}

ScalarField estimate_intensity(const DiagramSample& sample,
                               const KernelSpec& kernel, const GridShape& grid)
{
  const double scale = 1.0 / static_cast<double>(sample.size());
  std::vector<WeightedPoint> atoms;
  for (const auto& d : sample.diagrams())
    for (const auto& p : d.pairs())
      atoms.push_back({p.point(), scale});
  return smooth_atoms(std::move(atoms), kernel, grid);
}

ScalarField estimate_density(const DiagramSample& sample,
                             const KernelSpec& kernel, const GridShape& grid,
                             EmptyDiagramPolicy policy, std::size_t* dropped)
{
  std::size_t empties = 0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (sample[i].empty()) {
      if (policy == EmptyDiagramPolicy::strict)
        throw EmptyDiagramInSample(i);
      ++empties;
    }
  if (empties == sample.size())
    throw Error("every diagram of the sample is empty");
  if (dropped)
    *dropped = empties;

  const double n = static_cast<double>(sample.size() - empties);
  std::vector<WeightedPoint> atoms;
  for (const auto& d : sample.diagrams()) {
    if (d.empty())
      continue;
    const double w = 1.0 / (n * static_cast<double>(d.size()));
    for (const auto& p : d.pairs())
      atoms.push_back({p.point(), w});
  }
  return smooth_atoms(std::move(atoms), kernel, grid);
}

ScalarField smooth_with_kernel(const PlaneFunction& f, const KernelSpec& kernel,
                               const GridShape& grid)
{
  static const GaussRule radial = gauss_legendre_unit(16);
  constexpr int angles = 48;
  std::array<double, angles> cs{}, sn{};
  for (int a = 0; a < angles; ++a) {
    cs[a] = std::cos(2.0 * std::numbers::pi * a / angles);
    sn[a] = std::sin(2.0 * std::numbers::pi * a / angles);
  }
  const double h = kernel.bandwidth();
  const double dtheta = 2.0 * std::numbers::pi / angles;

  return ScalarField::sample(grid, [&](Point2 w) {
    double s = 0.0;
    for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
      const double r = radial.nodes[k];
      const double kr = kernel(r, 0.0) * r * radial.weights[k] * dtheta;
      double ring = 0.0;
      for (int a = 0; a < angles; ++a)
        ring += f({w.birth - h * r * cs[a], w.death - h * r * sn[a]});
      s += kr * ring;
    }
    return s;
  });
}

SupError weighted_sup_error(const ScalarField& estimate,
                            const PlaneFunction& truth, double q, double h,
                            ErrorDomain domain)
{
  return sup_error_impl(estimate.shape(), q, h, domain,
                        [&](std::size_t i, std::size_t j, Point2 w) {
                          return estimate.at(i, j) - truth(w);
                        });
}

SupError weighted_sup_error(const ScalarField& estimate,
                            const ScalarField& truth, double q, double h,
                            ErrorDomain domain)
{
  estimate.require_same_geometry(truth);
  return sup_error_impl(estimate.shape(), q, h, domain,
                        [&](std::size_t i, std::size_t j, Point2) {
                          return estimate.at(i, j) - truth.at(i, j);
                        });
}

} // namespace pdest
