#pragma once

#include "pdest/core.hpp"
#include "pdest/field.hpp"
#include "pdest/random.hpp"
#include "pdest/vr.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pdest {

struct OrbitSpec
{
  double r = 4.0;
  std::size_t n_points = 1000;
  std::uint64_t seed = 0;
};

/// Linked twist map orbit started at a uniform point of [0,1)^2:
///   x' = x + r y (1 - y)   mod 1
///   y' = y + r x' (1 - x') mod 1
/// The starting point is the first point of the cloud; no transient is
/// discarded.
PointCloud gen_orbit(const OrbitSpec& spec);

/// Same recurrence from a given starting point.
PointCloud linked_twist_orbit(double x0, double y0, double r,
                              std::size_t n_points);

enum class CircleDistribution
{
  uniform,
  power_spherical,
};

struct CircleSpec
{
  CircleDistribution distribution = CircleDistribution::uniform;
  double mu_angle = 1.5707963267948966;
  double kappa = 1.0;
  double noise_sd = 0.05;
  std::size_t n_points = 1000;
  std::uint64_t seed = 0;
};

/// Points on the unit circle plus isotropic Gaussian noise. Power-spherical
/// angles have density proportional to (1 + cos(theta - mu))^kappa and are
/// drawn by inverting a 4096-node tabulated CDF.
PointCloud gen_circle(const CircleSpec& spec);

/// Isotropic Gaussian restricted to the disk of radius `radius` about its
/// center and renormalized.
struct GaussianBump
{
  Point2 center;
  double weight = 1.0;
  double sigma = 0.0;
  double radius = 0.0;
};

/// Smooth probability density on Omega(L) with a closed form, used as ground
/// truth for the estimators.
class SyntheticDensity
{
public:
  SyntheticDensity(std::vector<GaussianBump> bumps, OmegaBox box);

  /// Named presets; "two_bumps" is a 0.6/0.4 mixture of bumps with
  /// sigma = 0.024 L truncated at 0.11 L, every support at least 0.15 L
  /// from the diagonal and from the box edges.
  static SyntheticDensity preset(const std::string& id, OmegaBox box);

  double operator()(Point2 w) const;
  Point2 sample(Rng& rng) const;

  /// Smallest distance between a bump support and the diagonal or the edges
  /// b = 0, d = L.
  double margin() const;

  const std::vector<GaussianBump>& bumps() const { return bumps_; }
  const OmegaBox& box() const { return box_; }

private:
  std::vector<GaussianBump> bumps_;
  std::vector<double> norm_;
  OmegaBox box_;
};

struct SyntheticMeasureSpec
{
  double lambda = 5.0;
  std::string density_id = "two_bumps";
  std::uint64_t seed = 0;
  double L = 1.0;
};

/// Random diagrams with N_i ~ Poisson(lambda) points drawn i.i.d. from f.
/// The intensity is lambda f; conditional on N_i >= 1 the normalized
/// measure has density f.
class SyntheticModel
{
public:
  explicit SyntheticModel(const SyntheticMeasureSpec& spec);

  double intensity(Point2 w) const { return spec_.lambda * density_(w); }
  double density(Point2 w) const { return density_(w); }
  const SyntheticDensity& shape() const { return density_; }
  const SyntheticMeasureSpec& spec() const { return spec_; }
  OmegaBox box() const { return density_.box(); }

  PersistenceDiagram draw(Rng& rng) const;

private:
  SyntheticMeasureSpec spec_;
  SyntheticDensity density_;
};

DiagramSample gen_synthetic_sample(const SyntheticMeasureSpec& spec,
                                   std::size_t n);

class ResolutionTooCoarse : public Error
{
public:
  using Error::Error;
};

/// Uniform intensities 4^n / L^2 on the adjacent open l1 balls of radius
/// sqrt(2) L / 2^(n+1) centered at
///   u_n = (c, c + R),  d_n = (c - R, c),  c = sqrt(2) L / 4.
/// The grid is aligned so that each ball holds exactly 2 k^2 cells of side
/// R / k (k = cells_per_radius); both fields then integrate to 1 and the
/// second is the first translated by (-k, -k) cells. The grid extends
/// outside [0, L]^2 when the balls do (n = 1).
struct CounterexamplePair
{
  ScalarField mu;
  ScalarField nu;
  Point2 u_center;
  Point2 d_center;
  double radius;
};

CounterexamplePair gen_counterexample_pair(int n, double L,
                                           std::size_t cells_per_radius = 16);

} // namespace pdest
