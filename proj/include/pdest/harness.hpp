#pragma once

#include "pdest/generators.hpp"
#include "pdest/kde.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pdest {

class DegenerateSweep : public Error
{
public:
  using Error::Error;
};

class NonPositiveInput : public Error
{
public:
  using Error::Error;
};

enum class RateTarget
{
  intensity,
  density,
  betti_curve,
};

/// Which gap the error measures.
///   variance: estimate vs its expectation K_h * truth
///   bias:     K_h * truth vs truth (deterministic; no sampling)
///   total:    estimate vs truth
enum class ErrorMetric
{
  variance,
  bias,
  total,
};

/// Exactly one of n_values / h_values is non-empty; the other parameter is
/// held at fixed_n / fixed_h.
struct ConvergenceConfig
{
  RateTarget target = RateTarget::density;
  ErrorMetric metric = ErrorMetric::variance;
  std::vector<std::size_t> n_values;
  std::vector<double> h_values;
  std::size_t fixed_n = 0;
  double fixed_h = 0.0;
  std::size_t replicates = 10;
  std::uint64_t seed = 0;
  SyntheticMeasureSpec generator;
  KernelFamily kernel = KernelFamily::epanechnikov2d;
  std::size_t grid_nodes = 128;
  /// Weight exponent of the intensity error (density always uses 0).
  double weight_q = 1.0;
  std::size_t betti_resolution = 64;

  /// Throws Error unless the sweep is strictly increasing with >= 3 values
  /// and replicates >= 5.
  void validate() const;

  static ConvergenceConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RatePoint
{
  double sweep_value = 0.0;
  double mean = 0.0;
  double std = 0.0;
  /// One entry per replicate (a single entry for the bias metric).
  std::vector<double> errors;
};

struct RateFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct RateReport
{
  std::string sweep; ///< "n" or "h"
  std::vector<RatePoint> points;
  RateFit fit;
  double seconds = 0.0;

  nlohmann::json to_json() const;
};

/// Ordinary least squares of ln y on ln x. Needs >= 3 points, all
/// coordinates positive.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

/// Error of one configured estimator for a given (n, h) and replicate
/// stream. Exposed for tests.
double replicate_error(const ConvergenceConfig& config, std::size_t n,
                       double h, std::uint64_t replicate_index);

RateReport run_convergence(const ConvergenceConfig& config);

enum class FigureSetup
{
  orbit_r25,
  orbit_r40,
  circle_uniform,
  circle_power,
};

FigureSetup parse_figure_setup(const std::string& name);
std::string to_string(FigureSetup setup);

struct FigureOptions
{
  FigureSetup setup = FigureSetup::orbit_r40;
  std::size_t n_samples = 100;
  std::size_t n_points = 1000;
  std::uint64_t seed = 0;
  int dim = 1;
  /// 0 picks the setup default (1 for orbits, 2 for circles).
  double L = 0.0;
  /// 0 picks L / 20.
  double h = 0.0;
  KernelFamily kernel = KernelFamily::epanechnikov2d;
  std::size_t grid_nodes = 128;
  std::size_t curve_resolution = 256;
  double q_lo = 0.05;
  double q_hi = 0.95;
  // circle parameters
  double mu_angle = 1.5707963267948966;
  double kappa = 1.0;
  double noise_sd = 0.05;
};

/// Generates clouds, computes their Rips diagrams, and writes into out_dir:
/// diagrams/NNNN.csv, intensity.csv, density.csv, betti_raw.csv,
/// betti_normalized.csv and manifest.json. Returns the manifest.
nlohmann::json reproduce_figure(const FigureOptions& options,
                                const std::filesystem::path& out_dir);

} // namespace pdest
