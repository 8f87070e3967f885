#include "pdest/harness.hpp"

#include "pdest/io.hpp"
#include "pdest/repr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

namespace pdest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* target_name(RateTarget t)
{
  switch (t) {
  case RateTarget::intensity:
    return "intensity";
  case RateTarget::density:
    return "density";
  case RateTarget::betti_curve:
    return "betti_curve";
  }
  return "";
}

const char* metric_name(ErrorMetric m)
{
  switch (m) {
  case ErrorMetric::variance:
    return "variance";
  case ErrorMetric::bias:
    return "bias";
  case ErrorMetric::total:
    return "total";
  }
  return "";
}

const char* kernel_name(KernelFamily k)
{
  return k == KernelFamily::epanechnikov2d ? "epanechnikov" : "quartic";
}

// Ground truth on the grid for one bandwidth: the target function itself
// and its kernel smoothing (the estimator's expectation).
struct Reference
{
  ScalarField truth;
  std::optional<ScalarField> smoothed;
};

class Evaluator
{
public:
  explicit Evaluator(const ConvergenceConfig& config)
    : config_(config), model_(config.generator),
      grid_(GridShape::covering(config.generator.L, config.grid_nodes))
  {
  }

  Reference reference(double h) const
  {
    const KernelSpec kernel(config_.kernel, h);
    const PlaneFunction f = [this](Point2 w) {
      return config_.target == RateTarget::density ? model_.density(w)
                                                   : model_.intensity(w);
    };
    Reference ref{ScalarField::sample(grid_, f), std::nullopt};
    if (config_.metric != ErrorMetric::total)
      ref.smoothed = smooth_with_kernel(f, kernel, grid_);
    return ref;
  }

  double error(const Reference& ref, std::size_t n, double h,
               std::uint64_t index) const
  {
    if (config_.metric == ErrorMetric::bias)
      return compare(*ref.smoothed, ref.truth, h);

    Rng rng = Rng::stream(config_.seed, index);
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      diagrams.push_back(model_.draw(rng));
    const DiagramSample sample(std::move(diagrams), model_.box());

    const KernelSpec kernel(config_.kernel, h);
    const ScalarField estimate =
      config_.target == RateTarget::density
        ? estimate_density(sample, kernel, grid_, EmptyDiagramPolicy::skip)
        : estimate_intensity(sample, kernel, grid_);
    const ScalarField& against =
      config_.metric == ErrorMetric::variance ? *ref.smoothed : ref.truth;
    return compare(estimate, against, h);
  }

private:
  double compare(const ScalarField& estimate, const ScalarField& reference,
                 double h) const
  {
    switch (config_.target) {
    case RateTarget::intensity:
      return weighted_sup_error(estimate, reference, config_.weight_q, h,
                                ErrorDomain::omega_2h)
        .value;
    case RateTarget::density:
      return weighted_sup_error(estimate, reference, 0.0, h,
                                ErrorDomain::full_grid)
        .value;
    case RateTarget::betti_curve: {
      const double L = config_.generator.L;
      const auto a = betti_curve(estimate, L, config_.betti_resolution);
      const auto b = betti_curve(reference, L, config_.betti_resolution);
      double gap = 0.0;
      for (std::size_t k = 0; k < a.mean.size(); ++k)
        gap = std::max(gap, std::abs(a.mean[k] - b.mean[k]));
      return gap;
    }
    }
    return 0.0;
  }

  const ConvergenceConfig& config_;
  SyntheticModel model_;
  GridShape grid_;
};

template <typename T>
bool strictly_increasing(const std::vector<T>& v)
{
  return std::adjacent_find(v.begin(), v.end(), [](const T& a, const T& b) {
           return !(a < b);
         }) == v.end();
}

RatePoint summarize(double sweep_value, std::vector<double> errors)
{
  RatePoint p;
  p.sweep_value = sweep_value;
  p.errors = errors;
  const double count = static_cast<double>(errors.size());
  p.mean = stable_sum(errors) / count;
  if (errors.size() > 1) {
    std::vector<double> sq;
    for (double e : errors)
      sq.push_back((e - p.mean) * (e - p.mean));
    p.std = std::sqrt(stable_sum(std::move(sq)) / (count - 1.0));
  }
  return p;
}

std::string dir_entry_name(std::size_t i)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu.csv", i);
  return buf;
}

} // namespace

void ConvergenceConfig::validate() const
{
  const bool by_n = !n_values.empty();
  const bool by_h = !h_values.empty();
  if (by_n == by_h)
    throw Error("convergence config needs exactly one of n_values, h_values");
  if ((by_n ? n_values.size() : h_values.size()) < 3)
    throw Error("a sweep needs at least 3 values");
  if (by_n && (!strictly_increasing(n_values) || n_values.front() == 0))
    throw Error("n_values must be positive and strictly increasing");
  if (by_h && (!strictly_increasing(h_values) || !(h_values.front() > 0.0)))
    throw Error("h_values must be positive and strictly increasing");
  if (by_n && !(fixed_h > 0.0))
    throw Error("an n sweep needs a positive fixed h");
  if (by_h && metric != ErrorMetric::bias && fixed_n == 0)
    throw Error("an h sweep needs a positive fixed n");
  if (replicates < 5)
    throw Error("at least 5 replicates per sweep point are required");
  if (grid_nodes < 2)
    throw Error("grid needs at least 2 nodes per side");
  if (target == RateTarget::betti_curve && betti_resolution < 2)
    throw Error("betti_resolution must be at least 2");
}

ConvergenceConfig ConvergenceConfig::from_json(const json& j)
{
  ConvergenceConfig c;
  const std::string target = j.value("target", "density");
  if (target == "intensity")
    c.target = RateTarget::intensity;
  else if (target == "density")
    c.target = RateTarget::density;
  else if (target == "betti_curve")
    c.target = RateTarget::betti_curve;
  else
    throw Error("unknown target '" + target + "'");

  const std::string metric = j.value("metric", "variance");
  if (metric == "variance")
    c.metric = ErrorMetric::variance;
  else if (metric == "bias")
    c.metric = ErrorMetric::bias;
  else if (metric == "total")
    c.metric = ErrorMetric::total;
  else
    throw Error("unknown metric '" + metric + "'");

  if (!j.contains("sweep"))
    throw Error("convergence config needs a \"sweep\" object");
  const auto& sweep = j.at("sweep");
  if (sweep.contains("n_values"))
    c.n_values = sweep.at("n_values").get<std::vector<std::size_t>>();
  if (sweep.contains("h_values"))
    c.h_values = sweep.at("h_values").get<std::vector<double>>();
  if (j.contains("fixed")) {
    const auto& fixed = j.at("fixed");
    c.fixed_n = fixed.value("n", std::size_t{0});
    c.fixed_h = fixed.value("h", 0.0);
  }
  c.replicates = j.value("replicates", c.replicates);
  c.seed = j.value("seed", c.seed);
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    c.generator.lambda = g.value("lambda", c.generator.lambda);
    c.generator.density_id = g.value("density_id", c.generator.density_id);
    c.generator.L = g.value("L", c.generator.L);
  }
  c.kernel = parse_kernel_family(j.value("kernel", std::string("epanechnikov")));
  c.grid_nodes = j.value("grid", c.grid_nodes);
  c.weight_q = j.value("weight_q", c.weight_q);
  c.betti_resolution = j.value("betti_resolution", c.betti_resolution);
  c.validate();
  return c;
}

json ConvergenceConfig::to_json() const
{
  json j;
  j["target"] = target_name(target);
  j["metric"] = metric_name(metric);
  j["sweep"] = json::object();
  if (!n_values.empty()) {
    j["sweep"]["n_values"] = n_values;
    j["fixed"] = {{"h", fixed_h}};
  } else {
    j["sweep"]["h_values"] = h_values;
    j["fixed"] = {{"n", fixed_n}};
  }
  j["replicates"] = replicates;
  j["seed"] = seed;
  j["generator"] = {{"lambda", generator.lambda},
                    {"density_id", generator.density_id},
                    {"L", generator.L}};
  j["kernel"] = kernel_name(kernel);
  j["grid"] = grid_nodes;
  j["weight_q"] = weight_q;
  j["betti_resolution"] = betti_resolution;
  return j;
}

json RateReport::to_json() const
{
  json j;
  j["sweep"] = sweep;
  j["points"] = json::array();
  for (const auto& p : points)
    j["points"].push_back({{"value", p.sweep_value},
                           {"mean", p.mean},
                           {"std", p.std},
                           {"errors", p.errors}});
  j["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
  j["seconds"] = seconds;
  return j;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points)
{
  if (points.size() < 3)
    throw Error("fit_rate needs at least 3 points");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw NonPositiveInput("fit_rate needs positive coordinates");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double m = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (!(sxx > 0.0))
    throw Error("fit_rate needs at least two distinct x values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double replicate_error(const ConvergenceConfig& config, std::size_t n, double h,
                       std::uint64_t replicate_index)
{
  const Evaluator eval(config);
  return eval.error(eval.reference(h), n, h, replicate_index);
}

RateReport run_convergence(const ConvergenceConfig& config)
{
  config.validate();
  const auto t0 = Clock::now();
  const Evaluator eval(config);
  const bool by_n = !config.n_values.empty();
  const std::size_t count = by_n ? config.n_values.size() : config.h_values.size();

  RateReport report;
  report.sweep = by_n ? "n" : "h";
  std::optional<Reference> shared;
  if (by_n)
    shared = eval.reference(config.fixed_h);

  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = by_n ? config.n_values[k] : config.fixed_n;
    const double h = by_n ? config.fixed_h : config.h_values[k];
    const Reference ref = by_n ? *shared : eval.reference(h);
    std::vector<double> errors;
    const std::size_t reps =
      config.metric == ErrorMetric::bias ? 1 : config.replicates;
    for (std::size_t r = 0; r < reps; ++r)
      errors.push_back(eval.error(ref, n, h, k * config.replicates + r));
    report.points.push_back(
      summarize(by_n ? static_cast<double>(n) : h, std::move(errors)));
  }

  std::vector<std::pair<double, double>> xy;
  for (const auto& p : report.points) {
    if (p.mean == 0.0)
      throw DegenerateSweep("mean error is zero at sweep value " +
                            format_double(p.sweep_value));
    xy.emplace_back(p.sweep_value, p.mean);
  }
  report.fit = fit_rate(xy);
  report.seconds = seconds_since(t0);
  return report;
}

FigureSetup parse_figure_setup(const std::string& name)
{
  if (name == "orbit_r25")
    return FigureSetup::orbit_r25;
  if (name == "orbit_r40")
    return FigureSetup::orbit_r40;
  if (name == "circle_uniform")
    return FigureSetup::circle_uniform;
  if (name == "circle_power")
    return FigureSetup::circle_power;
  throw Error("unknown setup '" + name + "'");
}

std::string to_string(FigureSetup setup)
{
  switch (setup) {
  case FigureSetup::orbit_r25:
    return "orbit_r25";
  case FigureSetup::orbit_r40:
    return "orbit_r40";
  case FigureSetup::circle_uniform:
    return "circle_uniform";
  case FigureSetup::circle_power:
    return "circle_power";
  }
  return "";
}

json reproduce_figure(const FigureOptions& opt, const fs::path& out_dir)
{
  const bool orbit =
    opt.setup == FigureSetup::orbit_r25 || opt.setup == FigureSetup::orbit_r40;
  if (opt.n_samples == 0)
    throw Error("reproduce_figure needs at least one sample");
  if (opt.dim != 0 && opt.dim != 1)
    throw Error("homology dimension must be 0 or 1");
  const double L = opt.L > 0.0 ? opt.L : (orbit ? 1.0 : 2.0);
  const double h = opt.h > 0.0 ? opt.h : L / 20.0;
  const OmegaBox box(L);

  json params;
  params["setup"] = to_string(opt.setup);
  params["n_samples"] = opt.n_samples;
  params["n_points"] = opt.n_points;
  params["seed"] = opt.seed;
  params["dim"] = opt.dim;
  params["L"] = L;
  params["h"] = h;
  params["kernel"] = kernel_name(opt.kernel);
  params["grid"] = opt.grid_nodes;
  params["curve_resolution"] = opt.curve_resolution;
  params["quantiles"] = {opt.q_lo, opt.q_hi};
  if (orbit) {
    params["r"] = opt.setup == FigureSetup::orbit_r25 ? 2.5 : 4.0;
  } else {
    params["noise_sd"] = opt.noise_sd;
    if (opt.setup == FigureSetup::circle_power) {
      params["mu"] = opt.mu_angle;
      params["kappa"] = opt.kappa;
    }
  }

  json timings;
  auto t0 = Clock::now();
  std::vector<PointCloud> clouds;
  clouds.reserve(opt.n_samples);
  for (std::size_t i = 0; i < opt.n_samples; ++i) {
    const std::uint64_t s = Rng::stream(opt.seed, i).next();
    if (orbit) {
      OrbitSpec spec;
      spec.r = params["r"].get<double>();
      spec.n_points = opt.n_points;
      spec.seed = s;
      clouds.push_back(gen_orbit(spec));
    } else {
      CircleSpec spec;
      spec.distribution = opt.setup == FigureSetup::circle_power
                            ? CircleDistribution::power_spherical
                            : CircleDistribution::uniform;
      spec.mu_angle = opt.mu_angle;
      spec.kappa = opt.kappa;
      spec.noise_sd = opt.noise_sd;
      spec.n_points = opt.n_points;
      spec.seed = s;
      clouds.push_back(gen_circle(spec));
    }
  }
  timings["generate"] = seconds_since(t0);

  t0 = Clock::now();
  FiltrationSpec filtration;
  filtration.max_dim = opt.dim;
  filtration.max_edge = L;
  filtration.cap_essential = true;
  const DiagramSample sample =
    batch_rips(clouds, filtration, box).restricted_to(opt.dim);
  timings["rips"] = seconds_since(t0);

  fs::create_directories(out_dir / "diagrams");
  json diagram_files = json::array();
  std::size_t total_pairs = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const std::string name = "diagrams/" + dir_entry_name(i);
    write_diagram_csv(out_dir / name, sample[i]);
    diagram_files.push_back(name);
    total_pairs += sample[i].size();
  }

  t0 = Clock::now();
  const KernelSpec kernel(opt.kernel, h);
  const GridShape grid = GridShape::covering(L, opt.grid_nodes);
  const ScalarField intensity = estimate_intensity(sample, kernel, grid);
  std::size_t dropped = 0;
  const ScalarField density = estimate_density(
    sample, kernel, grid, EmptyDiagramPolicy::skip, &dropped);
  timings["estimate"] = seconds_since(t0);

  t0 = Clock::now();
  const BettiCurve raw = betti_curve(sample, BettiMode::raw,
                                     opt.curve_resolution, opt.q_lo, opt.q_hi);
  const BettiCurve normalized =
    betti_curve(sample, BettiMode::normalized, opt.curve_resolution, opt.q_lo,
                opt.q_hi, EmptyDiagramPolicy::skip);
  timings["betti"] = seconds_since(t0);

  write_field_csv(out_dir / "intensity.csv", intensity);
  write_field_csv(out_dir / "density.csv", density);
  write_curve_csv(out_dir / "betti_raw.csv", raw);
  write_curve_csv(out_dir / "betti_normalized.csv", normalized);

  json manifest;
  manifest["parameters"] = params;
  manifest["diagrams"] = diagram_files;
  manifest["total_pairs"] = total_pairs;
  manifest["empty_diagrams_skipped"] = dropped;
  manifest["fields"] = {"intensity.csv", "density.csv"};
  manifest["curves"] = {"betti_raw.csv", "betti_normalized.csv"};
  manifest["timings_seconds"] = timings;

  std::ofstream out(out_dir / "manifest.json");
  if (!out)
    throw Error("cannot write manifest into '" + out_dir.string() + "'");
  out << manifest.dump(2) << '\n';
  return manifest;
}

} // namespace pdest
