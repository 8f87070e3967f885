// Command-line front end: one subcommand per library operation.

#include "pdest/core.hpp"
#include "pdest/generators.hpp"
#include "pdest/harness.hpp"
#include "pdest/io.hpp"
#include "pdest/kde.hpp"
#include "pdest/repr.hpp"
#include "pdest/transport.hpp"
#include "pdest/vr.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdest;

namespace {

void emit_json(const json& j, const std::string& out)
{
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw Error("cannot write '" + out + "'");
  f << j.dump(2) << '\n';
}

std::string cloud_name(std::size_t i)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "cloud_%04zu.csv", i);
  return buf;
}

// Options shared by every subcommand that builds a kernel estimate.
struct EstimateArgs
{
  std::string sample;
  double L = 0.0;
  double h = 0.0;
  std::string kernel = "epanechnikov";
  std::size_t grid = 128;
  int dim = -1;

  void add_to(CLI::App* app, bool need_h)
  {
    app->add_option("--sample", sample, "Directory of diagram CSVs or sample JSON")
      ->required();
    app->add_option("--L", L, "Side length of the diagram domain")->required();
    auto* hopt = app->add_option("--h", h, "Kernel bandwidth");
    if (need_h)
      hopt->required();
    app->add_option("--kernel", kernel, "epanechnikov or quartic");
    app->add_option("--grid", grid, "Grid nodes per side");
    app->add_option("--dim", dim, "Keep only pairs of this homology dimension");
  }

  DiagramSample load() const
  {
    DiagramSample s = read_sample(sample, OmegaBox(L));
    return dim >= 0 ? s.restricted_to(dim) : s;
  }

  KernelSpec kernel_spec() const { return KernelSpec(parse_kernel_family(kernel), h); }
  GridShape grid_shape() const { return GridShape::covering(L, grid); }
};

BettiMode parse_mode(const std::string& s)
{
  if (s == "raw")
    return BettiMode::raw;
  if (s == "normalized")
    return BettiMode::normalized;
  throw Error("unknown mode '" + s + "'");
}

EmptyDiagramPolicy policy_of(bool skip_empty)
{
  return skip_empty ? EmptyDiagramPolicy::skip : EmptyDiagramPolicy::strict;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Estimate distributions of persistence diagrams"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // vr
  auto* vr = app.add_subcommand("vr", "Vietoris-Rips persistence of a point cloud");
  std::string vr_in, vr_out;
  FiltrationSpec vr_spec;
  double vr_L = 0.0;
  vr->add_option("--input", vr_in, "Point CSV (x,y[,z])")->required();
  vr->add_option("--max-dim", vr_spec.max_dim, "Highest homology dimension (0 or 1)");
  vr->add_option("--L", vr_L, "Side length of the diagram domain")->required();
  vr->add_option("--max-edge", vr_spec.max_edge, "Edge-length cap (defaults to L)");
  vr->add_flag("--cap-essential", vr_spec.cap_essential,
               "Report classes alive at the cap with death L");
  vr->add_option("--output", vr_out, "Diagram CSV")->required();

  // gen-orbit
  auto* orbit = app.add_subcommand("gen-orbit", "Linked twist map orbits");
  OrbitSpec orbit_spec;
  std::size_t orbit_clouds = 1;
  std::uint64_t orbit_seed = 0;
  std::string orbit_out;
  orbit->add_option("--r", orbit_spec.r, "Twist parameter");
  orbit->add_option("--n-points", orbit_spec.n_points, "Points per orbit");
  orbit->add_option("--n-clouds", orbit_clouds, "Number of orbits");
  orbit->add_option("--seed", orbit_seed, "Seed");
  orbit->add_option("--out", orbit_out, "Output directory")->required();

  // gen-circle
  auto* circle = app.add_subcommand("gen-circle", "Noisy samples of the unit circle");
  CircleSpec circle_spec;
  std::string circle_dist = "uniform";
  std::size_t circle_clouds = 1;
  std::uint64_t circle_seed = 0;
  std::string circle_out;
  circle->add_option("--dist", circle_dist, "uniform or power");
  circle->add_option("--mu", circle_spec.mu_angle, "Mean direction (radians)");
  circle->add_option("--kappa", circle_spec.kappa, "Concentration");
  circle->add_option("--noise-sd", circle_spec.noise_sd, "Gaussian noise sd");
  circle->add_option("--n-points", circle_spec.n_points, "Points per cloud");
  circle->add_option("--n-clouds", circle_clouds, "Number of clouds");
  circle->add_option("--seed", circle_seed, "Seed");
  circle->add_option("--out", circle_out, "Output directory")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Kernel estimate of the intensity or density");
  EstimateArgs est_args;
  std::string est_mode = "intensity", est_out;
  bool est_skip = false;
  est_args.add_to(est, true);
  est->add_option("--mode", est_mode, "intensity or density");
  est->add_flag("--skip-empty", est_skip, "Drop empty diagrams instead of failing");
  est->add_option("--out", est_out, "Field CSV")->required();

  // betti
  auto* betti = app.add_subcommand("betti", "(Persistent) Betti number");
  EstimateArgs betti_args;
  std::string betti_mode = "raw", betti_source = "empirical";
  bool betti_skip = false;
  double betti_x = 0.0;
  double betti_x2 = -1.0;
  betti_args.add_to(betti, false);
  betti->add_option("--mode", betti_mode, "raw or normalized");
  betti->add_option("--source", betti_source, "empirical or field");
  betti->add_option("--x", betti_x, "Scale (birth threshold)")->required();
  betti->add_option("--x2", betti_x2, "Death threshold for persistent Betti numbers");
  betti->add_flag("--skip-empty", betti_skip, "Drop empty diagrams instead of failing");

  // betti-curve
  auto* curve = app.add_subcommand("betti-curve", "Betti curve with quantile bands");
  EstimateArgs curve_args;
  std::string curve_mode = "raw", curve_out;
  bool curve_skip = false;
  std::size_t curve_res = 256;
  std::vector<double> curve_q = {0.05, 0.95};
  curve_args.add_to(curve, false);
  curve->add_option("--mode", curve_mode, "raw or normalized");
  curve->add_option("--resolution", curve_res, "Number of scales");
  curve->add_option("--quantiles", curve_q, "Lower,upper band levels")
    ->delimiter(',')
    ->expected(2);
  curve->add_flag("--skip-empty", curve_skip, "Drop empty diagrams instead of failing");
  curve->add_option("--out", curve_out, "Curve CSV")->required();

  // surface
  auto* surf = app.add_subcommand("surface", "Persistence surface");
  EstimateArgs surf_args;
  double surf_q = 1.0;
  std::string surf_out;
  surf_args.add_to(surf, true);
  surf->add_option("--q", surf_q, "Weight exponent");
  surf->add_option("--out", surf_out, "Field CSV")->required();

  // ot
  auto* ot = app.add_subcommand("ot", "Optimal transport distance between two diagrams");
  double ot_q = 2.0;
  double ot_L = 0.0;
  std::string ot_a, ot_b;
  ot->add_option("--q", ot_q, "Transport order");
  ot->add_option("--L", ot_L, "Side length of the diagram domain (defaults to the data range)");
  ot->add_option("a", ot_a, "First diagram CSV")->required();
  ot->add_option("b", ot_b, "Second diagram CSV")->required();

  // ot-bound
  auto* otb = app.add_subcommand("ot-bound", "Transport between two intensity fields vs the sup-gap bound");
  double otb_q = 1.0, otb_L = 1.0;
  std::string otb_a, otb_b;
  otb->add_option("--q", otb_q, "Transport order");
  otb->add_option("--L", otb_L, "Side length of the diagram domain");
  otb->add_option("a", otb_a, "First field CSV")->required();
  otb->add_option("b", otb_b, "Second field CSV")->required();

  // converge
  auto* conv = app.add_subcommand("converge", "Convergence-rate study");
  std::string conv_config, conv_out;
  conv->add_option("--config", conv_config, "Config JSON")->required();
  conv->add_option("--out", conv_out, "Report JSON (stdout if omitted)");

  // repro
  auto* repro = app.add_subcommand("repro", "Reproduce figure data for a named setup");
  FigureOptions fig;
  std::string fig_setup, fig_out, fig_kernel = "epanechnikov";
  repro->add_option("--setup", fig_setup,
                    "orbit_r25, orbit_r40, circle_uniform or circle_power")
    ->required();
  repro->add_option("--n", fig.n_samples, "Number of point clouds");
  repro->add_option("--n-points", fig.n_points, "Points per cloud");
  repro->add_option("--seed", fig.seed, "Seed");
  repro->add_option("--dim", fig.dim, "Homology dimension");
  repro->add_option("--L", fig.L, "Side length (default 1 for orbits, 2 for circles)");
  repro->add_option("--h", fig.h, "Bandwidth (default L/20)");
  repro->add_option("--kernel", fig_kernel, "epanechnikov or quartic");
  repro->add_option("--grid", fig.grid_nodes, "Grid nodes per side");
  repro->add_option("--resolution", fig.curve_resolution, "Betti curve scales");
  repro->add_option("--out", fig_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (vr->parsed()) {
      const OmegaBox box(vr_L);
      const auto d = rips_persistence(read_point_csv(vr_in), vr_spec, box);
      write_diagram_csv(vr_out, d);
    } else if (orbit->parsed()) {
      fs::create_directories(orbit_out);
      for (std::size_t i = 0; i < orbit_clouds; ++i) {
        orbit_spec.seed = Rng::stream(orbit_seed, i).next();
        write_point_csv(fs::path(orbit_out) / cloud_name(i), gen_orbit(orbit_spec));
      }
    } else if (circle->parsed()) {
      if (circle_dist == "uniform")
        circle_spec.distribution = CircleDistribution::uniform;
      else if (circle_dist == "power" || circle_dist == "power_spherical")
        circle_spec.distribution = CircleDistribution::power_spherical;
      else
        throw Error("unknown circle distribution '" + circle_dist + "'");
      fs::create_directories(circle_out);
      for (std::size_t i = 0; i < circle_clouds; ++i) {
        circle_spec.seed = Rng::stream(circle_seed, i).next();
        write_point_csv(fs::path(circle_out) / cloud_name(i), gen_circle(circle_spec));
      }
    } else if (est->parsed()) {
      const auto sample = est_args.load();
      ScalarField field(est_args.grid_shape());
      if (est_mode == "intensity") {
        field = estimate_intensity(sample, est_args.kernel_spec(), est_args.grid_shape());
      } else if (est_mode == "density") {
        std::size_t dropped = 0;
        field = estimate_density(sample, est_args.kernel_spec(), est_args.grid_shape(),
                                 policy_of(est_skip), &dropped);
        if (dropped)
          std::cerr << "skipped " << dropped << " empty diagrams\n";
      } else {
        throw Error("unknown mode '" + est_mode + "'");
      }
      write_field_csv(est_out, field);
    } else if (betti->parsed()) {
      const auto sample = betti_args.load();
      const BettiQuery query = betti_x2 < 0.0
                                 ? BettiQuery::at(betti_x)
                                 : BettiQuery::persistent(betti_x, betti_x2);
      const BettiMode mode = parse_mode(betti_mode);
      const EmptyDiagramPolicy policy = policy_of(betti_skip);
      double value = 0.0;
      if (betti_source == "empirical") {
        value = betti_empirical(sample, query, mode, policy);
      } else if (betti_source == "field") {
        if (!(betti_args.h > 0.0))
          throw Error("--source field needs --h");
        const ScalarField field =
          mode == BettiMode::raw
            ? estimate_intensity(sample, betti_args.kernel_spec(), betti_args.grid_shape())
            : estimate_density(sample, betti_args.kernel_spec(),
                               betti_args.grid_shape(), policy);
        value = betti_from_field(field, query);
      } else {
        throw Error("unknown source '" + betti_source + "'");
      }
      std::cout << json{{"betti", value}, {"x1", query.x1}, {"x2", query.x2}}.dump()
                << '\n';
    } else if (curve->parsed()) {
      const auto sample = curve_args.load();
      const auto c = betti_curve(sample, parse_mode(curve_mode), curve_res,
                                 curve_q[0], curve_q[1], policy_of(curve_skip));
      write_curve_csv(curve_out, c);
    } else if (surf->parsed()) {
      const auto sample = surf_args.load();
      const SurfaceSpec spec{surf_q, surf_args.kernel_spec(), surf_args.grid_shape()};
      write_field_csv(surf_out, persistence_surface(sample, spec));
    } else if (ot->parsed()) {
      // Without --L, any box containing both diagrams gives the same answer.
      double L = ot_L;
      if (!(L > 0.0)) {
        const OmegaBox wide(std::numeric_limits<double>::max());
        L = 0.0;
        for (const auto* p : {&ot_a, &ot_b})
          for (const auto& pr : read_diagram_csv(*p, wide).pairs())
            L = std::max(L, pr.death);
        if (!(L > 0.0))
          L = 1.0;
      }
      const OmegaBox box(L);
      const auto r = ot_distance(read_diagram_csv(ot_a, box),
                                 read_diagram_csv(ot_b, box), ot_q);
      std::cout << json{{"ot", r.distance},
                        {"cost_q", r.plan.cost},
                        {"plan_moves", r.plan.moves.size()}}
                     .dump(2)
                << '\n';
    } else if (otb->parsed()) {
      const ScalarField a = read_field_csv(otb_a);
      const ScalarField b = read_field_csv(otb_b);
      a.require_same_geometry(b);
      const auto ma = discretize_field_to_measure(a);
      const auto mb = discretize_field_to_measure(b);
      const auto exact = ot_distance(std::span<const Atom>(ma), std::span<const Atom>(mb), otb_q);
      const auto plan = constructed_transport(a, b, otb_q);
      const double bound = sup_gap_transport_bound(a, b, otb_q, otb_L);
      const double tol = grid_tolerance(a.shape().cell, a.integral() + b.integral(),
                                        otb_L, otb_q);
      std::cout << json{{"ot_q_q", exact.plan.cost},
                        {"constructed_cost", plan.cost},
                        {"sup_gap_bound", bound},
                        {"tolerances", {{"grid", tol}}},
                        {"holds", exact.plan.cost <= plan.cost + tol &&
                                    plan.cost <= bound + tol}}
                     .dump(2)
                << '\n';
    } else if (conv->parsed()) {
      std::ifstream in(conv_config);
      if (!in)
        throw Error("cannot open '" + conv_config + "'");
      json cfg;
      in >> cfg;
      const auto config = ConvergenceConfig::from_json(cfg);
      const auto report = run_convergence(config);
      json out = report.to_json();
      out["config"] = config.to_json();
      emit_json(out, conv_out);
    } else if (repro->parsed()) {
      fig.setup = parse_figure_setup(fig_setup);
      fig.kernel = parse_kernel_family(fig_kernel);
      const auto manifest = reproduce_figure(fig, fig_out);
      std::cout << manifest.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
