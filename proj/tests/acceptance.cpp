// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path to the pdest CLI binary>

#include "oracles.hpp"

#include "pdest/generators.hpp"
#include "pdest/harness.hpp"
#include "pdest/io.hpp"
#include "pdest/kde.hpp"
#include "pdest/repr.hpp"
#include "pdest/transport.hpp"
#include "pdest/vr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace pdest;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a)
{
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cli_path;

// 1
Outcome vr_oracle_equivalence()
{
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1);
  const OmegaBox box(2.0);
  FiltrationSpec spec;
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const std::size_t dim = trial % 4 == 3 ? 3 : 2;
    std::vector<double> flat;
    for (std::size_t k = 0; k < n * dim; ++k)
      flat.push_back(rng.uniform());
    const PointCloud cloud(dim, std::move(flat));
    spec.cap_essential = trial % 2 == 0;
    if (rips_persistence(cloud, spec, box).sorted_pairs() !=
        rips_persistence_oracle(cloud, spec, box).sorted_pairs())
      ++mismatches;
  }
  const double secs = elapsed(t0);
  return {mismatches == 0 && secs < 30.0,
          std::to_string(mismatches) + " mismatches in 200 clouds, " +
            fmt("%.2f s (limit 30 s)", secs)};
}

// 2
Outcome unit_square_loop()
{
  const PointCloud square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto h1 =
    rips_persistence(square, FiltrationSpec{}, OmegaBox(2.0)).restricted_to(1);
  const bool ok = h1.size() == 1 && h1.pairs()[0].birth == 1.0 &&
                  h1.pairs()[0].death == std::sqrt(2.0);
  return {ok, std::to_string(h1.size()) + " H1 pair(s), expected exactly (1, sqrt 2)"};
}

// 3
Outcome transport_sandwich()
{
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(3);
  const auto grid = GridShape::covering(1.0, 128);
  int failures = 0;
  double worst_rel = 0.0;
  std::size_t max_atoms = 0;
  for (int pair = 0; pair < 20; ++pair) {
    const auto a = oracle::random_bump_field(rng, grid);
    const auto b = oracle::random_bump_field(rng, grid);
    const auto ma = discretize_field_to_measure(a);
    const auto mb = discretize_field_to_measure(b);
    max_atoms = std::max(max_atoms, ma.size() + mb.size());
    for (double q : {1.0, 2.0}) {
      const double exact =
        ot_distance(std::span<const Atom>(ma), std::span<const Atom>(mb), q).plan.cost;
      const double built = constructed_transport(a, b, q).cost;
      const double bound = sup_gap_transport_bound(a, b, q, 1.0);
      const double tol = grid_tolerance(grid.cell, a.integral() + b.integral(), 1.0, q);
      double direct = 0.0;
      for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
          direct += std::abs(a.at(i, j) - b.at(i, j)) *
                    std::pow(diag_distance(grid.node(i, j)), q);
      direct *= grid.cell * grid.cell;
      const double rel = std::abs(built - direct) / direct;
      worst_rel = std::max(worst_rel, rel);
      if (!(exact <= built + tol) || !(built + tol <= bound + tol) || rel > 1e-9)
        ++failures;
    }
  }
  const double secs = elapsed(t0);
  return {failures == 0 && secs < 300.0,
          std::to_string(failures) + " of 40 (pair, q) checks failed, worst cost rel err " +
            fmt("%.1e", worst_rel) + ", up to " + std::to_string(max_atoms) +
            " atoms, " + fmt("%.1f s (limit 300 s)", secs)};
}

// 4
Outcome counterexample_divergence()
{
  bool ok = true;
  std::ostringstream detail;
  for (int n = 1; n <= 6; ++n) {
    const auto pair = gen_counterexample_pair(n, 1.0);
    const auto mu = discretize_field_to_measure(pair.mu);
    const auto nu = discretize_field_to_measure(pair.nu);
    const double ot =
      ot_distance(std::span<const Atom>(mu), std::span<const Atom>(nu), 1.0).distance;
    const double tol = grid_tolerance(pair.mu.shape().cell, 2.0, 1.0, 1.0);
    double gap = 0.0;
    for (std::size_t k = 0; k < pair.mu.values().size(); ++k)
      gap = std::max(gap, std::abs(pair.mu.values()[k] - pair.nu.values()[k]));
    const bool ok_n = ot <= std::pow(0.5, n) + tol && gap == std::pow(4.0, n);
    ok &= ok_n;
    detail << "n=" << n << " OT_1=" << fmt("%.4g", ot) << " gap=" << gap
           << (n < 6 ? "; " : "");
  }
  return {ok, detail.str()};
}

// 5
Outcome transport_brute_force()
{
  Rng rng(5);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t na = rng.next() % 4;
    const std::size_t nb = rng.next() % (7 - na);
    const double q = trial % 2 ? 2.0 : 1.0;
    const auto a = oracle::random_diagram(rng, na, 1.0);
    const auto b = oracle::random_diagram(rng, nb, 1.0);
    std::vector<Point2> pa, pb;
    for (const auto& p : a.pairs())
      pa.push_back(p.point());
    for (const auto& p : b.pairs())
      pb.push_back(p.point());
    if (ot_distance(a, b, q).plan.cost != oracle::brute_force_ot_cost(pa, pb, q))
      ++mismatches;
  }
  int pers_mismatches = 0;
  const PersistenceDiagram empty(OmegaBox(1.0));
  for (int trial = 0; trial < 100; ++trial) {
    const double q = trial % 2 ? 2.0 : 1.0;
    const auto a = oracle::random_diagram(rng, 1 + rng.next() % 40, 1.0);
    if (ot_distance(a, empty, q).plan.cost != total_persistence(a, q))
      ++pers_mismatches;
  }
  return {mismatches == 0 && pers_mismatches == 0,
          std::to_string(mismatches) + "/100 matching mismatches, " +
            std::to_string(pers_mismatches) + "/100 total-persistence mismatches"};
}

// 6
Outcome mass_above_bound()
{
  Rng rng(6);
  int violations = 0, checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = oracle::random_diagram(rng, rng.next() % 50, 1.0);
    for (double q : {0.5, 1.0, 2.0, 3.0})
      for (double ell = 0.005; ell < 0.75; ell *= 1.5) {
        ++checks;
        if (static_cast<double>(mass_above(d, ell)) >
            total_persistence(d, q) * std::pow(ell, -q))
          ++violations;
      }
  }
  return {violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(checks) + " checks"};
}

// 7
Outcome density_normalization()
{
  SyntheticMeasureSpec spec;
  spec.seed = 7;
  const double h = 0.05;
  const auto grid = GridShape::covering(1.0, 128);
  const SyntheticModel model(spec);
  const double margin = model.shape().margin();
  const auto sample = gen_synthetic_sample(spec, 200);
  const auto field = estimate_density(sample, KernelSpec(KernelFamily::epanechnikov2d, h),
                                      grid, EmptyDiagramPolicy::skip);
  const double mass = field.integral();
  return {margin >= h + 2 * grid.cell && mass >= 0.98 && mass <= 1.02,
          fmt("integral %.6f", mass) + fmt(", support margin %.3f", margin)};
}

// 8
Outcome variance_rate()
{
  ConvergenceConfig c;
  c.target = RateTarget::density;
  c.metric = ErrorMetric::variance;
  c.n_values = {100, 400, 1600, 6400};
  c.fixed_h = 0.08;
  c.replicates = 10;
  c.seed = 8;
  c.grid_nodes = 128;
  const auto r = run_convergence(c);
  return {r.fit.slope >= -0.65 && r.fit.slope <= -0.35 && r.fit.r2 >= 0.9 && r.seconds < 600,
          fmt("slope %.3f", r.fit.slope) + fmt(", R^2 %.3f", r.fit.r2) +
            fmt(", %.1f s", r.seconds)};
}

// 9
Outcome bias_rate()
{
  ConvergenceConfig c;
  c.target = RateTarget::density;
  c.metric = ErrorMetric::bias;
  c.h_values = {0.025, 0.05, 0.1, 0.2};
  c.generator.L = 10.0;
  c.grid_nodes = 256;
  const auto r = run_convergence(c);
  return {r.fit.slope >= 1.5 && r.fit.slope <= 2.5 && r.seconds < 300,
          fmt("slope %.3f", r.fit.slope) + fmt(", R^2 %.4f", r.fit.r2) +
            fmt(", %.1f s", r.seconds)};
}

// 10
Outcome kernel_betti_agreement()
{
  SyntheticMeasureSpec spec;
  spec.seed = 10;
  const auto sample = gen_synthetic_sample(spec, 500);
  const double h = 0.02;
  const auto field = estimate_intensity(sample, KernelSpec(KernelFamily::epanechnikov2d, h),
                                        GridShape::covering(1.0, 500));
  std::vector<double> births, deaths;
  for (const auto& d : sample.diagrams())
    for (const auto& p : d.pairs()) {
      births.push_back(p.birth);
      deaths.push_back(p.death);
    }
  auto clear = [&](const std::vector<double>& v, double x) {
    for (double t : v)
      if (std::abs(t - x) < h)
        return false;
    return true;
  };
  // Thresholds at least h from every birth and death coordinate. Points
  // cover a compact region, so clear thresholds sit below all births (low),
  // between the last birth and the first death (mid), or above all deaths
  // (high). Low/mid x1 against mid/high x2 mixes empty and full queries.
  const double max_birth = *std::max_element(births.begin(), births.end());
  const double min_death = *std::min_element(deaths.begin(), deaths.end());
  std::vector<double> low, mid, high;
  for (double x = 0.0025; x < 1.0; x += 0.0025) {
    if (!clear(births, x) || !clear(deaths, x))
      continue;
    (x < max_birth ? low : x < min_death ? mid : high).push_back(x);
  }
  auto spread = [](const std::vector<double>& v, std::size_t from, std::size_t to,
                   std::size_t count, std::vector<double>& out) {
    for (std::size_t k = 0; k < count && to > from; ++k)
      out.push_back(v[from + (to - from - 1) * k / std::max<std::size_t>(count - 1, 1)]);
  };
  std::vector<double> x1s, x2s;
  spread(low, 0, low.size(), 2, x1s);
  spread(mid, 0, mid.size() / 2, 3, x1s);
  spread(mid, mid.size() / 2, mid.size(), 3, x2s);
  spread(high, 0, high.size(), 2, x2s);
  std::vector<BettiQuery> queries;
  for (double a : x1s)
    for (double b : x2s)
      if (a < b)
        queries.push_back(BettiQuery::persistent(a, b));
  int bad = 0, nonzero = 0;
  double worst = 0.0;
  for (const auto& q : queries) {
    const double emp = betti_empirical(sample, q);
    const double gap = std::abs(betti_from_field(field, q) - emp);
    worst = std::max(worst, gap);
    bad += gap > 0.05;
    nonzero += emp > 0;
  }
  return {queries.size() == 25 && bad == 0,
          std::to_string(queries.size()) + " queries (" + std::to_string(nonzero) +
            " with nonzero count), worst gap " + fmt("%.2e", worst)};
}

// 11
std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome figure_reproduction()
{
  if (cli_path.empty())
    return {false, "CLI path not given"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto root = fs::temp_directory_path() / "pdest_acceptance_repro";
  fs::remove_all(root);
  bool ok = true;
  std::ostringstream detail;
  for (const std::string setup : {"orbit_r25", "orbit_r40"}) {
    for (int run = 0; run < 2; ++run) {
      const auto out = root / (setup + "_" + std::to_string(run));
      const std::string cmd = cli_path + " repro --setup " + setup +
                              " --n 100 --n-points 300 --seed 7 --out " + out.string() +
                              " > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        detail << setup << " failed; ";
      }
    }
    const auto a = root / (setup + "_0");
    const auto b = root / (setup + "_1");
    for (const char* f : {"intensity.csv", "density.csv", "betti_raw.csv",
                          "betti_normalized.csv", "diagrams/0099.csv"}) {
      if (!fs::exists(a / f) || slurp(a / f) != slurp(b / f)) {
        ok = false;
        detail << setup << "/" << f << " missing or not reproducible; ";
      }
    }
    // normalized curve: every mean and band value in [0, 1]
    std::ifstream in(a / "betti_normalized.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    double lo = 1.0, hi = 0.0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      std::getline(ss, cell, ',');
      for (int k = 0; k < 3; ++k) {
        std::getline(ss, cell, ',');
        const double v = std::stod(cell);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ++rows;
    }
    if (rows == 0 || lo < 0.0 || hi > 1.0) {
      ok = false;
      detail << setup << " normalized curve out of [0,1]; ";
    }
  }
  const double secs = elapsed(t0);
  ok &= secs < 600.0;
  detail << "4 runs (2 setups x 2 seeds-equal repeats) in " << fmt("%.1f s (limit 600 s)", secs);
  fs::remove_all(root);
  return {ok, detail.str()};
}

// 12
Outcome weighted_volume()
{
  double worst = 0.0;
  for (double q : {0.5, 1.0, 2.0, 3.0})
    for (double L : {0.5, 1.0, 2.0}) {
      const double quad = oracle::omega_volume_quadrature(q, L);
      worst = std::max(worst, std::abs(omega_weighted_volume(q, L) - quad) / quad);
    }
  return {worst <= 1e-6, fmt("worst relative error %.2e (limit 1e-6)", worst)};
}

} // namespace

int main(int argc, char** argv)
{
  if (argc > 1)
    cli_path = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    {"VR fast reduction equals full-matrix oracle", vr_oracle_equivalence},
    {"unit square H1 is exactly (1, sqrt 2)", unit_square_loop},
    {"exact OT <= constructed plan <= sup-gap bound", transport_sandwich},
    {"adjacent-ball pair: OT_1 shrinks, sup gap 4^n", counterexample_divergence},
    {"OT solver equals brute-force matching", transport_brute_force},
    {"mass above ell bounded by Pers_q / ell^q", mass_above_bound},
    {"density estimate integrates to 1", density_normalization},
    {"variance rate in n has slope near -1/2", variance_rate},
    {"bias rate in h has slope near 2", bias_rate},
    {"kernel Betti estimate matches empirical count", kernel_betti_agreement},
    {"orbit figure reproduction", figure_reproduction},
    {"weighted Omega volume matches quadrature", weighted_volume},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << index++ << "] " << name << ": "
              << o.detail << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failed"
                       : std::string("acceptance: all passed"))
            << std::endl;
  return failed ? 1 : 0;
}
