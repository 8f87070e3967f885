#include "doctest.h"
#include "oracles.hpp"

#include "pdest/core.hpp"
#include "pdest/random.hpp"

#include <cmath>

using namespace pdest;

TEST_CASE("box rejects non-positive side length")
{
  CHECK_THROWS_AS(OmegaBox(0.0), Error);
  CHECK_THROWS_AS(OmegaBox(-1.0), Error);
  CHECK_THROWS_AS(OmegaBox(std::nan("")), Error);
}

TEST_CASE("box membership is 0 <= b < d <= L")
{
  const OmegaBox box(2.0);
  CHECK(box.contains(0.0, 2.0));
  CHECK(box.contains(0.0, 1e-9));
  CHECK_FALSE(box.contains(-1e-12, 1.0));
  CHECK_FALSE(box.contains(1.0, 1.0));
  CHECK_FALSE(box.contains(1.5, 1.0));
  CHECK_FALSE(box.contains(0.5, 2.0 + 1e-12));
}

TEST_CASE("diagram drops zero-persistence pairs and rejects points outside the box")
{
  const OmegaBox box(1.0);
  const PersistenceDiagram d({{0.1, 0.4, 1}, {0.3, 0.3, 1}, {0.0, 1.0, 0}}, box);
  CHECK(d.size() == 2);
  CHECK_THROWS_AS(PersistenceDiagram({{0.1, 1.5, 1}}, box), Error);
  CHECK_THROWS_AS(PersistenceDiagram({{0.5, 0.2, 1}}, box), Error);
  CHECK_THROWS_AS(PersistenceDiagram({{0.1, 0.2, -1}}, box), Error);
  CHECK_THROWS_AS(PersistenceDiagram({{0.1, std::nan(""), 1}}, box), Error);
}

TEST_CASE("restriction and concatenation")
{
  const OmegaBox box(1.0);
  const PersistenceDiagram a({{0.1, 0.4, 1}, {0.0, 0.2, 0}}, box);
  const PersistenceDiagram b({{0.2, 0.9, 1}}, box);
  CHECK(a.restricted_to(1).size() == 1);
  CHECK(a.restricted_to(0).pairs().front().death == 0.2);
  const auto c = a.concatenated(b);
  CHECK(c.size() == 3);
  CHECK_THROWS_AS(a.concatenated(PersistenceDiagram(OmegaBox(2.0))), Error);

  const DiagramSample s({a, PersistenceDiagram(box), b}, box);
  std::size_t dropped = 0;
  const auto kept = s.without_empty(&dropped);
  CHECK(dropped == 1);
  CHECK(kept.size() == 2);
  CHECK_THROWS_AS(DiagramSample({}, box), Error);
  CHECK_THROWS_AS(DiagramSample({PersistenceDiagram(box)}, box).without_empty(), Error);
}

TEST_CASE("diagonal distance and projection agree with a numerical search")
{
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Point2 p{rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0)};
    double t = 0.0;
    const double dist = oracle::diagonal_distance_search(p, &t);
    CHECK(diag_distance(p) == doctest::Approx(dist).epsilon(1e-9));
    const Point2 proj = diag_projection(p);
    CHECK(proj.birth == proj.death);
    CHECK(proj.birth == doctest::Approx(t).epsilon(1e-7));
  }
}

TEST_CASE("stable_sum is independent of term order")
{
  Rng rng(3);
  std::vector<double> v;
  for (int k = 0; k < 1000; ++k)
    v.push_back(std::pow(rng.uniform(), 5.0) * 1e3);
  const double s = stable_sum(v);
  std::reverse(v.begin(), v.end());
  CHECK(stable_sum(v) == s);
  CHECK(stable_sum({}) == 0.0);
}

TEST_CASE("total persistence equals the direct sum of distances")
{
  const OmegaBox box(1.0);
  const PersistenceDiagram d({{0.0, 0.5, 1}, {0.2, 0.3, 1}}, box);
  const double expect = std::pow(0.5 / std::sqrt(2.0), 2.0) +
                        std::pow(0.1 / std::sqrt(2.0), 2.0);
  CHECK(total_persistence(d, 2.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(total_persistence(PersistenceDiagram(box), 1.0) == 0.0);
  CHECK_THROWS_AS(total_persistence(d, 0.0), Error);
}

TEST_CASE("mass above a level never exceeds the Markov-type bound")
{
  Rng rng(5);
  std::size_t violations = 0;
  for (int k = 0; k < 300; ++k) {
    const auto d = oracle::random_diagram(rng, 1 + rng.next() % 20, 1.0);
    for (double q : {0.5, 1.0, 2.0, 3.0})
      for (double ell : {0.01, 0.05, 0.1, 0.2, 0.4, 0.7}) {
        const double bound = total_persistence(d, q) * std::pow(ell, -q);
        if (static_cast<double>(mass_above(d, ell)) > bound)
          ++violations;
      }
  }
  CHECK(violations == 0);
}

TEST_CASE("mass_above counts points at distance >= ell")
{
  const OmegaBox box(1.0);
  const PersistenceDiagram d({{0.0, 1.0, 1}, {0.0, 0.5, 1}}, box);
  CHECK(mass_above(d, 0.5 / std::sqrt(2.0)) == 2);
  CHECK(mass_above(d, 0.6) == 1);
  CHECK(mass_above(d, 0.8) == 0);
}

TEST_CASE("weighted volume of Omega matches quadrature")
{
  for (double q : {0.5, 1.0, 2.0, 3.0})
    for (double L : {0.5, 1.0, 2.0}) {
      const double quad = oracle::omega_volume_quadrature(q, L);
      CHECK(std::abs(omega_weighted_volume(q, L) - quad) <= 1e-6 * quad);
    }
  CHECK(omega_weighted_volume(0.0, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(omega_weighted_volume(-1.0, 1.0), Error);
  CHECK_THROWS_AS(omega_weighted_volume(1.0, 0.0), Error);
}

TEST_CASE("projection is idempotent")
{
  Rng rng(12);
  for (int k = 0; k < 500; ++k) {
    const Point2 p{rng.uniform(0.0, 7.0), rng.uniform(0.0, 7.0)};
    const Point2 once = diag_projection(p);
    CHECK(diag_projection(once) == once);
  }
}

TEST_CASE("total persistence is additive and homogeneous")
{
  Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto a = oracle::random_diagram(rng, 1 + rng.next() % 10, 1.0);
    const auto b = oracle::random_diagram(rng, 1 + rng.next() % 10, 1.0);
    const double q = rng.uniform(0.5, 3.0);
    CHECK(total_persistence(a.concatenated(b), q) ==
          doctest::Approx(total_persistence(a, q) + total_persistence(b, q)).epsilon(1e-13));
    const double c = rng.uniform(0.2, 5.0);
    std::vector<PersistencePair> scaled;
    for (const auto& p : a.pairs())
      scaled.push_back({c * p.birth, c * p.death, p.dim});
    const PersistenceDiagram as(std::move(scaled), OmegaBox(c));
    CHECK(total_persistence(as, q) ==
          doctest::Approx(std::pow(c, q) * total_persistence(a, q)).epsilon(1e-12));
  }
}
