#include "doctest.h"
#include "oracles.hpp"

#include "pdest/io.hpp"

#include <filesystem>
#include <fstream>

using namespace pdest;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const auto p = fs::temp_directory_path() / ("pdest_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& s)
{
  std::ofstream(p) << s;
}

} // namespace

TEST_CASE("diagram CSV round trip is exact")
{
  const auto dir = scratch("diag");
  Rng rng(1);
  const auto d = oracle::random_diagram(rng, 25, 1.0);
  write_diagram_csv(dir / "d.csv", d);
  const auto back = read_diagram_csv(dir / "d.csv", OmegaBox(1.0));
  CHECK(back.pairs() == d.pairs());
  fs::remove_all(dir);
}

TEST_CASE("diagram CSV validation")
{
  const auto dir = scratch("bad");
  write_text(dir / "h.csv", "b,d,dim\n0.1,0.2,1\n");
  CHECK_THROWS_AS(read_diagram_csv(dir / "h.csv", OmegaBox(1.0)), ParseError);
  write_text(dir / "n.csv", "birth,death,dim\n0.1,abc,1\n");
  CHECK_THROWS_AS(read_diagram_csv(dir / "n.csv", OmegaBox(1.0)), ParseError);
  write_text(dir / "o.csv", "birth,death,dim\n0.1,1.5,1\n");
  CHECK_THROWS_AS(read_diagram_csv(dir / "o.csv", OmegaBox(1.0)), Error);
  write_text(dir / "f.csv", "birth,death,dim\n0.1,0.5,1.5\n");
  CHECK_THROWS_AS(read_diagram_csv(dir / "f.csv", OmegaBox(1.0)), ParseError);
  CHECK_THROWS_AS(read_diagram_csv(dir / "missing.csv", OmegaBox(1.0)), Error);
  fs::remove_all(dir);
}

TEST_CASE("samples from a directory and from JSON")
{
  const auto dir = scratch("sample");
  Rng rng(2);
  std::vector<PersistenceDiagram> ds;
  for (int k = 0; k < 3; ++k)
    ds.push_back(oracle::random_diagram(rng, 4 + k, 2.0));
  const DiagramSample s(ds, OmegaBox(2.0));
  fs::create_directories(dir / "csv");
  for (int k = 0; k < 3; ++k)
    write_diagram_csv(dir / "csv" / ("d" + std::to_string(k) + ".csv"), ds[k]);
  const auto a = read_sample(dir / "csv", OmegaBox(2.0));
  write_sample_json(dir / "s.json", s);
  const auto b = read_sample(dir / "s.json", OmegaBox(2.0));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(a[k].pairs() == ds[k].pairs());
    CHECK(b[k].pairs() == ds[k].pairs());
  }
  CHECK_THROWS_AS(read_sample(dir / "s.json", OmegaBox(3.0)), Error);
  // a pair beyond L is rejected rather than clipped
  CHECK_THROWS_AS(read_sample(dir / "csv", OmegaBox(0.5)), Error);
  fs::remove_all(dir);
}

TEST_CASE("point and field CSV round trips")
{
  const auto dir = scratch("pf");
  const PointCloud c3({{0.5, 1.25, -3.0}, {1e-300, 2.0, 7.0}});
  write_point_csv(dir / "p.csv", c3);
  const auto back = read_point_csv(dir / "p.csv");
  CHECK(back.ambient_dim() == 3);
  CHECK(back.flat() == c3.flat());

  Rng rng(3);
  const auto grid = GridShape{-0.25, 0.125, 0.1, 7, 5};
  const auto f = oracle::random_bump_field(rng, GridShape::covering(1.0, 9));
  write_field_csv(dir / "f.csv", f);
  const auto g = read_field_csv(dir / "f.csv");
  CHECK(g.shape() == f.shape());
  CHECK(g.values() == f.values());
  ScalarField odd(grid, 1.0 / 3.0);
  write_field_csv(dir / "o.csv", odd);
  CHECK(read_field_csv(dir / "o.csv").values() == odd.values());
  CHECK(read_field_csv(dir / "o.csv").shape() == grid);
  write_text(dir / "bad.csv", "# 0,0,1,2,2\n1,2\n3\n");
  CHECK_THROWS_AS(read_field_csv(dir / "bad.csv"), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("curve CSV layout")
{
  const auto dir = scratch("curve");
  BettiCurve c;
  c.x = {0.0, 0.5};
  c.mean = {1.0, 2.0};
  c.lower = {0.5, 1.5};
  c.upper = {1.5, 2.5};
  write_curve_csv(dir / "c.csv", c);
  std::ifstream in(dir / "c.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "x,mean,q_lo,q_hi");
  CHECK(row == "0,1,0.5,1.5");
  fs::remove_all(dir);
}
