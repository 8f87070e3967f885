#include "pdest/vr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace pdest {

PointCloud::PointCloud(std::vector<std::vector<double>> points)
{
  if (points.empty())
    throw EmptyCloud();
  dim_ = points.front().size();
  if (dim_ < 2 || dim_ > 3)
    throw DimensionMismatch("points must be 2- or 3-dimensional");
  coords_.reserve(points.size() * dim_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim_) {
      std::ostringstream msg;
      msg << "point " << i << " has dimension " << points[i].size()
          << ", expected " << dim_;
      throw DimensionMismatch(msg.str());
    }
    coords_.insert(coords_.end(), points[i].begin(), points[i].end());
  }
}

PointCloud::PointCloud(std::size_t ambient_dim, std::vector<double> flat_coords)
  : dim_(ambient_dim), coords_(std::move(flat_coords))
{
  if (dim_ < 2 || dim_ > 3)
    throw DimensionMismatch("points must be 2- or 3-dimensional");
  if (coords_.size() % dim_ != 0)
    throw DimensionMismatch("coordinate count is not a multiple of dimension");
  if (coords_.empty())
    throw EmptyCloud();
}

double PointCloud::distance(std::size_t i, std::size_t j) const
{
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = coord(i, k) - coord(j, k);
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

double resolve_threshold(const FiltrationSpec& spec, const OmegaBox& box)
{
  if (spec.max_dim < 0 || spec.max_dim > 1)
    throw Error("max_dim must be 0 or 1");
  const double L = box.side_length();
  const double t = spec.max_edge > 0.0 ? spec.max_edge : L;
  if (t > L)
    throw Error("max_edge may not exceed L");
  return t;
}

void add_essential(std::vector<PersistencePair>& out, double birth, int dim,
                   const FiltrationSpec& spec, const OmegaBox& box)
{
  if (spec.cap_essential && birth < box.side_length())
    out.push_back({birth, box.side_length(), dim});
}

void add_finite(std::vector<PersistencePair>& out, double birth, double death,
                int dim)
{
  if (birth < death)
    out.push_back({birth, death, dim});
}

struct UnionFind
{
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n)
  {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x)
  {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // Links the younger root under the elder one; all H0 births are 0, so
  // "elder" reduces to the smaller index.
  bool unite(std::uint32_t a, std::uint32_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (a > b)
      std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

struct Edge
{
  double length;
  std::uint32_t u, v; // u < v
};

bool edge_before(const Edge& a, const Edge& b)
{
  if (a.length != b.length)
    return a.length < b.length;
  if (a.u != b.u)
    return a.u < b.u;
  return a.v < b.v;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }
std::uint64_t choose3(std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; }

// Colexicographic rank of the vertex set {a < b < c}.
std::uint64_t triangle_index(std::uint32_t a, std::uint32_t b, std::uint32_t c)
{
  if (a > b)
    std::swap(a, b);
  if (b > c)
    std::swap(b, c);
  if (a > b)
    std::swap(a, b);
  return choose3(c) + choose2(b) + a;
}

struct Triangle
{
  double diameter;
  std::uint64_t index;

  bool operator==(const Triangle&) const = default;
  // Reversed so std::priority_queue yields the filtration-earliest triangle.
  bool operator<(const Triangle& o) const
  {
    if (diameter != o.diameter)
      return diameter > o.diameter;
    return index > o.index;
  }
};

bool earlier(const Triangle& a, const Triangle& b) { return b < a; }

class RipsComplex
{
public:
  RipsComplex(const PointCloud& cloud, double threshold)
    : n_(cloud.size()), threshold_(threshold), dist_(n_ * n_, 0.0)
  {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = cloud.distance(i, j);
        dist_[i * n_ + j] = d;
        dist_[j * n_ + i] = d;
        if (d <= threshold_)
          edges_.push_back({d, static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(j)});
      }
    std::sort(edges_.begin(), edges_.end(), edge_before);
  }

  std::size_t vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  template <typename Visit>
  void for_each_cofacet(const Edge& e, Visit&& visit) const
  {
    const double* du = &dist_[e.u * n_];
    const double* dv = &dist_[e.v * n_];
    for (std::uint32_t k = 0; k < n_; ++k) {
      if (k == e.u || k == e.v)
        continue;
      const double a = du[k];
      const double b = dv[k];
      if (a > threshold_ || b > threshold_)
        continue;
      visit(Triangle{std::max({e.length, a, b}), triangle_index(e.u, e.v, k)});
    }
  }

private:
  std::size_t n_;
  double threshold_;
  std::vector<double> dist_;
  std::vector<Edge> edges_;
};

using TriangleHeap = std::priority_queue<Triangle>;

std::optional<Triangle> pop_pivot(TriangleHeap& heap)
{
  while (!heap.empty()) {
    const Triangle t = heap.top();
    heap.pop();
    if (!heap.empty() && heap.top() == t) {
      heap.pop();
      continue;
    }
    heap.push(t);
    return t;
  }
  return std::nullopt;
}

} // namespace

PersistenceDiagram rips_persistence(const PointCloud& cloud,
                                    const FiltrationSpec& spec,
                                    const OmegaBox& box)
{
  const double threshold = resolve_threshold(spec, box);
  const RipsComplex complex(cloud, threshold);
  const auto& edges = complex.edges();
  std::vector<PersistencePair> out;

  // H0 and the clearing set for H1.
  UnionFind components(complex.vertex_count());
  std::vector<char> tree_edge(edges.size(), 0);
  std::size_t merges = 0;
  for (std::size_t r = 0; r < edges.size(); ++r) {
    if (components.unite(edges[r].u, edges[r].v)) {
      tree_edge[r] = 1;
      ++merges;
      add_finite(out, 0.0, edges[r].length, 0);
    }
  }
  for (std::size_t c = 0; c < complex.vertex_count() - merges; ++c)
    add_essential(out, 0.0, 0, spec, box);

  if (spec.max_dim >= 1) {
    std::unordered_map<std::uint64_t, std::uint32_t> pivot_owner;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> reduction;
    pivot_owner.reserve(edges.size());

    for (std::size_t rr = edges.size(); rr-- > 0;) {
      if (tree_edge[rr])
        continue;
      const Edge& e = edges[rr];
      const auto r = static_cast<std::uint32_t>(rr);

      std::optional<Triangle> pivot;
      complex.for_each_cofacet(e, [&](const Triangle& t) {
        if (!pivot || earlier(t, *pivot))
          pivot = t;
      });

      if (pivot && pivot_owner.count(pivot->index)) {
        // Slow path: materialize the coboundary and reduce.
        TriangleHeap heap;
        std::vector<std::uint32_t> column{r};
        complex.for_each_cofacet(e, [&](const Triangle& t) { heap.push(t); });
        pivot = pop_pivot(heap);
        while (pivot) {
          const auto owner = pivot_owner.find(pivot->index);
          if (owner == pivot_owner.end())
            break;
          const std::uint32_t other = owner->second;
          std::vector<std::uint32_t> other_column{other};
          if (const auto it = reduction.find(other); it != reduction.end())
            other_column.insert(other_column.end(), it->second.begin(),
                                it->second.end());
          for (std::uint32_t c : other_column) {
            complex.for_each_cofacet(edges[c],
                                     [&](const Triangle& t) { heap.push(t); });
            column.push_back(c);
          }
          pivot = pop_pivot(heap);
        }
        if (pivot) {
          std::sort(column.begin() + 1, column.end());
          std::vector<std::uint32_t> extra;
          for (std::size_t i = 1; i < column.size();) {
            std::size_t j = i;
            while (j < column.size() && column[j] == column[i])
              ++j;
            if ((j - i) % 2 == 1)
              extra.push_back(column[i]);
            i = j;
          }
          if (!extra.empty())
            reduction.emplace(r, std::move(extra));
        }
      }

      if (pivot) {
        pivot_owner.emplace(pivot->index, r);
        add_finite(out, e.length, pivot->diameter, 1);
      } else {
        add_essential(out, e.length, 1, spec, box);
      }
    }
  }

  std::sort(out.begin(), out.end());
  return PersistenceDiagram(std::move(out), box);
}

PersistenceDiagram rips_persistence_oracle(const PointCloud& cloud,
                                           const FiltrationSpec& spec,
                                           const OmegaBox& box)
{
  const double threshold = resolve_threshold(spec, box);
  const std::size_t n = cloud.size();
  if (n > 8)
    throw TooLarge("the reference reduction accepts at most 8 points");

  struct Simplex
  {
    double value;
    std::vector<std::size_t> vertices;
  };
  std::vector<Simplex> simplices;
  for (std::size_t i = 0; i < n; ++i)
    simplices.push_back({0.0, {i}});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cloud.distance(i, j) <= threshold)
        simplices.push_back({cloud.distance(i, j), {i, j}});
  if (spec.max_dim >= 1)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const double v = std::max(
            {cloud.distance(i, j), cloud.distance(i, k), cloud.distance(j, k)});
          if (v <= threshold)
            simplices.push_back({v, {i, j, k}});
        }

  std::sort(simplices.begin(), simplices.end(),
            [](const Simplex& a, const Simplex& b) {
              if (a.value != b.value)
                return a.value < b.value;
              if (a.vertices.size() != b.vertices.size())
                return a.vertices.size() < b.vertices.size();
              return a.vertices < b.vertices;
            });

  const std::size_t m = simplices.size();
  std::vector<std::vector<std::size_t>> boundary(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& vs = simplices[c].vertices;
    if (vs.size() < 2)
      continue;
    for (std::size_t drop = 0; drop < vs.size(); ++drop) {
      std::vector<std::size_t> face;
      for (std::size_t t = 0; t < vs.size(); ++t)
        if (t != drop)
          face.push_back(vs[t]);
      for (std::size_t r = 0; r < c; ++r)
        if (simplices[r].vertices == face) {
          boundary[c].push_back(r);
          break;
        }
    }
    std::sort(boundary[c].begin(), boundary[c].end());
  }

  // Standard left-to-right reduction over Z/2.
  std::vector<long> low_owner(m, -1);
  std::vector<char> paired(m, 0);
  std::vector<PersistencePair> out;
  for (std::size_t c = 0; c < m; ++c) {
    auto& col = boundary[c];
    while (!col.empty() && low_owner[col.back()] >= 0) {
      const auto& other = boundary[static_cast<std::size_t>(low_owner[col.back()])];
      std::vector<std::size_t> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                    other.end(), std::back_inserter(sum));
      col = std::move(sum);
    }
    if (!col.empty()) {
      const std::size_t low = col.back();
      low_owner[low] = static_cast<long>(c);
      paired[low] = paired[c] = 1;
      const int dim = static_cast<int>(simplices[low].vertices.size()) - 1;
      add_finite(out, simplices[low].value, simplices[c].value, dim);
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    const int dim = static_cast<int>(simplices[c].vertices.size()) - 1;
    if (!paired[c] && dim <= spec.max_dim)
      add_essential(out, simplices[c].value, dim, spec, box);
  }

  std::sort(out.begin(), out.end());
  return PersistenceDiagram(std::move(out), box);
}

DiagramSample batch_rips(const std::vector<PointCloud>& clouds,
                         const FiltrationSpec& spec, const OmegaBox& box)
{
  if (clouds.empty())
    throw Error("batch_rips: no point clouds");
  std::vector<PersistenceDiagram> diagrams;
  diagrams.reserve(clouds.size());
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    try {
      diagrams.push_back(rips_persistence(clouds[i], spec, box));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "cloud " << i << ": " << e.what();
      throw Error(msg.str());
    }
  }
  return {std::move(diagrams), box};
}

} // namespace pdest
