#include "pdest/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdest {

namespace {

double leg_cost(Point2 x, Point2 y, double q)
{
  const double db = x.birth - y.birth;
  const double dd = x.death - y.death;
  return std::pow(std::sqrt(db * db + dd * dd), q);
}

void check_q(double q)
{
  if (!(q >= 1.0 && q <= 16.0))
    throw InvalidQ("transport order q must lie in [1, 16]");
}

// Dense transportation problem between (a atoms + diagonal) and
// (b atoms + diagonal), solved by successive shortest augmenting paths.
class DiagonalTransport
{
public:
  DiagonalTransport(std::span<const Atom> a, std::span<const Atom> b, double q)
    : a_(a), b_(b), q_(q), rows_(a.size() + 1), cols_(b.size() + 1),
      cost_(rows_ * cols_, 0.0), flow_(rows_ * cols_, 0.0),
      supply_(rows_, 0.0), demand_(cols_, 0.0)
  {
    double mass_a = 0.0;
    double mass_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      supply_[i] = a[i].mass;
      mass_a += a[i].mass;
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      demand_[j] = b[j].mass;
      mass_b += b[j].mass;
    }
    supply_[a.size()] = mass_b;
    demand_[b.size()] = mass_a;
    eps_ = 1e-13 * std::max(1.0, mass_a + mass_b);

    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j)
        cost(i, j) = leg_cost(a[i].at, b[j].at, q);
      cost(i, b.size()) = std::pow(diag_distance(a[i].at), q);
    }
    for (std::size_t j = 0; j < b.size(); ++j)
      cost(a.size(), j) = std::pow(diag_distance(b[j].at), q);
  }

  TransportPlan solve()
  {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> pot_s(rows_, 0.0), pot_t(cols_, 0.0);
    std::vector<double> dist_s(rows_), dist_t(cols_);
    std::vector<char> done_s(rows_), done_t(cols_);
    std::vector<long> parent_s(rows_), parent_t(cols_);

    for (;;) {
      std::fill(dist_s.begin(), dist_s.end(), inf);
      std::fill(dist_t.begin(), dist_t.end(), inf);
      std::fill(done_s.begin(), done_s.end(), 0);
      std::fill(done_t.begin(), done_t.end(), 0);
      bool any = false;
      for (std::size_t i = 0; i < rows_; ++i)
        if (supply_[i] > eps_) {
          dist_s[i] = 0.0;
          parent_s[i] = -1;
          any = true;
        }
      if (!any)
        break;

      long target = -1;
      double reach = 0.0;
      for (;;) {
        // Dense selection of the closest unsettled node.
        double best = inf;
        long best_s = -1, best_t = -1;
        for (std::size_t i = 0; i < rows_; ++i)
          if (!done_s[i] && dist_s[i] < best) {
            best = dist_s[i];
            best_s = static_cast<long>(i);
          }
        for (std::size_t j = 0; j < cols_; ++j)
          if (!done_t[j] && dist_t[j] < best) {
            best = dist_t[j];
            best_t = static_cast<long>(j);
            best_s = -1;
          }
        if (best == inf)
          break;
        if (best_s >= 0) {
          const auto i = static_cast<std::size_t>(best_s);
          done_s[i] = 1;
          const double* c = &cost_[i * cols_];
          for (std::size_t j = 0; j < cols_; ++j) {
            if (done_t[j])
              continue;
            const double rc = std::max(0.0, c[j] + pot_s[i] - pot_t[j]);
            if (best + rc < dist_t[j]) {
              dist_t[j] = best + rc;
              parent_t[j] = static_cast<long>(i);
            }
          }
        } else {
          const auto j = static_cast<std::size_t>(best_t);
          done_t[j] = 1;
          if (demand_[j] > eps_) {
            target = best_t;
            reach = best;
            break;
          }
          for (std::size_t i = 0; i < rows_; ++i) {
            if (done_s[i] || flow_[i * cols_ + j] <= eps_)
              continue;
            const double rc =
              std::max(0.0, -cost_[i * cols_ + j] + pot_t[j] - pot_s[i]);
            if (best + rc < dist_s[i]) {
              dist_s[i] = best + rc;
              parent_s[i] = static_cast<long>(j);
            }
          }
        }
      }
      if (target < 0)
        throw Error("transport solver: no augmenting path (unbalanced input)");

      for (std::size_t i = 0; i < rows_; ++i)
        pot_s[i] += std::min(dist_s[i], reach);
      for (std::size_t j = 0; j < cols_; ++j)
        pot_t[j] += std::min(dist_t[j], reach);

      // Walk back to the originating source to find the bottleneck.
      double push = demand_[static_cast<std::size_t>(target)];
      long j = target;
      long i = parent_t[static_cast<std::size_t>(j)];
      for (;;) {
        const auto ui = static_cast<std::size_t>(i);
        const long back = parent_s[ui];
        if (back < 0) {
          push = std::min(push, supply_[ui]);
          break;
        }
        push = std::min(push, flow_[ui * cols_ + static_cast<std::size_t>(back)]);
        i = parent_t[static_cast<std::size_t>(back)];
      }

      j = target;
      i = parent_t[static_cast<std::size_t>(j)];
      demand_[static_cast<std::size_t>(target)] -= push;
      for (;;) {
        const auto ui = static_cast<std::size_t>(i);
        flow_[ui * cols_ + static_cast<std::size_t>(j)] += push;
        const long back = parent_s[ui];
        if (back < 0) {
          supply_[ui] -= push;
          break;
        }
        flow_[ui * cols_ + static_cast<std::size_t>(back)] -= push;
        j = back;
        i = parent_t[static_cast<std::size_t>(back)];
      }
    }
    return extract_plan();
  }

private:
  double& cost(std::size_t i, std::size_t j) { return cost_[i * cols_ + j]; }

  TransportPlan extract_plan() const
  {
    TransportPlan plan;
    plan.q = q_;
    const std::size_t m = a_.size();
    const std::size_t k = b_.size();
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const double f = flow_[i * cols_ + j];
        if (f <= eps_ || (i == m && j == k))
          continue;
        TransportMove mv;
        mv.mass = f;
        mv.unit_cost = cost_[i * cols_ + j];
        if (i < m) {
          mv.source = static_cast<long>(i);
          mv.from = a_[i].at;
        }
        if (j < k) {
          mv.target = static_cast<long>(j);
          mv.to = b_[j].at;
        }
        if (i == m)
          mv.from = diag_projection(mv.to);
        if (j == k)
          mv.to = diag_projection(mv.from);
        plan.moves.push_back(mv);
      }
    plan.cost = plan.recomputed_cost();
    return plan;
  }

  std::span<const Atom> a_, b_;
  double q_;
  std::size_t rows_, cols_;
  std::vector<double> cost_, flow_, supply_, demand_;
  double eps_ = 0.0;
};

std::vector<Atom> unit_atoms(const PersistenceDiagram& d)
{
  std::vector<Atom> out;
  out.reserve(d.size());
  for (const auto& p : d.pairs())
    out.push_back({p.point(), 1.0});
  return out;
}

} // namespace

double TransportPlan::recomputed_cost() const
{
  std::vector<double> terms;
  terms.reserve(moves.size());
  for (const auto& m : moves)
    terms.push_back(m.mass * m.unit_cost);
  return stable_sum(std::move(terms));
}

OtResult ot_distance(std::span<const Atom> a, std::span<const Atom> b, double q)
{
  check_q(q);
  if (a.size() + b.size() > kSolverLimit)
    throw SolverLimit("transport solver accepts at most " +
                      std::to_string(kSolverLimit) + " atoms in total");
  for (const auto& x : a)
    if (!(x.mass >= 0.0))
      throw NegativeDensity("atom masses must be non-negative");
  for (const auto& x : b)
    if (!(x.mass >= 0.0))
      throw NegativeDensity("atom masses must be non-negative");

  OtResult out;
  out.plan = DiagonalTransport(a, b, q).solve();
  out.distance = std::pow(out.plan.cost, 1.0 / q);
  return out;
}

OtResult ot_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                     double q)
{
  const auto aa = unit_atoms(a);
  const auto bb = unit_atoms(b);
  return ot_distance(std::span<const Atom>(aa), std::span<const Atom>(bb), q);
}

TransportPlan constructed_transport(const ScalarField& p_a,
                                    const ScalarField& p_b, double q)
{
  check_q(q);
  p_a.require_same_geometry(p_b);
  const auto& g = p_a.shape();
  const double area = g.cell * g.cell;
  TransportPlan plan;
  plan.q = q;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double va = p_a.at(i, j);
      const double vb = p_b.at(i, j);
      if (va < 0.0 || vb < 0.0)
        throw NegativeDensity("intensity fields must be non-negative");
      const auto idx = static_cast<long>(j * g.nx + i);
      const Point2 x = g.node(i, j);
      const Point2 proj = diag_projection(x);
      const double stay = std::min(va, vb) * area;
      if (stay > 0.0)
        plan.moves.push_back({idx, idx, x, x, stay, 0.0});
      const double unit = std::pow(diag_distance(x), q);
      if (va > vb)
        plan.moves.push_back({idx, kDiagonal, x, proj, (va - vb) * area, unit});
      else if (vb > va)
        plan.moves.push_back({kDiagonal, idx, proj, x, (vb - va) * area, unit});
    }
  plan.cost = plan.recomputed_cost();
  return plan;
}

double sup_gap_transport_bound(const ScalarField& p_a, const ScalarField& p_b,
                               double q, double L)
{
  p_a.require_same_geometry(p_b);
  double gap = 0.0;
  for (std::size_t k = 0; k < p_a.values().size(); ++k)
    gap = std::max(gap, std::abs(p_a.values()[k] - p_b.values()[k]));
  return omega_weighted_volume(q, L) * gap;
}

std::vector<Atom> discretize_field_to_measure(const ScalarField& field)
{
  const auto& g = field.shape();
  const double area = g.cell * g.cell;
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double v = field.at(i, j);
      if (v < 0.0)
        throw NegativeDensity("cannot discretize a field with negative values");
      if (v > 0.0)
        atoms.push_back({g.node(i, j), v * area});
    }
  return atoms;
}

double grid_tolerance(double cell, double total_mass, double L, double q)
{
  return 3.0 * cell * total_mass * std::pow(L, q - 1.0);
}

} // namespace pdest
