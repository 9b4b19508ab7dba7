#pragma once

// Cell minimisation problems m_F(datum, B_eps(x0)) over Sobolev, piecewise-constant
// and SBV competitors.

#include <cstdint>
#include <vector>

#include "vexfd/energy.hpp"

namespace vexfd {

enum class DatumKind { affine, jump };

struct BoundaryDatum {
  DatumKind kind = DatumKind::affine;
  Point x0{0.0, 0.0};
  Vec u0{0.0};
  Gradient xi{1, 1};
  Vec a{1.0};
  Vec b{0.0};
  Point nu{1.0, 0.0};

  static BoundaryDatum affine(Point x0, Vec u0, Gradient xi) {
    if (u0.size() != xi.m) throw StructuralError("affine datum: u0 and xi disagree on components");
    BoundaryDatum d;
    d.kind = DatumKind::affine;
    d.x0 = x0;
    d.u0 = u0;
    d.xi = xi;
    return d;
  }
  static BoundaryDatum jump(Point x0, Vec a, Vec b, Point nu) {
    if (a.size() != b.size()) throw StructuralError("jump datum: a and b disagree on components");
    BoundaryDatum d;
    d.kind = DatumKind::jump;
    d.x0 = x0;
    d.a = a;
    d.b = b;
    d.nu = nu;
    return d;
  }

  int components() const { return kind == DatumKind::affine ? u0.size() : a.size(); }
  Vec at(const Point& x) const {
    if (kind == DatumKind::jump) return dot(x - x0, nu) > 0.0 ? a : b;
    Vec v = u0;
    for (int i = 0; i < v.size(); ++i)
      for (int k = 0; k < xi.d; ++k) v[i] += xi(i, k) * (x[k] - x0[k]);
    return v;
  }
  Vec zeta() const {
    Vec z(a.size());
    for (int i = 0; i < a.size(); ++i) z[i] = a[i] - b[i];
    return z;
  }
};

enum class CompetitorClass { sobolev, pc, sbv };

inline const char* to_string(CompetitorClass c) {
  switch (c) {
    case CompetitorClass::sobolev: return "sobolev";
    case CompetitorClass::pc: return "pc";
    case CompetitorClass::sbv: return "sbv";
  }
  return "?";
}

struct SolverParams {
  int maxIter = 50;       // alternations of the sbv loop
  int maxSweeps = 20000;  // relaxation sweeps per value solve
  double innerTol = 1e-10;  // max nodal update, relative to the datum scale
  int multistarts = 2;    // random crack sprinklings on top of the canonical starts
  std::uint64_t seed = 1;
  int ringWidth = 1;
  int nodesPerAxis = 64;  // cells per axis across the ball's bounding box
};

struct CellProblem {
  EnergyContext ctx;
  BoundaryDatum datum;
  Point x0{0.0, 0.0};
  double eps = 0.1;
  CompetitorClass cls = CompetitorClass::sbv;
  SolverParams params;
};

struct CellSolution {
  SbvGridFunction minimizer;
  double value = 0.0;
  double normalized = 0.0;
  int iterations = 0;  // relaxation sweeps over all starts
  std::vector<double> energyTrace;  // of the winning start
  std::vector<double> startValues;
  double multistartSpread = 0.0;
  double h = 0.0;
  bool converged = true;
};

struct SolverNonConvergence : NumericError {
  CellSolution best;
  SolverNonConvergence(const std::string& what, CellSolution b) : NumericError(what), best(std::move(b)) {}
};

// Discrete setting of a cell problem: the local grid covering the ball, the
// ball as energy region and the pinned boundary ring.
struct CellSetup {
  Grid grid;
  EnergyContext ctx;
  Region ball;
  std::vector<char> pinned;
  std::vector<int> freeNodes;
  SbvGridFunction datum;  // datum values; for jump data the differing edges are cracked
  double normalizer = 1.0;
};

inline CellSetup make_cell_setup(const CellProblem& pr) {
  const int d = pr.ctx.grid.dim();
  const auto& par = pr.params;
  require(pr.eps > 0.0, "cell problem: eps must be positive");
  require(par.ringWidth >= 1, "cell problem: ring width must be at least 1");
  require(par.nodesPerAxis >= 4, "cell problem: need at least 4 cells per axis");
  const int m = pr.datum.components();
  if (pr.datum.kind == DatumKind::affine && pr.datum.xi.d != d)
    throw StructuralError("cell problem: datum gradient has the wrong dimension");
  if (pr.datum.kind == DatumKind::jump) {
    bool same = true;
    for (int i = 0; i < m; ++i) same = same && pr.datum.a[i] == pr.datum.b[i];
    if (same) throw PreconditionError("cell problem: jump datum needs a != b");
    const Point& nu = pr.datum.nu;
    const bool axis = (std::abs(nu[0]) == 1.0 && nu[1] == 0.0) || (d == 2 && nu[0] == 0.0 && std::abs(nu[1]) == 1.0);
    if (!axis) throw PreconditionError("cell problem: jump normal must be a coordinate direction");
  }
  if (pr.cls == CompetitorClass::pc && pr.datum.kind == DatumKind::affine) {
    for (int q = 0; q < pr.datum.xi.m * pr.datum.xi.d; ++q)
      if (pr.datum.xi.v[q] != 0.0)
        throw PreconditionError("cell problem: the pc class needs a jump datum or a zero gradient");
  }
  const Grid& dom = pr.ctx.grid;
  const double tol = 1e-12 * std::max(1.0, pr.eps);
  for (int k = 0; k < d; ++k) {
    const double lo = dom.origin()[k], hi = lo + dom.cells(k) * dom.h();
    if (pr.x0[k] - pr.eps < lo - tol || pr.x0[k] + pr.eps > hi + tol)
      throw PreconditionError("cell problem: ball leaves the domain");
  }

  CellSetup s;
  const int n = par.nodesPerAxis;
  const double h = 2.0 * pr.eps / n;
  s.grid = d == 1 ? Grid::line(n, h, pr.x0[0] - pr.eps)
                  : Grid::square(n, n, h, {pr.x0[0] - pr.eps, pr.x0[1] - pr.eps});
  s.ctx = pr.ctx.with_grid(s.grid);
  s.ball = Region::ball(pr.x0, pr.eps);
  const Grid& g = s.grid;

  std::vector<int> layer(g.node_count(), -1);
  std::vector<int> frontier;
  // Nodes on the sphere up to rounding count as outside the open ball.
  const double onSphere = pr.eps - 1e-9 * h;
  for (int v = 0; v < g.node_count(); ++v)
    if (distance(g.node_point(v), pr.x0) >= onSphere) {
      layer[v] = 0;
      frontier.push_back(v);
    }
  for (int l = 1; l <= par.ringWidth; ++l) {
    std::vector<int> next;
    for (int v : frontier)
      for (int w : g.neighbours(v))
        if (layer[w] < 0) {
          layer[w] = l;
          next.push_back(w);
        }
    frontier = std::move(next);
  }
  s.pinned.assign(g.node_count(), 0);
  for (int v = 0; v < g.node_count(); ++v) {
    s.pinned[v] = layer[v] >= 0;
    if (!s.pinned[v]) s.freeNodes.push_back(v);
  }

  GridFunction base(g, m);
  for (int v = 0; v < g.node_count(); ++v) base.set(v, pr.datum.at(g.node_point(v)));
  s.datum = SbvGridFunction(std::move(base));
  if (pr.datum.kind == DatumKind::jump)
    for (int e = 0; e < g.edge_count(); ++e) s.datum.set_crack(e, s.datum.jump(e).norm() > 0.0);

  s.normalizer = pr.datum.kind == DatumKind::affine ? unit_ball_measure(d) * std::pow(pr.eps, d)
                                                     : unit_ball_measure(d - 1) * std::pow(pr.eps, d - 1);
  return s;
}

// True iff v matches the datum on the pinned ring and respects the class constraints.
inline bool admissible_check(const CellProblem& pr, const SbvGridFunction& v) {
  CellSetup s;
  try {
    s = make_cell_setup(pr);
  } catch (const Error&) {
    return false;
  }
  if (!(v.grid() == s.grid) || v.components() != s.datum.components()) return false;
  const Grid& g = s.grid;
  for (int n = 0; n < g.node_count(); ++n) {
    if (!s.pinned[n]) continue;
    for (int i = 0; i < v.components(); ++i)
      if (v(n, i) != s.datum(n, i)) return false;
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!s.ball.contains(g.edge_midpoint(e))) {
      if (v.has_jump(e) != s.datum.has_jump(e)) return false;
      continue;
    }
    if (pr.cls == CompetitorClass::sobolev && v.has_jump(e)) return false;
    if (pr.cls == CompetitorClass::pc && !v.has_jump(e) && v.jump(e).norm() != 0.0) return false;
  }
  return true;
}

}  // namespace vexfd

#include "vexfd/cell_solver.hpp"
