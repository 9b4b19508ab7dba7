#pragma once

// Solvers behind solve_cell. Included from cell.hpp.

#include <algorithm>
#include <deque>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "vexfd/pc_project.hpp"

namespace vexfd {

namespace detail {

// Dinic maximum flow; the source side of the final residual graph is the minimum cut.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(n) {}

  void add_arc(int from, int to, double cap) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0.0});
  }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      it_.assign(adj_.size(), 0);
      while (double f = dfs(s, t, std::numeric_limits<double>::infinity())) flow += f;
    }
    return flow;
  }
  // Nodes reachable from s in the residual graph after run().
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int a : adj_[v])
        if (arcs_[a].cap > kEps && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push_back(arcs_[a].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    double cap;
  };
  static constexpr double kEps = 1e-14;

  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::deque<int> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int a : adj_[v])
        if (arcs_[a].cap > kEps && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push_back(arcs_[a].to);
        }
    }
    return level_[t] >= 0;
  }
  double dfs(int v, int t, double pushed) {
    if (v == t) return pushed;
    for (auto& i = it_[v]; i < adj_[v].size(); ++i) {
      const int a = adj_[v][i];
      Arc& arc = arcs_[a];
      if (arc.cap <= kEps || level_[arc.to] != level_[v] + 1) continue;
      if (double f = dfs(arc.to, t, std::min(pushed, arc.cap)); f > 0.0) {
        arc.cap -= f;
        arcs_[a ^ 1].cap += f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

class CellSolver {
 public:
  explicit CellSolver(const CellProblem& pr) : pr_(pr), s_(make_cell_setup(pr)), g_(s_.grid) {
    const int nodes = g_.node_count();
    inCell_.assign(g_.cell_count(), 0);
    inEdge_.assign(g_.edge_count(), 0);
    for (int c = 0; c < g_.cell_count(); ++c) inCell_[c] = s_.ball.contains(g_.cell_center(c));
    for (int e = 0; e < g_.edge_count(); ++e) inEdge_[e] = s_.ball.contains(g_.edge_midpoint(e));
    depCells_.resize(nodes);
    depEdges_.resize(nodes);
    nbrs_.resize(nodes);
    incident_.resize(nodes);
    for (int n = 0; n < nodes; ++n) {
      nbrs_[n] = g_.neighbours(n);
      incident_[n] = g_.edges_at(n);
      for (int c : g_.cells_touching(n))
        if (inCell_[c]) depCells_[n].push_back(c);
      for (int e : g_.edges_at(n))
        if (inEdge_[e]) depEdges_[n].push_back(e);
    }
    // Flags outside the ball stay equal to the datum's.
    for (int e = 0; e < g_.edge_count(); ++e)
      if (inEdge_[e]) toggleable_.push_back(e);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int n = 0; n < nodes; ++n)
      for (int i = 0; i < s_.datum.components(); ++i) {
        lo = std::min(lo, s_.datum(n, i));
        hi = std::max(hi, s_.datum(n, i));
      }
    scale_ = hi > lo ? hi - lo : std::max(1.0, std::abs(hi));
    tol_ = pr_.params.innerTol * scale_;
    omega_ = 2.0 / (1.0 + std::sin(std::numbers::pi / pr_.params.nodesPerAxis));
  }

  CellSolution solve() {
    switch (pr_.cls) {
      case CompetitorClass::sobolev: return finish(solve_sobolev());
      case CompetitorClass::pc: return finish(solve_pc());
      case CompetitorClass::sbv: return finish(solve_sbv());
    }
    throw StructuralError("unknown competitor class");
  }

 private:
  struct Run {
    SbvGridFunction u;
    double value = 0.0;
    std::vector<double> trace;
    bool converged = true;
  };
  struct Multi {
    Run best;
    std::vector<double> startValues;
  };

  double total(const SbvGridFunction& u) const { return eval_energy(s_.ctx, u, s_.ball, false).total; }
  double surface(const SbvGridFunction& u) const { return eval_energy(s_.ctx, u, s_.ball, false).surface; }

  double local(const SbvGridFunction& u, int n) const {
    double e = 0.0;
    for (int c : depCells_[n]) e += cell_bulk_energy(s_.ctx, u, c);
    for (int ed : depEdges_[n]) e += edge_surface_energy(s_.ctx, u, ed);
    return e;
  }

  // One coordinate update; returns |change|.
  double relax(SbvGridFunction& u, int n, int i) {
    const double c0 = u(n, i);
    double lo = c0, hi = c0;
    for (int w : nbrs_[n]) {
      lo = std::min(lo, u(w, i));
      hi = std::max(hi, u(w, i));
    }
    const double width = hi - lo;
    if (width == 0.0) return 0.0;
    const double blo = lo - 0.5 * width, bhi = hi + 0.5 * width;
    auto energy = [&](double t) {
      u(n, i) = t;
      return local(u, n);
    };
    const double e0 = local(u, n);
    double best = c0, ebest = e0;
    auto consider = [&](double t) {
      const double e = energy(t);
      if (e < ebest) {
        ebest = e;
        best = t;
      }
    };
    const double s = 1e-4 * width;
    const double em = energy(c0 - s), ep = energy(c0 + s);
    const double d1 = (ep - em) / (2.0 * s), d2 = (ep - 2.0 * e0 + em) / (s * s);
    bool newtonOk = false;
    if (d2 > 0.0) {
      const double t = std::clamp(c0 - d1 / d2, blo, bhi);
      if (std::abs(t - c0) <= tol_) {
        newtonOk = true;
      } else {
        const double tw = std::clamp(c0 + omega_ * (t - c0), blo, bhi);
        consider(tw);
        if (best == c0) consider(t);
        newtonOk = best != c0;
      }
    }
    if (!newtonOk) {
      if (em < ebest) ebest = em, best = c0 - s;
      if (ep < ebest) ebest = ep, best = c0 + s;
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::brent_find_minima(energy, blo, bhi, 40, iters);
      consider(r.first);
    }
    for (std::size_t k = 0; k < incident_[n].size(); ++k)
      if (u.flagged(incident_[n][k])) consider(u(nbrs_[n][k], i));
    u(n, i) = best;
    return std::abs(best - c0);
  }

  double pair_energy(const SbvGridFunction& u, int e) const {
    double v = inEdge_[e] ? edge_surface_energy(s_.ctx, u, e) : 0.0;
    for (int c : g_.cells_of_edge(e))
      if (inCell_[c]) v += cell_bulk_energy(s_.ctx, u, c);
    return v;
  }

  // Damped Newton on a scalar line: the Hessian is tridiagonal, so each step
  // is a Thomas solve. Returns false when no descent step can be found.
  bool newton_line(SbvGridFunction& u) {
    const auto& free = s_.freeNodes;
    const int N = static_cast<int>(free.size());
    if (N == 0) return true;
    std::vector<int> next(N, -1);
    std::vector<int> pairEdge(N, -1);
    for (int k = 0; k + 1 < N; ++k)
      for (std::size_t q = 0; q < nbrs_[free[k]].size(); ++q)
        if (nbrs_[free[k]][q] == free[k + 1]) {
          next[k] = k + 1;
          pairEdge[k] = incident_[free[k]][q];
        }
    for (int e : toggleable_)
      if (u.flagged(e) && u.jump(e).norm() == 0.0) u.set_crack(e, false);
    const double s = 1e-5 * scale_;
    std::vector<double> grad(N), diag(N), off(N, 0.0), step(N), x0(N), cp(N), dp(N);
    double lambda = 0.0;
    double e0 = total(u);
    for (int it = 0; it < 200; ++it) {
      double gmax = 0.0, hmax = 0.0;
      for (int k = 0; k < N; ++k) {
        const int n = free[k];
        const double c = u(n, 0);
        const double l0 = local(u, n);
        u(n, 0) = c + s;
        const double lp = local(u, n);
        u(n, 0) = c - s;
        const double lm = local(u, n);
        u(n, 0) = c;
        grad[k] = (lp - lm) / (2.0 * s);
        diag[k] = (lp - 2.0 * l0 + lm) / (s * s);
        gmax = std::max(gmax, std::abs(grad[k]));
        hmax = std::max(hmax, std::abs(diag[k]));
        if (next[k] >= 0) {
          const int w = free[k + 1];
          const double cw = u(w, 0);
          double e[2][2];
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              u(n, 0) = c + (a ? s : -s);
              u(w, 0) = cw + (b ? s : -s);
              e[a][b] = pair_energy(u, pairEdge[k]);
            }
          u(n, 0) = c;
          u(w, 0) = cw;
          off[k] = (e[1][1] - e[1][0] - e[0][1] + e[0][0]) / (4.0 * s * s);
        } else {
          off[k] = 0.0;
        }
      }
      if (gmax == 0.0) return true;
      for (int k = 0; k < N; ++k) x0[k] = u(free[k], 0);
      bool accepted = false;
      for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
        bool ok = true;
        for (int k = 0; k < N && ok; ++k) {
          const double lower = k > 0 ? off[k - 1] : 0.0;
          const double den = diag[k] + lambda - (k > 0 ? lower * cp[k - 1] : 0.0);
          if (!(den > 0.0)) {
            ok = false;
            break;
          }
          cp[k] = off[k] / den;
          dp[k] = (-grad[k] - (k > 0 ? lower * dp[k - 1] : 0.0)) / den;
        }
        if (ok) {
          step[N - 1] = dp[N - 1];
          for (int k = N - 2; k >= 0; --k) step[k] = dp[k] - cp[k] * step[k + 1];
          double smax = 0.0;
          for (int k = 0; k < N; ++k) smax = std::max(smax, std::abs(step[k]));
          if (smax <= tol_) return lambda == 0.0;
          for (int k = 0; k < N; ++k) u(free[k], 0) = x0[k] + step[k];
          double e1 = total(u);
          if (e1 < e0) {
            // Degenerate Hessians (p > 2 near zero slope) give short steps; stretch them.
            for (double t = 2.0; t <= 64.0; t *= 2.0) {
              for (int k = 0; k < N; ++k) u(free[k], 0) = x0[k] + t * step[k];
              const double et = total(u);
              if (!(et < e1)) {
                for (int k = 0; k < N; ++k) u(free[k], 0) = x0[k] + 0.5 * t * step[k];
                break;
              }
              e1 = et;
            }
            const bool stalled = e0 - e1 <= 1e-15 * std::max(1.0, std::abs(e0));
            e0 = e1;
            if (stalled) return true;
            accepted = true;
            lambda *= 0.1;
            if (lambda < 1e-14 * std::max(1.0, hmax)) lambda = 0.0;
            break;
          }
          for (int k = 0; k < N; ++k) u(free[k], 0) = x0[k];
          if (smax <= tol_) return false;
        }
        lambda = lambda == 0.0 ? 1e-8 * std::max(1.0, hmax) : 10.0 * lambda;
      }
      if (!accepted) return false;
    }
    return false;
  }

  // Nonlinear SOR on the free nodes with the crack flags frozen.
  bool value_solve(SbvGridFunction& u, std::vector<double>* trace) {
    const int m = u.components();
    const bool line = g_.dim() == 1 && m == 1;
    double before = total(u);
    for (int sweep = 0; sweep < pr_.params.maxSweeps; ++sweep) {
      if (line) newton_line(u);
      ++sweeps_;
      double maxUpd = 0.0;
      for (int n : s_.freeNodes)
        for (int i = 0; i < m; ++i) maxUpd = std::max(maxUpd, relax(u, n, i));
      const double after = total(u);
      if (trace && (line || sweep % 10 == 9)) trace->push_back(after);
      if (maxUpd <= tol_) return true;
      // Updates below the round-off floor of the energy are not progress.
      if (before - after <= 1e-14 * std::max(1.0, std::abs(after))) return true;
      before = after;
    }
    return false;
  }

  double toggle_delta(SbvGridFunction& u, int e, bool on) {
    u.set_crack(e, on);
    double v = inEdge_[e] ? edge_surface_energy(s_.ctx, u, e) : 0.0;
    for (int c : g_.cells_of_edge(e))
      if (inCell_[c]) v += cell_bulk_energy(s_.ctx, u, c);
    return v;
  }

  // Sets each flag to its locally better state; ties stay uncracked.
  bool toggle(SbvGridFunction& u) {
    bool changed = false;
    for (int e : toggleable_) {
      if (u.jump(e).norm() == 0.0) {
        u.set_crack(e, false);
        continue;
      }
      const bool before = u.flagged(e);
      const double off = toggle_delta(u, e, false);
      const double on = toggle_delta(u, e, true);
      const bool want = on < off;
      u.set_crack(e, want);
      changed = changed || want != before;
    }
    return changed;
  }

  // Shifts a floating component (no pinned node, bounded by jumps) onto a
  // neighbour across one of its jumps when that lowers the energy.
  bool merge(SbvGridFunction& u) {
    bool any = false;
    const int m = u.components();
    for (int round = 0; round < static_cast<int>(s_.freeNodes.size()); ++round) {
      DisjointSets sets(g_.node_count());
      for (int e = 0; e < g_.edge_count(); ++e)
        if (!u.has_jump(e)) sets.unite(g_.edge(e).a, g_.edge(e).b);
      std::vector<char> anchored(g_.node_count(), 0);
      for (int n = 0; n < g_.node_count(); ++n)
        if (s_.pinned[n]) anchored[sets.find(n)] = 1;
      std::vector<std::vector<int>> members(g_.node_count());
      for (int n : s_.freeNodes)
        if (!anchored[sets.find(n)]) members[sets.find(n)].push_back(n);

      double bestDelta = -1e-12 * std::max(1.0, total(u));
      std::vector<int> bestNodes;
      Vec bestShift(m);
      for (int root = 0; root < g_.node_count(); ++root) {
        const auto& comp = members[root];
        if (comp.empty()) continue;
        std::vector<int> cells, edges;
        for (int n : comp) {
          cells.insert(cells.end(), depCells_[n].begin(), depCells_[n].end());
          edges.insert(edges.end(), depEdges_[n].begin(), depEdges_[n].end());
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        auto part = [&](const SbvGridFunction& w) {
          double v = 0.0;
          for (int c : cells) v += cell_bulk_energy(s_.ctx, w, c);
          for (int ed : edges) v += edge_surface_energy(s_.ctx, w, ed);
          return v;
        };
        const double before = part(u);
        for (int n : comp)
          for (int ed : g_.edges_at(n)) {
            if (!u.has_jump(ed)) continue;
            const auto edge = g_.edge(ed);
            const int other = edge.a == n ? edge.b : edge.a;
            if (sets.find(other) == root) continue;
            Vec shift(m);
            for (int i = 0; i < m; ++i) shift[i] = u(other, i) - u(n, i);
            SbvGridFunction w = u;
            for (int q : comp)
              for (int i = 0; i < m; ++i) w(q, i) += shift[i];
            const double delta = part(w) - before;
            if (delta < bestDelta) {
              bestDelta = delta;
              bestNodes = comp;
              bestShift = shift;
            }
          }
      }
      if (bestNodes.empty()) break;
      for (int q : bestNodes)
        for (int i = 0; i < m; ++i) u(q, i) += bestShift[i];
      for (int e = 0; e < g_.edge_count(); ++e)
        if (u.flagged(e) && u.jump(e).norm() == 0.0) u.set_crack(e, false);
      any = true;
    }
    return any;
  }

  // 1D only: tries each single additional crack with a fresh value solve.
  bool insert(SbvGridFunction& u) {
    const auto parts = eval_energy(s_.ctx, u, s_.ball, false);
    if (parts.bulk <= s_.ctx.surface.alpha * g_.facet_measure()) return false;
    double bestVal = parts.total - 1e-12 * std::max(1.0, parts.total);
    SbvGridFunction bestU;
    bool found = false;
    for (int e : toggleable_) {
      if (u.flagged(e)) continue;
      SbvGridFunction w = u;
      w.set_crack(e, true);
      value_solve(w, nullptr);
      toggle(w);
      const double v = total(w);
      if (v < bestVal) {
        bestVal = v;
        bestU = std::move(w);
        found = true;
      }
    }
    if (found) u = std::move(bestU);
    return found;
  }

  Run alternate(SbvGridFunction u) {
    Run r;
    r.trace.push_back(total(u));
    r.converged = false;
    for (int it = 0; it < pr_.params.maxIter; ++it) {
      const bool conv = value_solve(u, nullptr);
      bool changed = toggle(u);
      changed = merge(u) || changed;
      if (g_.dim() == 1) changed = insert(u) || changed;
      r.trace.push_back(total(u));
      if (conv && !changed) {
        r.converged = true;
        break;
      }
    }
    r.value = r.trace.back();
    r.u = std::move(u);
    return r;
  }

  SbvGridFunction plain_datum() const {
    SbvGridFunction u = s_.datum;
    for (int e : toggleable_) u.set_crack(e, false);
    return u;
  }

  Run solve_sobolev() {
    Run r;
    r.u = plain_datum();
    r.trace.push_back(total(r.u));
    r.converged = value_solve(r.u, &r.trace);
    r.value = total(r.u);
    r.trace.push_back(r.value);
    return r;
  }

  Run solve_pc() {
    Run r;
    r.u = s_.datum;
    r.trace.push_back(surface(r.u));
    if (pr_.datum.kind == DatumKind::jump) {
      const BoundaryDatum& d = pr_.datum;
      const int nodes = g_.node_count(), src = nodes, snk = nodes + 1;
      MaxFlow flow(nodes + 2);
      const double inf = std::numeric_limits<double>::infinity();
      const Vec up = d.zeta(), down = -d.zeta();
      for (int n = 0; n < nodes; ++n) {
        if (!s_.pinned[n]) continue;
        if (dot(g_.node_point(n) - d.x0, d.nu) > 0.0)
          flow.add_arc(src, n, inf);
        else
          flow.add_arc(n, snk, inf);
      }
      for (int e = 0; e < g_.edge_count(); ++e) {
        if (!inEdge_[e]) continue;
        const auto ed = g_.edge(e);
        const Point x = g_.edge_midpoint(e), nu = g_.edge_normal(e);
        // a on ed.a and b on ed.b gives the jump b - a.
        flow.add_arc(ed.a, ed.b, g_.facet_measure() * detail::checked(s_.ctx.surface(x, down, nu), "surface"));
        flow.add_arc(ed.b, ed.a, g_.facet_measure() * detail::checked(s_.ctx.surface(x, up, nu), "surface"));
      }
      flow.run(src, snk);
      const auto side = flow.source_side(src);
      for (int n : s_.freeNodes) r.u.set(n, side[n] ? d.a : d.b);
      for (int e = 0; e < g_.edge_count(); ++e) r.u.set_crack(e, r.u.jump(e).norm() > 0.0);
    }
    r.value = surface(r.u);
    r.trace.push_back(r.value);
    return r;
  }

  // Canonical starts (datum, interface plane, random sprinklings) are each run
  // through the alternating loop. The sobolev and pc minimisers are admissible
  // sbv competitors and enter as candidates, so the sbv value never exceeds them.
  Multi solve_sbv() {
    std::vector<Run> candidates;
    Run sob = solve_sobolev();
    sob.trace = {sob.value};
    candidates.push_back(std::move(sob));
    bool zeroGradient = pr_.datum.kind == DatumKind::jump;
    if (!zeroGradient) {
      zeroGradient = true;
      for (int q = 0; q < pr_.datum.xi.m * pr_.datum.xi.d; ++q) zeroGradient = zeroGradient && pr_.datum.xi.v[q] == 0.0;
    }
    if (zeroGradient) {
      Run pc = solve_pc();
      pc.value = total(pc.u);
      pc.trace = {pc.value};
      candidates.push_back(std::move(pc));
    }

    std::vector<SbvGridFunction> starts;
    if (pr_.datum.kind == DatumKind::jump) {
      starts.push_back(s_.datum);
    } else {
      starts.push_back(plain_datum());
      SbvGridFunction plane = plain_datum();
      for (int e = 0; e < g_.edge_count(); ++e) {
        const auto ed = g_.edge(e);
        const bool cross = (g_.node_point(ed.a)[0] - pr_.x0[0] <= 0.0) != (g_.node_point(ed.b)[0] - pr_.x0[0] <= 0.0);
        plane.set_crack(e, cross && inEdge_[e]);
      }
      starts.push_back(std::move(plane));
    }
    Rng rng(pr_.params.seed);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int n = 0; n < g_.node_count(); ++n)
      for (int i = 0; i < s_.datum.components(); ++i) {
        lo = std::min(lo, s_.datum(n, i));
        hi = std::max(hi, s_.datum(n, i));
      }
    for (int k = 0; k < pr_.params.multistarts; ++k) {
      SbvGridFunction u = s_.datum;
      for (int e : toggleable_) u.set_crack(e, rng.uniform() < 0.3);
      if (g_.dim() == 1)
        for (int n : s_.freeNodes)
          for (int i = 0; i < u.components(); ++i) u(n, i) = rng.uniform(lo, hi);
      starts.push_back(std::move(u));
    }
    for (auto& st : starts) candidates.push_back(alternate(std::move(st)));

    Multi out;
    for (auto& c : candidates) {
      out.startValues.push_back(c.value);
      if (out.startValues.size() == 1 || c.value < out.best.value) out.best = std::move(c);
    }
    return out;
  }

  CellSolution finish(Run r) {
    Multi m;
    m.startValues.push_back(r.value);
    m.best = std::move(r);
    return finish(std::move(m));
  }

  CellSolution finish(Multi m) {
    CellSolution sol;
    sol.minimizer = std::move(m.best.u);
    sol.minimizer.drop_null_cracks();
    const auto parts = eval_energy(s_.ctx, sol.minimizer, s_.ball, true);
    sol.value = pr_.cls == CompetitorClass::pc ? parts.surface : parts.total;
    sol.normalized = sol.value / s_.normalizer;
    sol.iterations = sweeps_;
    sol.energyTrace = std::move(m.best.trace);
    sol.startValues = std::move(m.startValues);
    const auto [mn, mx] = std::minmax_element(sol.startValues.begin(), sol.startValues.end());
    sol.multistartSpread = *mx - *mn;
    sol.h = g_.h();
    sol.converged = m.best.converged;
    if (!sol.converged)
      throw SolverNonConvergence("solve_cell: no convergence within the iteration budget", std::move(sol));
    return sol;
  }

  const CellProblem& pr_;
  CellSetup s_;
  const Grid& g_;
  std::vector<char> inCell_, inEdge_;
  std::vector<std::vector<int>> depCells_, depEdges_, nbrs_, incident_;
  std::vector<int> toggleable_;
  double scale_ = 1.0, tol_ = 0.0, omega_ = 1.0;
  int sweeps_ = 0;
};

}  // namespace detail

inline CellSolution solve_cell(const CellProblem& problem) { return detail::CellSolver(problem).solve(); }

// Energy of the datum itself on the ball, the trivial upper bound for every class.
inline double datum_energy(const CellProblem& problem) {
  const CellSetup s = make_cell_setup(problem);
  SbvGridFunction u = s.datum;
  if (problem.cls == CompetitorClass::sobolev)
    for (int e = 0; e < s.grid.edge_count(); ++e)
      if (s.ball.contains(s.grid.edge_midpoint(e))) u.set_crack(e, false);
  const auto parts = eval_energy(s.ctx, u, s.ball, false);
  return problem.cls == CompetitorClass::pc ? parts.surface : parts.total;
}

}  // namespace vexfd
