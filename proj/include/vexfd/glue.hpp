#pragma once

// Gluing two competitors through a cut-off strip with a certified energy overhead.

#include <limits>
#include <vector>

#include "vexfd/energy.hpp"

namespace vexfd {

struct GlueResult {
  SbvGridFunction w;
  double certifiedBound = 0.0;
  double energy = 0.0;  // F(w, D' u E)
  int k = 0;            // number of strips
  int strip = 0;        // selected i0 in 1..k
  double delta = 0.0;
  double M = 0.0;
  double energyU = 0.0;  // F(u, D'')
  double energyV = 0.0;  // F(v, E)
  double remainder = 0.0;  // sum over F of (|u - v| / delta)^p
  double transitionEnergy = 0.0;
};

namespace detail {

inline bool same_edge_data(const SbvGridFunction& a, const SbvGridFunction& b, int e) {
  const auto ed = a.grid().edge(e);
  for (int i = 0; i < a.components(); ++i)
    if (a(ed.a, i) != b(ed.a, i) || a(ed.b, i) != b(ed.b, i)) return false;
  return a.has_jump(e) == b.has_jump(e);
}

inline bool same_cell_data(const SbvGridFunction& a, const SbvGridFunction& b, int c) {
  const auto edges = a.grid().cell_edges(c);
  for (int k = 0; k < a.grid().dim(); ++k)
    if (!same_edge_data(a, b, edges[k])) return false;
  return true;
}

}  // namespace detail

// Builds w = phi u + (1 - phi) v on the strips between D' and D'' and returns
// the strip whose transition energy is smallest. The right-hand side of the
// estimate is evaluated with the same discrete energy and the inequality is
// checked; a violation raises NumericError.
inline GlueResult glue_with_cutoff(const SbvGridFunction& u, const SbvGridFunction& v, const Region& Dp,
                                   const Region& Dpp, const Region& E, double eta, const EnergyContext& ctx,
                                   long kMax = 1'000'000) {
  const Grid& g = ctx.grid;
  if (!(u.grid() == g) || !(v.grid() == g)) throw StructuralError("glue_with_cutoff: grids differ");
  if (u.components() != v.components()) throw StructuralError("glue_with_cutoff: component counts differ");
  if (!(eta > 0.0)) throw PreconditionError("glue_with_cutoff: eta must be positive");
  const int m = u.components();
  const auto inDp = Dp.node_mask(g);
  const auto inDpp = Dpp.node_mask(g);
  std::vector<int> dpNodes;
  for (int n = 0; n < g.node_count(); ++n) {
    if (inDp[n] && !inDpp[n]) throw PreconditionError("glue_with_cutoff: D' is not contained in D''");
    if (inDp[n]) dpNodes.push_back(n);
  }
  if (dpNodes.empty()) throw DomainError("glue_with_cutoff: D' contains no grid nodes");

  std::vector<double> dist(g.node_count(), std::numeric_limits<double>::infinity());
  double gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n < g.node_count(); ++n) {
    const Point x = g.node_point(n);
    for (int y : dpNodes) dist[n] = std::min(dist[n], distance(x, g.node_point(y)));
    if (!inDpp[n]) gap = std::min(gap, dist[n]);
  }
  if (!std::isfinite(gap)) throw PreconditionError("glue_with_cutoff: D'' must leave some grid nodes outside");

  GlueResult r;
  r.delta = 0.5 * gap;
  if (!(2.0 * r.delta > g.h() * std::sqrt(static_cast<double>(g.dim()))))
    throw PreconditionError("glue_with_cutoff: D' is not compactly contained in D'' at this resolution");

  const double alpha = ctx.alpha(), beta = ctx.beta(), pPlus = ctx.bulk.pPlus();
  const long double kReq =
      std::max(std::pow(3.0L, pPlus - 1.0L) * beta / (eta * alpha), static_cast<long double>(beta) / eta);
  const long double kCeil = std::ceil(kReq);
  if (kCeil > kMax)
    throw ParameterError("glue_with_cutoff: eta too small, the strip count exceeds the cap", kCeil);
  r.k = std::max(1, static_cast<int>(kCeil));
  r.M = std::pow(2.0 * r.k, pPlus) * std::pow(3.0, pPlus - 1.0) * beta / r.k;

  r.energyU = eval_energy(ctx, u, Dpp).total;
  r.energyV = eval_energy(ctx, v, E).total;

  // Remainder set: nodes of (D'' \ D') n E, plus D'' \ D' nodes of elements in D' u E.
  const Region DpE = Dp | E;
  std::vector<char> inF(g.node_count(), 0);
  for (int n = 0; n < g.node_count(); ++n)
    if (inDpp[n] && !inDp[n] && E.contains(g.node_point(n))) inF[n] = 1;
  auto markElementNodes = [&](int a, int b) {
    for (int n : {a, b})
      if (n >= 0 && inDpp[n] && !inDp[n]) inF[n] = 1;
  };
  for (int e = 0; e < g.edge_count(); ++e)
    if (DpE.contains(g.edge_midpoint(e))) markElementNodes(g.edge(e).a, g.edge(e).b);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!DpE.contains(g.cell_center(c))) continue;
    const auto edges = g.cell_edges(c);
    for (int k = 0; k < g.dim(); ++k) markElementNodes(g.edge(edges[k]).a, g.edge(edges[k]).b);
  }
  const VarExponent& p = *ctx.bulk.exponent;
  for (int n = 0; n < g.node_count(); ++n) {
    if (!inF[n]) continue;
    double d2 = 0.0;
    for (int i = 0; i < m; ++i) d2 += (u(n, i) - v(n, i)) * (u(n, i) - v(n, i));
    const double t = std::sqrt(d2) / r.delta;
    if (t > 0.0) r.remainder += g.node_weight(n) * std::pow(t, p.at(g.node_point(n)));
  }
  r.certifiedBound = (1.0 + eta) * (r.energyU + r.energyV) + r.M * r.remainder + eta * DpE.measure(g);

  std::vector<int> cellsIn, edgesIn;
  for (int c = 0; c < g.cell_count(); ++c)
    if (DpE.contains(g.cell_center(c))) cellsIn.push_back(c);
  for (int e = 0; e < g.edge_count(); ++e)
    if (DpE.contains(g.edge_midpoint(e))) edgesIn.push_back(e);

  const double gradCap = 2.0 * r.k / r.delta;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> phi(g.node_count());
  for (int i = 1; i <= r.k; ++i) {
    for (int n = 0; n < g.node_count(); ++n) phi[n] = std::clamp(i - dist[n] * r.k / r.delta, 0.0, 1.0);
    SbvGridFunction w = u;
    for (int n = 0; n < g.node_count(); ++n)
      for (int c = 0; c < m; ++c) w(n, c) = phi[n] * u(n, c) + (1.0 - phi[n]) * v(n, c);
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto ed = g.edge(e);
      if (phi[ed.a] == 1.0 && phi[ed.b] == 1.0) {
        w.set_crack(e, u.flagged(e));
      } else if (phi[ed.a] == 0.0 && phi[ed.b] == 0.0) {
        w.set_crack(e, v.flagged(e));
      } else {
        bool agree = true;
        for (int c = 0; c < m; ++c) agree = agree && u(ed.a, c) == v(ed.a, c) && u(ed.b, c) == v(ed.b, c);
        w.set_crack(e, agree ? u.flagged(e) : (u.has_jump(e) || v.has_jump(e)));
      }
    }

    for (int c = 0; c < g.cell_count(); ++c) {
      const auto edges = g.cell_edges(c);
      double s = 0.0;
      for (int k = 0; k < g.dim(); ++k) {
        const auto ed = g.edge(edges[k]);
        const double d = (phi[ed.b] - phi[ed.a]) / g.h();
        s += d * d;
      }
      if (std::sqrt(s) > gradCap * (1.0 + 1e-12))
        throw NumericError("glue_with_cutoff: cut-off gradient exceeds 2k/delta");
    }

    std::vector<double> terms;
    for (int c : cellsIn) {
      const Point x = g.cell_center(c);
      if (Dpp.contains(x) && detail::same_cell_data(w, u, c)) continue;
      if (E.contains(x) && detail::same_cell_data(w, v, c)) continue;
      terms.push_back(cell_bulk_energy(ctx, w, c));
    }
    for (int e : edgesIn) {
      const Point x = g.edge_midpoint(e);
      if (Dpp.contains(x) && detail::same_edge_data(w, u, e)) continue;
      if (E.contains(x) && detail::same_edge_data(w, v, e)) continue;
      terms.push_back(edge_surface_energy(ctx, w, e));
    }
    const double t = detail::pairwise_sum(terms);
    if (t < best) {
      best = t;
      r.strip = i;
      r.w = std::move(w);
    }
  }
  r.transitionEnergy = best;
  r.w.drop_null_cracks();

  for (int n = 0; n < g.node_count(); ++n) {
    const bool onDp = inDp[n];
    const bool onEonly = E.contains(g.node_point(n)) && !inDpp[n];
    for (int c = 0; c < m; ++c) {
      if (onDp && r.w(n, c) != u(n, c)) throw NumericError("glue_with_cutoff: w differs from u on D'");
      if (onEonly && r.w(n, c) != v(n, c)) throw NumericError("glue_with_cutoff: w differs from v on E \\ D''");
    }
  }
  r.energy = eval_energy(ctx, r.w, DpE).total;
  if (!(r.energy <= r.certifiedBound))
    throw NumericError("glue_with_cutoff: glued energy exceeds the certified bound");
  return r;
}

}  // namespace vexfd
