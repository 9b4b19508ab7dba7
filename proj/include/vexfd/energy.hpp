#pragma once

// Discrete free-discontinuity energy
//   F(u, A) = sum_{cells in A} h^d f(x_c, grad_c u) + sum_{jumping edges in A} h^{d-1} g(x_e, [u]_e, nu_e).

#include <span>
#include <vector>

#include "vexfd/density.hpp"
#include "vexfd/sbv.hpp"

namespace vexfd {

struct EnergyParts {
  double total = 0.0;
  double bulk = 0.0;
  double surface = 0.0;
};

namespace detail {

// Fixed-order pairwise summation, so totals do not depend on how terms were produced.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double checked(double v, const char* what) {
  if (std::isnan(v)) throw DensityError(std::string(what) + " density returned NaN");
  return v;
}

}  // namespace detail

// Bulk term of one cell; zero when every gradient edge of the cell jumps.
inline double cell_bulk_energy(const EnergyContext& ctx, const SbvGridFunction& u, int c) {
  if (u.cell_fully_cracked(c)) return 0.0;
  return ctx.grid.cell_volume() *
         detail::checked(ctx.bulk(ctx.grid.cell_center(c), u.cell_gradient(c)), "bulk");
}

// Surface term of one edge; zero unless the edge jumps.
inline double edge_surface_energy(const EnergyContext& ctx, const SbvGridFunction& u, int e) {
  if (!u.has_jump(e)) return 0.0;
  return ctx.grid.facet_measure() *
         detail::checked(ctx.surface(ctx.grid.edge_midpoint(e), u.jump(e), ctx.grid.edge_normal(e)), "surface");
}

// Evaluates F(u, A). When `checkGrowth` is set, the two-sided growth bound
//   alpha (int |grad u|^p + H(J_u)) <= F <= beta (int (1 + |grad u|^p) + H(J_u))
// (with beta (1 + |[u]|) per facet in linear mode) is verified and a breach
// raises DensityError.
inline EnergyParts eval_energy(const EnergyContext& ctx, const SbvGridFunction& u,
                               const Region& region = Region::whole(), bool checkGrowth = true) {
  if (!(u.grid() == ctx.grid)) throw StructuralError("eval_energy: function grid differs from context grid");
  const Grid& g = ctx.grid;
  std::vector<double> bulkTerms, surfTerms, powTerms;
  double cellCount = 0.0, facetUpper = 0.0, facetCount = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    const Point x = g.cell_center(c);
    if (!region.contains(x)) continue;
    const double b = cell_bulk_energy(ctx, u, c);
    bulkTerms.push_back(b);
    if (checkGrowth) {
      cellCount += 1.0;
      if (!u.cell_fully_cracked(c)) {
        const double n = u.cell_gradient(c).norm();
        powTerms.push_back(n == 0.0 ? 0.0 : g.cell_volume() * std::pow(n, ctx.bulk.p(x)));
      }
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!u.has_jump(e) || !region.contains(g.edge_midpoint(e))) continue;
    surfTerms.push_back(edge_surface_energy(ctx, u, e));
    if (checkGrowth) {
      facetCount += g.facet_measure();
      facetUpper += g.facet_measure() * (ctx.surface.mode == SurfaceGrowth::bounded ? 1.0 : 1.0 + u.jump(e).norm());
    }
  }
  EnergyParts parts;
  parts.bulk = detail::pairwise_sum(bulkTerms);
  parts.surface = detail::pairwise_sum(surfTerms);
  parts.total = parts.bulk + parts.surface;

  if (checkGrowth) {
    const double gradPow = detail::pairwise_sum(powTerms);
    const double lower = ctx.alpha() * (gradPow + facetCount);
    const double upper = ctx.beta() * (cellCount * g.cell_volume() + gradPow + facetUpper);
    const double tol = 1e-10 * std::max(1.0, upper);
    if (parts.total < lower - tol || parts.total > upper + tol)
      throw DensityError("energy breaks the declared growth bounds of its densities");
  }
  return parts;
}

}  // namespace vexfd
