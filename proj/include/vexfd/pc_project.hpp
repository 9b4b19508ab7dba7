#pragma once

// Piecewise-constant projection of a discrete SBV function by level-set rounding.

#include <algorithm>
#include <numeric>
#include <vector>

#include "vexfd/sbv.hpp"

namespace vexfd {

struct PcProjection {
  SbvGridFunction zpc;
  std::vector<int> partition;  // part id per node, -1 outside D
  int parts = 0;
  double step = 0.0;           // rounding lattice spacing c_proj * ||grad z||_1 / theta
  double gradientL1 = 0.0;     // lattice L1 norm of the gradient on D
  double addedBoundary = 0.0;  // H^{d-1} of new level boundaries not in J_z
  double supError = 0.0;       // ||z - z_pc||_inf on D
  double errorBound = 0.0;     // c_proj * theta^{-1} * ||grad z||_1
};

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline double lattice_floor(double z, double offset, double step) { return std::floor((z - offset) / step); }

}  // namespace detail

// Rounds each component of z on D to the lattice offset + step * (Z + 1/2), with
// the per-component offset chosen to minimise the number of new level crossings,
// then clamps to the component's range on D. With c_proj >= sqrt(m) the added
// boundary never exceeds theta (averaging over offsets), and the sup error is
// at most step / 2.
inline PcProjection pc_project(const SbvGridFunction& z, const Region& D, double theta,
                               double cProj = 2.0) {
  if (!(theta > 0.0)) throw PreconditionError("pc_project: theta must be positive");
  const Grid& g = z.grid();
  const int m = z.components();
  const auto mask = D.node_mask(g);
  std::vector<int> inner;  // edges with both endpoints in D
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto ed = g.edge(e);
    if (mask[ed.a] && mask[ed.b]) inner.push_back(e);
  }

  PcProjection out;
  out.zpc = z;
  for (int e : inner) {
    if (z.has_jump(e)) continue;
    out.gradientL1 += g.facet_measure() * z.jump(e).norm();
  }
  out.step = cProj * out.gradientL1 / theta;
  out.errorBound = out.step;

  if (out.step > 0.0) {
    for (int i = 0; i < m; ++i) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      std::vector<double> offsets{0.0};
      for (int n = 0; n < g.node_count(); ++n) {
        if (!mask[n]) continue;
        lo = std::min(lo, z(n, i));
        hi = std::max(hi, z(n, i));
        offsets.push_back(z(n, i) - out.step * std::floor(z(n, i) / out.step));
      }
      std::sort(offsets.begin(), offsets.end());
      offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
      double bestOffset = 0.0;
      long bestCount = -1;
      for (double t : offsets) {
        long count = 0;
        for (int e : inner) {
          if (z.has_jump(e)) continue;
          const auto ed = g.edge(e);
          if (detail::lattice_floor(z(ed.a, i), t, out.step) != detail::lattice_floor(z(ed.b, i), t, out.step))
            ++count;
        }
        if (bestCount < 0 || count < bestCount) {
          bestCount = count;
          bestOffset = t;
        }
      }
      for (int n = 0; n < g.node_count(); ++n) {
        if (!mask[n]) continue;
        const double q = bestOffset + out.step * (detail::lattice_floor(z(n, i), bestOffset, out.step) + 0.5);
        out.zpc(n, i) = std::clamp(q, lo, hi);
      }
    }
  }

  detail::DisjointSets sets(g.node_count());
  for (int e : inner) {
    const auto ed = g.edge(e);
    bool same = true;
    for (int i = 0; i < m; ++i) same = same && out.zpc(ed.a, i) == out.zpc(ed.b, i);
    out.zpc.set_crack(e, !same);
    if (same)
      sets.unite(ed.a, ed.b);
    else if (!z.has_jump(e))
      out.addedBoundary += g.facet_measure();
  }

  out.partition.assign(g.node_count(), -1);
  std::vector<int> rootId(g.node_count(), -1);
  for (int n = 0; n < g.node_count(); ++n) {
    if (!mask[n]) continue;
    const int r = sets.find(n);
    if (rootId[r] < 0) rootId[r] = out.parts++;
    out.partition[n] = rootId[r];
    double err = 0.0;
    for (int i = 0; i < m; ++i) err += (z(n, i) - out.zpc(n, i)) * (z(n, i) - out.zpc(n, i));
    out.supError = std::max(out.supError, std::sqrt(err));
  }
  return out;
}

}  // namespace vexfd
