#pragma once

// Independent reference values for tests: exhaustive 1D cell minimisation and
// closed-form homogenised coefficients.

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "vexfd/cell.hpp"

namespace oracle {

// Minimum of sum_e h a_e |s_e|^{p_e} subject to sum_e h s_e = delta.
// Optimality makes the flux a_e p_e |s_e|^{p_e - 1} sign(s_e) constant; the
// flux is found by bisection.
inline double chain_energy(const std::vector<double>& a, const std::vector<double>& p, double h, double delta) {
  if (delta == 0.0 || a.empty()) return delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  const double target = std::abs(delta);
  auto slopes = [&](double flux, std::vector<double>& s) {
    double total = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) {
      s[e] = std::pow(flux / (a[e] * p[e]), 1.0 / (p[e] - 1.0));
      total += h * s[e];
    }
    return total;
  };
  std::vector<double> s(a.size());
  double lo = 0.0, hi = 1.0;
  while (slopes(hi, s) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slopes(mid, s) < target ? lo : hi) = mid;
  }
  slopes(0.5 * (lo + hi), s);
  // Rescale the slopes to satisfy the constraint exactly.
  const double got = std::accumulate(s.begin(), s.end(), 0.0) * h;
  double energy = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) energy += h * a[e] * std::pow(s[e] * target / got, p[e]);
  return energy;
}

// Exact discrete minimum of a scalar 1D sbv cell problem whose bulk density
// is a(x)|xi|^{p(x)} and whose surface density does not depend on the jump:
// every crack subset of the in-ball edges is enumerated, and the free values
// between cracks are solved exactly. Pinned nodes are those outside the open
// ball plus ring_width layers.
inline double brute_force_sbv_1d(const vexfd::CellProblem& pr) {
  using namespace vexfd;
  const int n = pr.params.nodesPerAxis;
  const double h = 2.0 * pr.eps / n, left = pr.x0[0] - pr.eps;
  auto node_x = [&](int i) { return left + i * h; };
  std::vector<int> layer(n + 1, -1);
  for (int i = 0; i <= n; ++i)
    if (std::abs(node_x(i) - pr.x0[0]) >= pr.eps - 1e-9 * h) layer[i] = 0;
  for (int l = 1; l <= pr.params.ringWidth; ++l)
    for (int i = 0; i <= n; ++i)
      if (layer[i] < 0 && ((i > 0 && layer[i - 1] == l - 1) || (i < n && layer[i + 1] == l - 1))) layer[i] = l;
  std::vector<double> value(n + 1), a(n), p(n), g(n);
  for (int i = 0; i <= n; ++i) value[i] = pr.datum.at({node_x(i), 0.0})[0];
  for (int e = 0; e < n; ++e) {
    Gradient one(1, 1);
    one(0, 0) = 1.0;
    const Point mid{left + (e + 0.5) * h, 0.0};
    a[e] = pr.ctx.bulk(mid, one);
    p[e] = pr.ctx.bulk.p(mid);
    g[e] = pr.ctx.surface(mid, Vec{1.0}, {1.0, 0.0});
  }
  // In-ball edges can be cracked; the others keep the datum's crack state.
  std::vector<int> toggle;
  std::vector<char> fixedCrack(n, 0);
  for (int e = 0; e < n; ++e) {
    const double mid = left + (e + 0.5) * h;
    if (std::abs(mid - pr.x0[0]) < pr.eps)
      toggle.push_back(e);
    else
      fixedCrack[e] = value[e] != value[e + 1];
  }
  double best = std::numeric_limits<double>::infinity();
  const long subsets = 1L << toggle.size();
  for (long mask = 0; mask < subsets; ++mask) {
    std::vector<char> crack = fixedCrack;
    for (std::size_t k = 0; k < toggle.size(); ++k) crack[toggle[k]] = (mask >> k) & 1;
    double energy = 0.0;
    for (int e = 0; e < n; ++e)
      if (crack[e]) energy += g[e];
    // Uncracked runs between consecutive pinned nodes carry the bulk.
    int lastPinned = -1;
    for (int i = 0; i <= n && energy < best; ++i) {
      if (i > 0 && crack[i - 1]) lastPinned = -1;
      if (layer[i] < 0) continue;
      if (lastPinned >= 0) {
        std::vector<double> aa(a.begin() + lastPinned, a.begin() + i), pp(p.begin() + lastPinned, p.begin() + i);
        energy += chain_energy(aa, pp, h, value[i] - value[lastPinned]);
      }
      lastPinned = i;
    }
    best = std::min(best, energy);
  }
  return best;
}

// Effective coefficient of a(y)|xi|^p with a periodic in one dimension.
inline double homogenized_coefficient(const std::vector<double>& a, double p) {
  double mean = 0.0;
  for (double v : a) mean += std::pow(v, -1.0 / (p - 1.0));
  mean /= static_cast<double>(a.size());
  return std::pow(mean, -(p - 1.0));
}

}  // namespace oracle
