#pragma once

// Quantiles, median and the truncation operator T_B on discrete SBV functions.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "vexfd/sbv.hpp"

namespace vexfd {

// Isoperimetric constant used when none is configured: 1 in 1D, 2 in 2D.
inline double default_gamma_iso(int dim) { return dim == 1 ? 1.0 : 2.0; }

namespace detail {

// Smallest sample value v with measure{u <= v} >= s. Ties resolve to the
// infimum; s <= 0 yields the minimum (essential infimum).
inline double weighted_quantile(std::vector<std::pair<double, double>> samples, double s) {
  std::sort(samples.begin(), samples.end());
  double total = 0.0;
  for (const auto& [v, w] : samples) total += w;
  const double slack = 1e-12 * total;
  double cum = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    cum += samples[k].second;
    const bool lastOfValue = k + 1 == samples.size() || samples[k + 1].first != samples[k].first;
    if (lastOfValue && cum >= s - slack) return samples[k].first;
  }
  return samples.back().first;
}

}  // namespace detail

// Componentwise quantile u_*(s; B) with cell-volume weights.
inline Vec quantile(const SbvGridFunction& u, double s, const Region& ball) {
  const Grid& g = u.grid();
  const auto nodes = ball.nodes(g);
  if (nodes.empty()) throw DomainError("quantile: ball contains no grid nodes");
  double measure = 0.0;
  for (int n : nodes) measure += g.node_weight(n);
  if (s < 0.0 || s > measure * (1.0 + 1e-12))
    throw PreconditionError("quantile: s outside [0, L(B)]");
  Vec q(u.components());
  std::vector<std::pair<double, double>> samples(nodes.size());
  for (int i = 0; i < u.components(); ++i) {
    for (std::size_t k = 0; k < nodes.size(); ++k)
      samples[k] = {u(nodes[k], i), g.node_weight(nodes[k])};
    q[i] = detail::weighted_quantile(samples, s);
  }
  return q;
}

inline Vec median(const SbvGridFunction& u, const Region& ball) {
  return quantile(u, 0.5 * ball.measure(u.grid()), ball);
}

struct TruncationData {
  Vec lower;            // tau'
  Vec median;           // med(u; B)
  Vec upper;            // tau''
  double threshold = 0; // s0 = (2 gamma_iso H(J_u cap B))^{d/(d-1)}
  double ballMeasure = 0;
  double gammaIso = 0;
  double changedMeasure = 0;  // L({T_B u != u} cap B)
  bool changedBoundHolds = true;  // changedMeasure <= 2 s0
};

// (2 gamma H)^{d/(d-1)}; in 1D the exponent is read as its limit, so the
// threshold is 0 below 1, 1 at 1 and infinite above.
inline double truncation_threshold(int dim, double gammaIso, double jumpMeasure) {
  const double base = 2.0 * gammaIso * jumpMeasure;
  if (dim == 1) {
    if (base < 1.0) return 0.0;
    if (base == 1.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(base, static_cast<double>(dim) / (dim - 1));
}

// T_B u = (u ^ tau'') v tau', applied at every node with thresholds taken on B.
inline std::pair<SbvGridFunction, TruncationData> truncate(const SbvGridFunction& u, const Region& ball,
                                                           double gammaIso) {
  const Grid& g = u.grid();
  TruncationData td;
  td.gammaIso = gammaIso;
  td.ballMeasure = ball.measure(g);
  if (td.ballMeasure <= 0.0) throw DomainError("truncate: ball contains no grid nodes");
  td.threshold = truncation_threshold(g.dim(), gammaIso, u.jump_measure(ball));
  if (td.threshold > 0.5 * td.ballMeasure) throw JumpSetTooLarge(td.threshold, 0.5 * td.ballMeasure);

  td.lower = quantile(u, td.threshold, ball);
  td.upper = quantile(u, td.ballMeasure - td.threshold, ball);
  td.median = quantile(u, 0.5 * td.ballMeasure, ball);

  SbvGridFunction out = u;
  const int m = u.components();
  for (int n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < m; ++i) out(n, i) = std::clamp(u(n, i), td.lower[i], td.upper[i]);
  out.drop_null_cracks();

  for (int n : ball.nodes(g)) {
    bool changed = false;
    for (int i = 0; i < m; ++i) changed = changed || out(n, i) != u(n, i);
    if (changed) td.changedMeasure += g.node_weight(n);
  }
  td.changedBoundHolds = td.changedMeasure <= 2.0 * td.threshold * (1.0 + 1e-12);
  return {std::move(out), std::move(td)};
}

// Empirical Poincare ratio ||T_B u - med(u;B)||_{p(.)} / ||grad u||_{p(.)} on B.
// The constant in front is not certified; callers track its behaviour.
inline double poincare_ratio(const SbvGridFunction& u, const VarExponent& p, const Region& ball,
                             double gammaIso) {
  const Grid& g = u.grid();
  auto [t, td] = truncate(u, ball, gammaIso);
  GridFunction dev(g, u.components());
  for (int n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < u.components(); ++i) dev(n, i) = t(n, i) - td.median[i];
  // Gradient magnitudes live on cells; sample them at each cell's anchor node.
  GridFunction grad(g, 1);
  for (int c = 0; c < g.cell_count(); ++c) grad(g.cell_anchor(c), 0) = u.cell_gradient(c).norm();
  const double denom = luxembourg_norm(grad, p, ball);
  const double num = luxembourg_norm(dev, p, ball);
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace vexfd
