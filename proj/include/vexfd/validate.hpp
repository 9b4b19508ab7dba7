#pragma once

// Monte-Carlo checks of the structural hypotheses on bulk and surface densities.

#include <cstdint>
#include <string>
#include <vector>

#include "vexfd/density.hpp"

namespace vexfd {

struct HypothesisCheck {
  std::string name;  // "f2", "f3", "g2", "g3", "g5", "g6", "g7"
  int samples = 0;
  int violations = 0;
  bool skipped = false;  // modulus not supplied
  double worstExcess = 0.0;
  std::string witness;  // first violating sample
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.violations > 0) return false;
    return true;
  }
  const HypothesisCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

struct Sampler {
  Rng rng;
  const Grid& grid;
  int m;

  Point x() {
    Point p{grid.origin()[0] + rng.uniform() * grid.cells(0) * grid.h(), 0.0};
    if (grid.dim() == 2) p[1] = grid.origin()[1] + rng.uniform() * grid.cells(1) * grid.h();
    return p;
  }
  // Magnitudes spread log-uniformly over [1e-3, 1e3].
  double magnitude() { return std::pow(10.0, rng.uniform(-3.0, 3.0)); }
  Point nu() {
    if (grid.dim() == 1) return {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0};
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(t), std::sin(t)};
  }
  Vec direction() {
    Vec z(m);
    double n = 0.0;
    while (n < 1e-8) {
      for (int i = 0; i < m; ++i) z[i] = rng.uniform(-1.0, 1.0);
      n = z.norm();
    }
    for (int i = 0; i < m; ++i) z[i] /= n;
    return z;
  }
  Vec zeta(double r) {
    Vec z = direction();
    for (int i = 0; i < m; ++i) z[i] *= r;
    return z;
  }
  Gradient xi(double r) {
    Gradient g(m, grid.dim());
    double n = 0.0;
    while (n < 1e-8) {
      for (int k = 0; k < m * grid.dim(); ++k) g.v[k] = rng.uniform(-1.0, 1.0);
      n = g.norm();
    }
    for (int k = 0; k < m * grid.dim(); ++k) g.v[k] *= r / n;
    return g;
  }
};

inline std::string fmt_vec(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}
inline std::string fmt_point(const Point& p, int dim) {
  std::ostringstream os;
  os << '(' << p[0];
  if (dim == 2) os << ',' << p[1];
  os << ')';
  return os.str();
}
inline std::string fmt_grad(const Gradient& g) {
  std::ostringstream os;
  os << '[';
  for (int k = 0; k < g.m * g.d; ++k) os << (k ? "," : "") << g.v[k];
  os << ']';
  return os.str();
}

// Records lhs <= rhs with a relative tolerance.
inline void record(HypothesisCheck& c, double lhs, double rhs, const std::function<std::string()>& witness) {
  ++c.samples;
  const double excess = lhs - rhs;
  if (std::isnan(lhs) || std::isnan(rhs) || excess > 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)})) {
    if (c.violations == 0) c.witness = witness();
    ++c.violations;
    c.worstExcess = std::max(c.worstExcess, std::isnan(excess) ? INFINITY : excess);
  }
}

}  // namespace detail

// Samples sampleBudget points per hypothesis. Violations are report entries.
inline ValidationReport validate_hypotheses(const EnergyContext& ctx, int sampleBudget, std::uint64_t seed,
                                            int components = 1) {
  require(components >= 1 && components <= kMaxComponents, "validate_hypotheses: bad component count");
  const int d = ctx.grid.dim();
  detail::Sampler s{Rng(seed), ctx.grid, components};
  const auto& f = ctx.bulk;
  const auto& g = ctx.surface;
  auto named = [](std::string n) {
    HypothesisCheck c;
    c.name = std::move(n);
    return c;
  };
  HypothesisCheck f2 = named("f2"), f3 = named("f3"), g2 = named("g2"),
                  g3 = named(g.mode == SurfaceGrowth::bounded ? "g3" : "g3'"), g5 = named("g5"), g6 = named("g6"),
                  g7 = named("g7");
  f3.skipped = !f.omega1;
  g6.skipped = !g.omega2;

  for (int k = 0; k < sampleBudget; ++k) {
    const Point x = s.x();
    const double p = f.p(x);
    const Gradient xi = s.xi(k % 8 == 0 ? 0.0 : s.magnitude());
    const double fx = f(x, xi);
    const double np = std::pow(xi.norm(), p);
    auto wf = [&] { return "x=" + detail::fmt_point(x, d) + " xi=" + detail::fmt_grad(xi) + " f=" + std::to_string(fx); };
    detail::record(f2, f.alpha * np, fx, wf);
    detail::record(f2, fx, f.beta * (1.0 + np), wf);
    detail::record(f2, 0.0, fx, wf);

    if (f.omega1) {
      Gradient xi2 = xi;
      const double dr = s.magnitude() * 1e-2;
      const Gradient dxi = s.xi(dr);
      for (int q = 0; q < xi.m * xi.d; ++q) xi2.v[q] += dxi.v[q];
      const double f2v = f(x, xi2);
      detail::record(f3, std::abs(fx - f2v), f.omega1(dr) * (1.0 + fx + f2v), [&] {
        return wf() + " xi2=" + detail::fmt_grad(xi2);
      });
    }

    const Point nu = s.nu();
    const Vec z1 = s.zeta(s.magnitude());
    const double g1 = g(x, z1, nu);
    auto wg = [&](const Vec& z, double v) {
      return "x=" + detail::fmt_point(x, d) + " zeta=" + detail::fmt_vec(z) + " nu=" + detail::fmt_point(nu, d) +
             " g=" + std::to_string(v);
    };
    detail::record(g3, g.alpha, g1, [&] { return wg(z1, g1); });
    detail::record(g3, g1, g.upper(z1), [&] { return wg(z1, g1); });

    const double gm = g(x, -z1, -1.0 * nu);
    detail::record(g7, std::abs(g1 - gm), 0.0, [&] { return wg(z1, g1) + " g(-zeta,-nu)=" + std::to_string(gm); });

    // A second jump in a random direction, |z2| >= c |z1| for (g2) and |z2| >= |z1| for (g5).
    const Vec z2 = s.zeta(g.c * z1.norm() * (1.0 + s.rng.uniform() * 3.0));
    const double g2v = g(x, z2, nu);
    detail::record(g2, g1, g2v, [&] { return wg(z1, g1) + " zeta2=" + detail::fmt_vec(z2) + " g2=" + std::to_string(g2v); });
    const Vec z3 = s.zeta(z1.norm() * (1.0 + s.rng.uniform()));
    const double g3v = g(x, z3, nu);
    detail::record(g5, g1, g.c * g3v, [&] { return wg(z1, g1) + " zeta2=" + detail::fmt_vec(z3) + " g2=" + std::to_string(g3v); });

    if (g.omega2) {
      Vec z4 = z1;
      const Vec dz = s.zeta(s.magnitude() * 1e-2);
      for (int i = 0; i < components; ++i) z4[i] += dz[i];
      if (z4.norm() > 0.0) {
        const double g4 = g(x, z4, nu);
        detail::record(g6, std::abs(g1 - g4), g.omega2(dz.norm()) * (g1 + g4),
                       [&] { return wg(z1, g1) + " zeta2=" + detail::fmt_vec(z4) + " g2=" + std::to_string(g4); });
      }
    }
  }
  ValidationReport r;
  r.checks = {f2, f3, g2, g3, g5, g6, g7};
  return r;
}

}  // namespace vexfd
