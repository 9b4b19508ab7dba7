#include <algorithm>
#include <catch_amalgamated.hpp>
#include <cmath>

#include "vexfd/experiments.hpp"
#include "vexfd/glue.hpp"
#include "vexfd/pc_project.hpp"
#include "vexfd/truncation.hpp"

using namespace vexfd;
using Catch::Approx;

namespace {

// inf{t : |{u <= t} cap B| >= s}, by direct summation for every candidate value.
double oracle_quantile(const SbvGridFunction& u, int i, double s, const Region& ball) {
  const Grid& g = u.grid();
  const auto nodes = ball.nodes(g);
  std::vector<double> values;
  for (int n : nodes) values.push_back(u(n, i));
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (int n : nodes) total += g.node_weight(n);
  for (double t : values) {
    double below = 0.0;
    for (int n : nodes)
      if (u(n, i) <= t) below += g.node_weight(n);
    if (below >= s - 1e-12 * total) return t;
  }
  return values.back();
}

SbvGridFunction from(const Grid& g, const std::function<double(const Point&)>& f) {
  return SbvGridFunction(GridFunction::scalar(g, f));
}

EnergyContext quadratic_context(const Grid& g, double kappa = 1.0) {
  return EnergyContext(g, catalog::power(std::make_shared<const VarExponent>(VarExponent::constant(g, 2.0))),
                       catalog::const_surface(kappa));
}

}  // namespace

TEST_CASE("quantile of a constant is the constant") {
  const Grid g = Grid::square(16, 16, 1.0 / 16);
  const Region B = Region::ball({0.5, 0.5}, 0.3);
  const auto u = from(g, [](const Point&) { return 3.25; });
  for (double s : {0.0, 0.05, 0.1, B.measure(g)}) CHECK(quantile(u, s, B)[0] == 3.25);
}

TEST_CASE("quantile of a two-level function") {
  const Grid g = Grid::line(64, 1.0 / 64);
  const Region B = Region::ball({0.5 + 1.0 / 128, 0.0}, 0.25);
  const auto u = from(g, [](const Point& x) { return x[0] < 0.5 ? 0.0 : 1.0; });
  const double L = B.measure(g);
  CHECK(quantile(u, 0.25 * L, B)[0] == oracle_quantile(u, 0, 0.25 * L, B));
  CHECK(quantile(u, 0.25 * L, B)[0] == 0.0);
  CHECK(quantile(u, 0.75 * L, B)[0] == 1.0);
}

TEST_CASE("median ties resolve to the lower level") {
  const Grid g = Grid::line(64, 1.0 / 64);
  const Point c{0.5 + 1.0 / 128, 0.0};
  const Region B = Region::ball(c, 0.2);
  const auto u = from(g, [&](const Point& x) { return x[0] < c[0] ? -1.0 : 1.0; });
  CHECK(median(u, B)[0] == -1.0);
  CHECK(oracle_quantile(u, 0, 0.5 * B.measure(g), B) == -1.0);
}

TEST_CASE("quantile preconditions") {
  const Grid g = Grid::line(16, 1.0 / 16);
  const auto u = from(g, [](const Point& x) { return x[0]; });
  CHECK_THROWS_AS(quantile(u, 0.1, Region::ball({5.0, 0.0}, 0.01)), DomainError);
  CHECK_THROWS_AS(quantile(u, -0.1, Region::whole()), PreconditionError);
  CHECK_THROWS_AS(quantile(u, 2.0, Region::whole()), PreconditionError);
}

TEST_CASE("quantile agrees with the oracle and is monotone in s") {
  Rng rng(11);
  const Grid g = Grid::square(12, 12, 1.0 / 12);
  const Region B = Region::ball({0.5, 0.5}, 0.4);
  const double L = B.measure(g);
  for (int trial = 0; trial < 30; ++trial) {
    SbvGridFunction u(sample::random_values(g, 2, rng));
    // Repeated values exercise the tie rule.
    for (int n = 0; n < g.node_count(); n += 3) u(n, 0) = u(0, 0);
    double previous[2] = {-1e300, -1e300};
    for (int k = 0; k <= 20; ++k) {
      const double s = L * k / 20.0;
      const Vec q = quantile(u, s, B);
      for (int i = 0; i < 2; ++i) {
        CHECK(q[i] == oracle_quantile(u, i, s, B));
        CHECK(q[i] >= previous[i]);
        previous[i] = q[i];
      }
    }
  }
}

TEST_CASE("truncation of a crack-free function is the identity") {
  const Grid g = Grid::square(20, 20, 1.0 / 20);
  const auto u = from(g, [](const Point& x) { return std::sin(5 * x[0]) + x[1] * x[1]; });
  const Region B = Region::ball({0.5, 0.5}, 0.3);
  const auto [t, td] = truncate(u, B, 2.0);
  CHECK(td.threshold == 0.0);
  CHECK(td.changedMeasure == 0.0);
  for (int n : B.nodes(g)) CHECK(t(n, 0) == u(n, 0));
}

TEST_CASE("truncation keeps a short step and reports the changed-measure bound") {
  const double h = 1.0 / 32;
  const Grid g = Grid::square(32, 32, h);
  SbvGridFunction u = from(g, [](const Point& x) { return x[0] > 0.5 ? 1.0 : 0.0; });
  int cracked = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto ed = g.edge(e);
    const Point a = g.node_point(ed.a), b = g.node_point(ed.b);
    if ((a[0] > 0.5) != (b[0] > 0.5) && std::abs(a[1] - 0.5) < 1.5 * h) {
      u.set_crack(e, true);
      ++cracked;
    }
  }
  REQUIRE(cracked == 3);
  const Region B = Region::ball({0.5, 0.5}, 0.4);
  const auto [t, td] = truncate(u, B, 2.0);
  CHECK(td.threshold == Approx(std::pow(2.0 * 2.0 * 3 * h, 2.0)));
  CHECK(td.lower[0] == 0.0);
  CHECK(td.upper[0] == 1.0);
  CHECK(t.base().raw() == u.base().raw());
  CHECK(td.changedBoundHolds);
}

TEST_CASE("truncation clamps an isolated spike") {
  const double h = 1.0 / 128;
  const Grid g = Grid::square(128, 128, h);
  SbvGridFunction u = from(g, [](const Point&) { return 0.0; });
  const int spike = g.node_index(64, 64);
  u(spike, 0) = 1000.0;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).a == spike || g.edge(e).b == spike) u.set_crack(e, true);
  const Region B = Region::ball({0.5, 0.5}, 0.4);
  const auto [t, td] = truncate(u, B, 2.0);
  CHECK(td.threshold == Approx(std::pow(2.0 * 2.0 * 4 * h, 2.0)));
  const double tau = oracle_quantile(u, 0, B.measure(g) - td.threshold, B);
  CHECK(tau == 0.0);
  CHECK(t(spike, 0) == tau);
  CHECK(t.jump_count() == 0);
  CHECK(td.changedBoundHolds);
}

TEST_CASE("truncation rejects a jump set that is too large") {
  const Grid g = Grid::square(16, 16, 1.0 / 16);
  SbvGridFunction u = from(g, [](const Point& x) { return x[0] > 0.5 ? 1.0 : 0.0; });
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto ed = g.edge(e);
    if ((g.node_point(ed.a)[0] > 0.5) != (g.node_point(ed.b)[0] > 0.5)) u.set_crack(e, true);
  }
  CHECK_THROWS_AS(truncate(u, Region::ball({0.5, 0.5}, 0.45), 2.0), JumpSetTooLarge);
  // In 1D any crack in the ball is too much once 2 gamma H reaches 1.
  const Grid line = Grid::line(32, 1.0 / 32);
  SbvGridFunction v = from(line, [](const Point& x) { return x[0] > 0.5 ? 1.0 : 0.0; });
  for (int e = 0; e < line.edge_count(); ++e) v.set_crack(e, v.has_jump(e) || v.diff(e, 0) != 0.0);
  CHECK_THROWS_AS(truncate(v, Region::ball({0.5, 0.0}, 0.3), 1.0), JumpSetTooLarge);
}

TEST_CASE("truncation invariants on random cracked functions") {
  const Grid g = Grid::square(24, 24, 1.0 / 24);
  const Point c{0.5, 0.5};
  const double r = 0.4;
  const Region B = Region::ball(c, r);
  const double gammaIso = 2.0;
  const double maxCrack = 1.5 * std::sqrt(0.5 * B.measure(g)) / (2.0 * gammaIso);
  Rng rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const SbvGridFunction u = sample::cracked_function(g, c, r, maxCrack, rng);
    INFO("trial " << trial);
    std::pair<SbvGridFunction, TruncationData> once;
    try {
      once = truncate(u, B, gammaIso);
    } catch (const JumpSetTooLarge&) {
      CHECK(truncation_threshold(2, gammaIso, u.jump_measure(B)) > 0.5 * B.measure(g));
      continue;
    }
    const auto& [t, td] = once;
    CHECK(td.lower[0] <= td.median[0]);
    CHECK(td.median[0] <= td.upper[0]);
    CHECK(td.changedBoundHolds);
    CHECK(t.jump_count() <= u.jump_count());
    for (int e = 0; e < g.edge_count(); ++e) CHECK(std::abs(t.diff(e, 0)) <= std::abs(u.diff(e, 0)));
    const auto twice = truncate(t, B, gammaIso);
    CHECK(twice.first.base().raw() == t.base().raw());
    CHECK(twice.first.crack_flags() == t.crack_flags());
  }
}

TEST_CASE("pc projection of constants and pure jumps is exact") {
  const Grid g = Grid::square(10, 10, 0.1);
  const auto c = from(g, [](const Point&) { return 1.5; });
  const auto pc = pc_project(c, Region::whole(), 0.5);
  CHECK(pc.parts == 1);
  CHECK(pc.addedBoundary == 0.0);
  CHECK(pc.zpc.base().raw() == c.base().raw());

  SbvGridFunction z = from(g, [](const Point& x) { return x[0] > 0.5 ? 2.0 : -1.0; });
  for (int e = 0; e < g.edge_count(); ++e) z.set_crack(e, z.diff(e, 0) != 0.0);
  const auto pz = pc_project(z, Region::whole(), 0.5);
  CHECK(pz.parts == 2);
  CHECK(pz.addedBoundary == 0.0);
  CHECK(pz.supError == 0.0);
  CHECK(pz.zpc.base().raw() == z.base().raw());
  CHECK_THROWS_AS(pc_project(z, Region::whole(), 0.0), PreconditionError);
}

TEST_CASE("pc projection of the identity on the unit interval") {
  const Grid g = Grid::line(50, 1.0 / 50);
  const auto z = from(g, [](const Point& x) { return x[0]; });
  double l1 = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) l1 += std::abs(z.diff(e, 0));
  const auto pc = pc_project(z, Region::whole(), 1.0, 2.0);
  CHECK(pc.gradientL1 == Approx(l1));
  CHECK(pc.errorBound == Approx(2.0));
  CHECK(pc.supError <= pc.errorBound);
  CHECK(pc.addedBoundary <= 1.0);
}

TEST_CASE("pc projection bounds hold on random inputs") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const Grid g = trial % 2 ? Grid::square(12, 12, 1.0 / 12) : Grid::line(40, 1.0 / 40);
    const int m = 1 + trial % 3 / 2;
    const SbvGridFunction z = sample::random_sbv(g, m, rng);
    const double theta = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const Region D = trial % 3 == 0 ? Region::whole() : Region::box({0.2, 0.2}, {0.8, 0.8});
    const auto pc = pc_project(z, D, theta, 2.0);
    INFO("trial " << trial);
    CHECK(pc.supError <= pc.errorBound * (1.0 + 1e-12));
    CHECK(pc.addedBoundary <= theta * (1.0 + 1e-12));
    const auto mask = D.node_mask(g);
    for (int i = 0; i < m; ++i) {
      double lo = 1e300, hi = -1e300;
      for (int n = 0; n < g.node_count(); ++n)
        if (mask[n]) lo = std::min(lo, z(n, i)), hi = std::max(hi, z(n, i));
      for (int n = 0; n < g.node_count(); ++n)
        if (mask[n]) CHECK((pc.zpc(n, i) >= lo && pc.zpc(n, i) <= hi));
    }
  }
}

namespace {

struct GlueSetup {
  Grid g = Grid::square(20, 20, 1.0 / 20);
  EnergyContext ctx = quadratic_context(g);
  Region Dp = Region::ball({0.4, 0.5}, 0.15);
  Region Dpp = Region::ball({0.4, 0.5}, 0.35);
  Region E = Region::box({0.3, 0.0}, {1.0, 1.0});
};

}  // namespace

TEST_CASE("gluing a function with itself returns it") {
  GlueSetup s;
  Rng rng(1);
  const SbvGridFunction u = sample::random_sbv(s.g, 1, rng);
  const double eta = 0.5;
  const auto r = glue_with_cutoff(u, u, s.Dp, s.Dpp, s.E, eta, s.ctx);
  CHECK(r.w.base().raw() == u.base().raw());
  CHECK(r.remainder == 0.0);
  const Region DpE([&](const Point& x) { return s.Dp.contains(x) || s.E.contains(x); });
  const double lhs = eval_energy(s.ctx, r.w, DpE).total;
  CHECK(lhs <= (1.0 + eta) * (r.energyU + r.energyV) + eta * DpE.measure(s.g) + 1e-12);
}

TEST_CASE("gluing two constants bounds the cut-off gradient") {
  GlueSetup s;
  const auto a = from(s.g, [](const Point&) { return 0.0; });
  const auto b = from(s.g, [](const Point&) { return 3.0; });
  const auto r = glue_with_cutoff(a, b, s.Dp, s.Dpp, s.E, 0.5, s.ctx);
  CHECK(r.energy <= r.certifiedBound);
  const double cap = 3.0 * 2.0 * r.k / r.delta;
  for (int e = 0; e < s.g.edge_count(); ++e) CHECK(std::abs(r.w.diff(e, 0)) / s.g.h() <= cap * (1.0 + 1e-12));
}

TEST_CASE("gluing rejects an unreachable strip count") {
  GlueSetup s;
  const auto a = from(s.g, [](const Point&) { return 0.0; });
  CHECK_THROWS_AS(glue_with_cutoff(a, a, s.Dp, s.Dpp, s.E, 1e-9, s.ctx), ParameterError);
  CHECK_THROWS_AS(glue_with_cutoff(a, a, s.Dpp, s.Dp, s.E, 0.5, s.ctx), PreconditionError);
}

TEST_CASE("gluing on random cracked pairs") {
  GlueSetup s;
  Rng rng(100);
  const std::vector<double> etas{0.5, 0.1, 0.02};
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 2;
    const SbvGridFunction u = sample::random_sbv(s.g, m, rng);
    const SbvGridFunction v = sample::random_sbv(s.g, m, rng);
    INFO("trial " << trial);
    const auto r = glue_with_cutoff(u, v, s.Dp, s.Dpp, s.E, etas[trial % 3], s.ctx);
    CHECK(r.energy <= r.certifiedBound);
    for (int n = 0; n < s.g.node_count(); ++n) {
      const Point x = s.g.node_point(n);
      for (int i = 0; i < m; ++i) {
        if (s.Dp.contains(x)) CHECK(r.w(n, i) == u(n, i));
        if (s.E.contains(x) && !s.Dpp.contains(x)) CHECK(r.w(n, i) == v(n, i));
      }
    }
  }
}
