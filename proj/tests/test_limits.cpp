#include <catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "vexfd/limits.hpp"

using namespace vexfd;
using Catch::Approx;

namespace {

Grid domain_1d() { return Grid::covering(1, 64, -1.0, 1.0); }

DensitySequenceSpec constant_spec(double p, SurfaceDensity g) {
  const Grid d = domain_1d();
  return DensitySequenceSpec::constant("const", d, catalog::power(std::make_shared<const VarExponent>(VarExponent::constant(d, p))),
                                       std::move(g));
}

DensitySequenceSpec oscillating_spec(std::vector<double> a, double p) {
  const Grid d = domain_1d();
  auto exponent = std::make_shared<const VarExponent>(VarExponent::constant(d, p));
  DensitySequenceSpec s;
  s.name = "oscillating";
  s.domain = d;
  const PeriodicCoefficient coef{std::move(a)};
  s.bulk = [exponent, coef](int j) { return catalog::weighted_power(exponent, coef, j); };
  s.surface = [](int) { return catalog::const_surface(1.0); };
  s.jTail.clear();
  for (int j = 1; j <= 16; ++j) s.jTail.push_back(j);
  return s;
}

Gradient slope(double xi) {
  Gradient g(1, 1);
  g(0, 0) = xi;
  return g;
}

EstimateOptions options(int nodes = 32) {
  EstimateOptions o;
  o.solver.nodesPerAxis = nodes;
  return o;
}

const Point origin{0.0, 0.0};
const Point e1{1.0, 0.0};

}  // namespace

TEST_CASE("bulk density of a constant quadratic sequence") {
  const auto spec = constant_spec(2.0, catalog::const_surface(1.0));
  const auto est = estimate_bulk_density(spec, origin, slope(2.0), CompetitorClass::sbv, options());
  CHECK(est.limitEstimate == Approx(4.0).epsilon(0.02));
  CHECK_FALSE(est.warning);
  CHECK(estimate_bulk_density(spec, origin, slope(0.0), CompetitorClass::sbv, options()).limitEstimate == 0.0);
}

TEST_CASE("surface density of a constant surface sequence") {
  for (double kappa : {0.3, 1.0, 2.5}) {
    const auto spec = constant_spec(2.0, catalog::const_surface(kappa));
    for (auto cls : {CompetitorClass::sbv, CompetitorClass::pc}) {
      const auto est = estimate_surface_density(spec, origin, Vec{1.0}, e1, cls, options());
      CHECK(est.limitEstimate == Approx(kappa).epsilon(1e-12));
    }
  }
}

TEST_CASE("capped surface density sees the jump amplitude") {
  const auto spec = constant_spec(2.0, catalog::capped_linear(1.0, 2.0));
  CHECK(estimate_surface_density(spec, origin, Vec{0.5}, e1, CompetitorClass::pc, options()).limitEstimate ==
        Approx(1.5).epsilon(1e-12));
  CHECK(estimate_surface_density(spec, origin, Vec{3.0}, e1, CompetitorClass::pc, options()).limitEstimate ==
        Approx(2.0).epsilon(1e-12));
}

TEST_CASE("surface estimates are symmetric under zeta, nu -> -zeta, -nu") {
  const auto spec = constant_spec(2.5, catalog::capped_linear(0.5, 1.5));
  for (auto cls : {CompetitorClass::sbv, CompetitorClass::pc}) {
    const auto a = estimate_surface_density(spec, origin, Vec{0.7}, e1, cls, options(24));
    const auto b = estimate_surface_density(spec, origin, Vec{-0.7}, {-1.0, 0.0}, cls, options(24));
    REQUIRE(a.ladder.size() == b.ladder.size());
    for (std::size_t k = 0; k < a.ladder.size(); ++k) CHECK(a.ladder[k].raw == Approx(b.ladder[k].raw).epsilon(1e-12));
  }
}

TEST_CASE("Sobolev bulk estimate is p-homogeneous") {
  const double p = 2.5;
  const auto spec = constant_spec(p, catalog::const_surface(1.0));
  const double base = estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::sobolev, options()).limitEstimate;
  for (double lambda : {0.5, 2.0, 3.0}) {
    const double scaled = estimate_bulk_density(spec, origin, slope(lambda), CompetitorClass::sobolev, options()).limitEstimate;
    CHECK(scaled == Approx(std::pow(lambda, p) * base).epsilon(1e-9));
  }
}

TEST_CASE("estimate aggregation and ladder preconditions") {
  const auto spec = constant_spec(2.0, catalog::const_surface(1.0));
  auto opt = options(16);
  opt.epsilons = {0.25, 0.125, 0.0625};
  const auto est = estimate_bulk_density(spec, origin, slope(1.5), CompetitorClass::sbv, opt);
  REQUIRE(est.perEpsilon.size() == 3);
  CHECK(est.limitEstimate == *std::max_element(est.perEpsilon.begin(), est.perEpsilon.end()));
  CHECK(est.tailSpread >= 0.0);
  opt.epsilons = {0.125, 0.25};
  CHECK_THROWS_AS(estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::sbv, opt), PreconditionError);
  opt.epsilons = {};
  CHECK_THROWS_AS(estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::sbv, opt), PreconditionError);
  CHECK_THROWS_AS(estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::pc, options()), PreconditionError);
  CHECK_THROWS_AS(estimate_surface_density(spec, origin, Vec{0.0}, e1, CompetitorClass::pc, options()), PreconditionError);
}

TEST_CASE("separation of scales for constant sequences") {
  const auto spec = constant_spec(2.0, catalog::const_surface(1.0));
  const auto r = separation_check(spec, origin, slope(1.0), Vec{1.0}, e1, 0.02, options());
  CHECK(r.bulkGap <= 0.02);
  CHECK(r.surfaceGap <= 0.02);
  CHECK(r.classViolations == 0);
  CHECK(r.passed);
  CHECK(r.bulkSobolev.limitEstimate == Approx(1.0).epsilon(1e-9));
  CHECK(r.surfacePc.limitEstimate == 1.0);
}

TEST_CASE("perturbation ladder for a constant surface") {
  const auto spec = constant_spec(2.0, catalog::const_surface(1.0));
  const std::vector<double> sigmas{1.0, 0.5, 0.25};
  const auto opt = options();
  const auto r = perturbation_ladder(spec, origin, Vec{1.0}, e1, sigmas, 0.03, opt);
  REQUIRE(r.values.size() == 3);
  // On the smallest ball the crack may hand an amount d of its amplitude to a
  // linear ramp over the free length L beside it: 1 + sigma (1 - d) + d^2 / L
  // is smallest at d = sigma L / 2, giving 1 + sigma - sigma^2 L / 4.
  const int n = opt.solver.nodesPerAxis;
  const double L = (n - 3) * 2.0 * opt.epsilons.back() / n;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    CHECK(r.values[k] == Approx(1.0 + sigmas[k] - sigmas[k] * sigmas[k] * L / 4.0).epsilon(1e-9));
    CHECK(r.values[k] == Approx(1.0 + sigmas[k]).epsilon(0.01));
  }
  CHECK(r.extrapolated == Approx(1.0).epsilon(0.01));
  CHECK(r.passed());
  CHECK_THROWS_AS(perturbation_ladder(spec, origin, Vec{1.0}, e1, {}, 0.03, options()), PreconditionError);
  CHECK_THROWS_AS(perturbation_ladder(spec, origin, Vec{1.0}, e1, {0.5, 1.0}, 0.03, options()), PreconditionError);
}

TEST_CASE("perturbation values decrease with sigma for random capped surfaces") {
  Rng rng(6);
  for (int trial = 0; trial < 4; ++trial) {
    const double alpha = rng.uniform(0.3, 1.0), beta = alpha + rng.uniform(0.0, 1.5);
    const auto spec = constant_spec(2.0, catalog::capped_linear(alpha, beta));
    const auto r = perturbation_ladder(spec, origin, Vec{rng.uniform(0.2, 2.0)}, e1, {0.8, 0.4, 0.2, 0.1}, 0.0, options(16));
    INFO("trial " << trial);
    CHECK(r.monotone);
    CHECK(r.boundedBelow);
  }
}

TEST_CASE("homogenized coefficient oracle") {
  CHECK(homogenize_oracle_1d(PeriodicCoefficient{{1.0}}, 2.7, 1.3) == Approx(std::pow(1.3, 2.7)).epsilon(1e-14));
  CHECK(homogenize_oracle_1d(PeriodicCoefficient{{1.0, 4.0}}, 2.0, 1.0) == Approx(1.6).epsilon(1e-14));
  CHECK(oracle::homogenized_coefficient({1.0, 8.0}, 3.0) == Approx(2.183279).epsilon(1e-6));
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(1 + trial % 5);
    for (double& v : a) v = rng.uniform(0.5, 8.0);
    const double p = rng.uniform(1.5, 4.0), xi = rng.uniform(0.2, 2.0);
    const int j = 1 + trial % 4;
    const double closed = oracle::homogenized_coefficient(a, p) * std::pow(xi, p);
    CHECK(homogenize_oracle_1d(PeriodicCoefficient{a}, p, xi) == Approx(closed).epsilon(1e-12));
    // Exact minimiser over j periods of [0, 1]: piecewise-constant slopes with constant flux.
    std::vector<double> coef, exps;
    for (int r = 0; r < j; ++r)
      for (double v : a) coef.push_back(v), exps.push_back(p);
    const double h = 1.0 / static_cast<double>(coef.size());
    CHECK(oracle::chain_energy(coef, exps, h, xi) == Approx(closed).epsilon(1e-9));
    CHECK(flux_constancy_energy_1d(PeriodicCoefficient{a}, p, xi, j) == Approx(closed).epsilon(1e-9));
  }
  CHECK_THROWS_AS(homogenize_oracle_1d(PeriodicCoefficient{{1.0}}, 1.0, 1.0), InputError);
}

TEST_CASE("oscillating quadratic density homogenizes to the harmonic mean") {
  const auto spec = oscillating_spec({1.0, 4.0}, 2.0);
  const auto sbv = estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::sbv, options(64));
  const auto sob = estimate_bulk_density(spec, origin, slope(1.0), CompetitorClass::sobolev, options(64));
  CHECK(sbv.limitEstimate == Approx(1.6).epsilon(0.05));
  CHECK(class_violations(sbv, sob) == 0);
}
