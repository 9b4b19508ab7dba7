#pragma once

// Bulk and surface integrands, the energy context, and the built-in catalog.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vexfd/varexp.hpp"

namespace vexfd {

using Modulus = std::function<double(double)>;

// f(x, xi) with alpha |xi|^{p(x)} <= f <= beta (1 + |xi|^{p(x)}).
struct BulkDensity {
  std::string name;
  std::function<double(const Point&, const Gradient&)> f;
  double alpha = 1.0;
  double beta = 1.0;
  std::shared_ptr<const VarExponent> exponent;
  Modulus omega1;  // optional continuity modulus in xi

  double operator()(const Point& x, const Gradient& xi) const { return f(x, xi); }
  double p(const Point& x) const { return exponent->at(x); }
  double pPlus() const { return exponent->pPlus(); }
};

enum class SurfaceGrowth { bounded, linear };

// g(x, zeta, nu) with alpha <= g <= beta (bounded) or alpha <= g <= beta (1 + |zeta|) (linear).
struct SurfaceDensity {
  std::string name;
  std::function<double(const Point&, const Vec&, const Point&)> g;
  double alpha = 1.0;
  double beta = 1.0;
  double c = 1.0;  // monotonicity constant, >= 1
  SurfaceGrowth mode = SurfaceGrowth::bounded;
  Modulus omega2;  // optional continuity modulus in zeta

  double operator()(const Point& x, const Vec& zeta, const Point& nu) const { return g(x, zeta, nu); }
  double upper(const Vec& zeta) const {
    return mode == SurfaceGrowth::bounded ? beta : beta * (1.0 + zeta.norm());
  }
};

struct EnergyContext {
  Grid grid;
  BulkDensity bulk;
  SurfaceDensity surface;

  EnergyContext() = default;
  EnergyContext(Grid g, BulkDensity b, SurfaceDensity s)
      : grid(std::move(g)), bulk(std::move(b)), surface(std::move(s)) {
    if (!bulk.f || !surface.g) throw StructuralError("energy context needs both densities");
    if (!bulk.exponent) throw StructuralError("bulk density has no exponent field");
    if (bulk.exponent->grid().dim() != grid.dim())
      throw StructuralError("exponent field dimension differs from energy grid");
  }
  EnergyContext with_grid(Grid g) const { return EnergyContext(std::move(g), bulk, surface); }
  // Constants of the two-sided growth bound satisfied by the whole functional.
  double alpha() const { return std::min(bulk.alpha, surface.alpha); }
  double beta() const { return std::max(bulk.beta, surface.beta); }
};

// Periodic coefficient a(y) sampled as a step function on [0, 1) along the first axis.
struct PeriodicCoefficient {
  std::vector<double> samples{1.0};

  double operator()(const Point& y) const {
    const double t = y[0] - std::floor(y[0]);
    const auto k = std::min(static_cast<std::size_t>(t * samples.size()), samples.size() - 1);
    return samples[k];
  }
  double min() const { return *std::min_element(samples.begin(), samples.end()); }
  double max() const { return *std::max_element(samples.begin(), samples.end()); }
};

namespace catalog {

// f = |xi|^{p(x)}
inline BulkDensity power(std::shared_ptr<const VarExponent> p) {
  BulkDensity b;
  b.name = "power";
  auto pp = p;
  b.f = [pp](const Point& x, const Gradient& xi) {
    const double n = xi.norm();
    return n == 0.0 ? 0.0 : std::pow(n, pp->at(x));
  };
  b.alpha = 1.0;
  b.beta = 1.0;
  const double pPlus = p->pPlus();
  b.omega1 = [pPlus](double t) { return pPlus * t; };
  b.exponent = std::move(p);
  return b;
}

// f = a(j x) |xi|^{p(x)} with a periodic.
inline BulkDensity weighted_power(std::shared_ptr<const VarExponent> p, PeriodicCoefficient a, double j = 1.0) {
  if (a.min() <= 0.0) throw InputError("weighted_power: coefficient must be positive");
  BulkDensity b;
  b.name = "weighted_power";
  auto pp = p;
  b.f = [pp, a, j](const Point& x, const Gradient& xi) {
    const double n = xi.norm();
    return n == 0.0 ? 0.0 : a(j * x) * std::pow(n, pp->at(x));
  };
  b.alpha = a.min();
  b.beta = a.max();
  const double scale = p->pPlus() * std::max(1.0, a.max());
  b.omega1 = [scale](double t) { return scale * t; };
  b.exponent = std::move(p);
  return b;
}

// g = kappa
inline SurfaceDensity const_surface(double kappa) {
  if (!(kappa > 0.0)) throw InputError("const_surface: kappa must be positive");
  SurfaceDensity s;
  s.name = "const_surface";
  s.g = [kappa](const Point&, const Vec&, const Point&) { return kappa; };
  s.alpha = kappa;
  s.beta = kappa;
  s.c = 1.0;
  s.omega2 = [](double) { return 0.0; };
  return s;
}

// g = min(beta, alpha + |zeta|)
inline SurfaceDensity capped_linear(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta >= alpha)) throw InputError("capped_linear: need 0 < alpha <= beta");
  SurfaceDensity s;
  s.name = "capped_linear";
  s.g = [alpha, beta](const Point&, const Vec& z, const Point&) { return std::min(beta, alpha + z.norm()); };
  s.alpha = alpha;
  s.beta = beta;
  s.c = 1.0;
  s.omega2 = [alpha](double t) { return t / (2.0 * alpha); };
  return s;
}

// g = alpha + |zeta|, linear growth
inline SurfaceDensity linear_surface(double alpha) {
  if (!(alpha > 0.0)) throw InputError("linear_surface: alpha must be positive");
  SurfaceDensity s;
  s.name = "linear_surface";
  s.g = [alpha](const Point&, const Vec& z, const Point&) { return alpha + z.norm(); };
  s.alpha = alpha;
  s.beta = std::max(1.0, alpha);
  s.c = 1.0;
  s.mode = SurfaceGrowth::linear;
  s.omega2 = [alpha](double t) { return t / (2.0 * alpha); };
  return s;
}

}  // namespace catalog

// g^sigma = g + sigma |zeta|, in linear growth mode with upper constant beta + sigma.
inline SurfaceDensity perturb_surface(const SurfaceDensity& g, double sigma) {
  if (!(sigma > 0.0)) throw PreconditionError("perturb_surface: sigma must be positive");
  SurfaceDensity s = g;
  s.name = g.name + "+sigma";
  auto base = g.g;
  s.g = [base, sigma](const Point& x, const Vec& z, const Point& nu) { return base(x, z, nu) + sigma * z.norm(); };
  s.beta = g.beta + sigma;
  s.mode = SurfaceGrowth::linear;
  if (g.omega2) {
    // |g1 + s|z1| - g2 - s|z2|| <= w(t)(g1 + g2) + s t and g >= alpha.
    auto w = g.omega2;
    const double alpha = g.alpha;
    s.omega2 = [w, sigma, alpha](double t) { return w(t) + sigma * t / (2.0 * alpha); };
  }
  return s;
}

}  // namespace vexfd
