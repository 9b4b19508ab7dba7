#pragma once

// Blow-up density estimates along (eps, j) ladders, separation of scales,
// the surface perturbation ladder and the 1D homogenization oracle.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "vexfd/cell.hpp"

namespace vexfd {

// A sequence (f_j, g_j) of densities on a common domain.
struct DensitySequenceSpec {
  std::string name;
  Grid domain;
  int components = 1;
  std::function<BulkDensity(int)> bulk;
  std::function<SurfaceDensity(int)> surface;
  std::vector<int> jTail{1, 2, 4, 8, 16};

  static DensitySequenceSpec constant(std::string name, Grid domain, BulkDensity f, SurfaceDensity g) {
    DensitySequenceSpec s;
    s.name = std::move(name);
    s.domain = std::move(domain);
    s.bulk = [f](int) { return f; };
    s.surface = [g](int) { return g; };
    s.jTail = {1};
    return s;
  }
  EnergyContext context(int j) const { return EnergyContext(domain, bulk(j), surface(j)); }
};

struct EstimateOptions {
  std::vector<double> epsilons{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  int tailWindow = 3;
  double spreadWarning = 0.05;  // relative tail spread above which the estimate is flagged
  SolverParams solver;
  bool hRefine = false;  // re-solve the last eps with twice the nodes
  int threads = 0;       // 0: VEXFD_THREADS or hardware concurrency
};

struct LadderPoint {
  double eps = 0.0;
  int j = 1;
  double h = 0.0;
  CompetitorClass cls = CompetitorClass::sbv;
  double raw = 0.0;
  double normalized = 0.0;
  int iterations = 0;
  double spread = 0.0;
};

struct DensityEstimate {
  BoundaryDatum datum;
  CompetitorClass cls = CompetitorClass::sbv;
  std::vector<double> epsilons;
  std::vector<double> perEpsilon;  // max over the j tail
  std::vector<LadderPoint> ladder;
  double limitEstimate = 0.0;
  double tailSpread = 0.0;
  bool warning = false;
  std::vector<int> hLadder;            // nodes per axis used
  std::optional<double> refinedValue;  // last eps on the refined grid
};

namespace detail {

inline int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("VEXFD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs tasks on a small pool; results keep task order and the first failure
// (by task index) is rethrown.
template <class T>
std::vector<T> run_ordered(const std::vector<std::function<T()>>& tasks, int threads) {
  std::vector<std::optional<T>> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        out[k] = tasks[k]();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(worker_count(threads), static_cast<int>(tasks.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> result;
  result.reserve(tasks.size());
  for (auto& o : out) result.push_back(std::move(*o));
  return result;
}

inline void check_ladder(const std::vector<double>& eps) {
  if (eps.empty()) throw PreconditionError("eps ladder is empty");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw PreconditionError("eps ladder must be positive");
    if (k > 0 && !(eps[k] < eps[k - 1])) throw PreconditionError("eps ladder must be strictly decreasing");
  }
}

inline DensityEstimate estimate(const DensitySequenceSpec& spec, const BoundaryDatum& datum, CompetitorClass cls,
                                const EstimateOptions& opt) {
  check_ladder(opt.epsilons);
  if (spec.jTail.empty()) throw PreconditionError("density sequence has an empty j tail");
  require(opt.tailWindow >= 1, "tail window must be at least 1");
  DensityEstimate est;
  est.datum = datum;
  est.cls = cls;
  est.epsilons = opt.epsilons;
  est.hLadder = {opt.solver.nodesPerAxis};

  auto point = [&spec, datum, cls](double eps, int j, SolverParams params) {
    CellProblem pr{spec.context(j), datum, datum.x0, eps, cls, params};
    const CellSolution s = solve_cell(pr);
    return LadderPoint{eps, j, s.h, cls, s.value, s.normalized, s.iterations, s.multistartSpread};
  };
  std::vector<std::function<LadderPoint()>> tasks;
  for (double eps : opt.epsilons)
    for (int j : spec.jTail) tasks.push_back([=] { return point(eps, j, opt.solver); });
  if (opt.hRefine) {
    SolverParams fine = opt.solver;
    fine.nodesPerAxis *= 2;
    est.hLadder.push_back(fine.nodesPerAxis);
    for (int j : spec.jTail) tasks.push_back([=, eps = opt.epsilons.back()] { return point(eps, j, fine); });
  }
  auto points = run_ordered(tasks, opt.threads);

  const std::size_t J = spec.jTail.size();
  for (std::size_t k = 0; k < opt.epsilons.size(); ++k) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < J; ++q) mx = std::max(mx, points[k * J + q].normalized);
    est.perEpsilon.push_back(mx);
  }
  if (opt.hRefine) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < J; ++q) mx = std::max(mx, points[opt.epsilons.size() * J + q].normalized);
    est.refinedValue = mx;
    points.resize(opt.epsilons.size() * J);
  }
  est.ladder = std::move(points);

  const std::size_t w = std::min<std::size_t>(opt.tailWindow, est.perEpsilon.size());
  const auto first = est.perEpsilon.end() - static_cast<std::ptrdiff_t>(w);
  const auto [mn, mx] = std::minmax_element(first, est.perEpsilon.end());
  est.limitEstimate = *mx;
  est.tailSpread = *mx - *mn;
  est.warning = est.tailSpread > opt.spreadWarning * std::max(1.0, std::abs(est.limitEstimate));
  return est;
}

}  // namespace detail

// f_inf (class sbv) or f_sob (class sobolev) at (x0, xi) from affine data with u0 = 0.
inline DensityEstimate estimate_bulk_density(const DensitySequenceSpec& spec, Point x0, const Gradient& xi,
                                             CompetitorClass cls, const EstimateOptions& opt = {}) {
  if (cls == CompetitorClass::pc) throw PreconditionError("bulk density estimates use the sbv or sobolev class");
  if (xi.m != spec.components || xi.d != spec.domain.dim())
    throw StructuralError("bulk density: xi has the wrong shape");
  return detail::estimate(spec, BoundaryDatum::affine(x0, Vec(spec.components), xi), cls, opt);
}

// g_inf (class sbv) or g_pc (class pc) at (x0, zeta, nu) from jump data with b = 0.
inline DensityEstimate estimate_surface_density(const DensitySequenceSpec& spec, Point x0, const Vec& zeta,
                                                Point nu, CompetitorClass cls, const EstimateOptions& opt = {}) {
  if (zeta.size() != spec.components) throw StructuralError("surface density: zeta has the wrong size");
  if (zeta.norm() == 0.0) throw PreconditionError("surface density: zeta must be nonzero");
  return detail::estimate(spec, BoundaryDatum::jump(x0, zeta, Vec(spec.components), nu), cls, opt);
}

// Pointwise class inclusion: the sbv value never exceeds the other class at
// the same (eps, j). Returns the number of violating ladder points.
inline int class_violations(const DensityEstimate& sbv, const DensityEstimate& other, double relTol = 1e-9) {
  if (sbv.ladder.size() != other.ladder.size()) throw StructuralError("class comparison: ladders differ");
  int bad = 0;
  for (std::size_t k = 0; k < sbv.ladder.size(); ++k) {
    const double a = sbv.ladder[k].raw, b = other.ladder[k].raw;
    if (a > b + relTol * std::max(1.0, std::abs(b))) ++bad;
  }
  return bad;
}

struct SeparationReport {
  DensityEstimate bulkSbv, bulkSobolev, surfaceSbv, surfacePc;
  double bulkGap = 0.0;     // relative
  double surfaceGap = 0.0;  // relative
  double tolerance = 0.0;
  int classViolations = 0;
  bool passed = false;
};

inline double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

// Bulk: sbv against sobolev; surface: sbv against pc. A gap passes when it is
// within the tolerance widened by the relative tail spread.
inline SeparationReport separation_check(const DensitySequenceSpec& spec, Point x0, const Gradient& xi,
                                         const Vec& zeta, Point nu, double tolerance = 0.02,
                                         const EstimateOptions& opt = {}) {
  SeparationReport r;
  r.tolerance = tolerance;
  r.bulkSbv = estimate_bulk_density(spec, x0, xi, CompetitorClass::sbv, opt);
  r.bulkSobolev = estimate_bulk_density(spec, x0, xi, CompetitorClass::sobolev, opt);
  r.surfaceSbv = estimate_surface_density(spec, x0, zeta, nu, CompetitorClass::sbv, opt);
  r.surfacePc = estimate_surface_density(spec, x0, zeta, nu, CompetitorClass::pc, opt);
  r.bulkGap = relative_gap(r.bulkSbv.limitEstimate, r.bulkSobolev.limitEstimate);
  r.surfaceGap = relative_gap(r.surfaceSbv.limitEstimate, r.surfacePc.limitEstimate);
  r.classViolations = class_violations(r.bulkSbv, r.bulkSobolev) + class_violations(r.surfaceSbv, r.surfacePc);
  const double bulkAllow =
      tolerance + r.bulkSobolev.tailSpread / std::max(std::abs(r.bulkSobolev.limitEstimate), 1e-12);
  const double surfAllow =
      tolerance + r.surfacePc.tailSpread / std::max(std::abs(r.surfacePc.limitEstimate), 1e-12);
  r.passed = r.bulkGap <= bulkAllow && r.surfaceGap <= surfAllow && r.classViolations == 0;
  return r;
}

struct PerturbationReport {
  std::vector<double> sigmas;
  std::vector<DensityEstimate> estimates;
  std::vector<double> values;
  double unperturbed = 0.0;
  double extrapolated = 0.0;  // linear extrapolation to sigma = 0 from the last two sigmas
  double tolerance = 0.0;
  bool monotone = true;
  bool boundedBelow = true;  // every value >= unperturbed - tolerance
  bool passed() const { return monotone && boundedBelow; }
};

inline PerturbationReport perturbation_ladder(const DensitySequenceSpec& spec, Point x0, const Vec& zeta, Point nu,
                                              const std::vector<double>& sigmas, double tolerance = 0.03,
                                              const EstimateOptions& opt = {}) {
  if (sigmas.empty()) throw PreconditionError("perturbation ladder: sigmas must not be empty");
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    if (!(sigmas[k] > 0.0)) throw PreconditionError("perturbation ladder: sigmas must be positive");
    if (k > 0 && !(sigmas[k] < sigmas[k - 1]))
      throw PreconditionError("perturbation ladder: sigmas must be strictly decreasing");
  }
  PerturbationReport r;
  r.sigmas = sigmas;
  r.tolerance = tolerance;
  for (double sigma : sigmas) {
    DensitySequenceSpec s = spec;
    auto base = spec.surface;
    s.surface = [base, sigma](int j) { return perturb_surface(base(j), sigma); };
    r.estimates.push_back(estimate_surface_density(s, x0, zeta, nu, CompetitorClass::sbv, opt));
    r.values.push_back(r.estimates.back().limitEstimate);
  }
  r.unperturbed = estimate_surface_density(spec, x0, zeta, nu, CompetitorClass::sbv, opt).limitEstimate;
  for (std::size_t k = 1; k < r.values.size(); ++k)
    if (r.values[k] > r.values[k - 1] + tolerance * std::abs(r.values[k - 1])) r.monotone = false;
  for (double v : r.values)
    if (v < r.unperturbed - tolerance * std::abs(r.unperturbed)) r.boundedBelow = false;
  if (r.values.size() >= 2) {
    const std::size_t n = r.values.size();
    const double s1 = sigmas[n - 2], s2 = sigmas[n - 1], v1 = r.values[n - 2], v2 = r.values[n - 1];
    r.extrapolated = v2 - s2 * (v1 - v2) / (s1 - s2);
  } else {
    r.extrapolated = r.values.front();
  }
  return r;
}

// a_hom |xi|^p with a_hom = (mean a^{-1/(p-1)})^{-(p-1)} for a step coefficient.
inline double homogenize_oracle_1d(const PeriodicCoefficient& a, double p, double xi) {
  if (!(p > 1.0)) throw InputError("homogenize_oracle_1d: p must exceed 1");
  if (a.samples.empty()) throw InputError("homogenize_oracle_1d: no coefficient samples");
  double mean = 0.0;
  for (double s : a.samples) {
    if (!(s > 0.0)) throw InputError("homogenize_oracle_1d: coefficient must be positive");
    mean += std::pow(s, -1.0 / (p - 1.0));
  }
  mean /= a.samples.size();
  return std::pow(mean, -(p - 1.0)) * std::pow(std::abs(xi), p);
}

// Energy per unit length of the exact minimiser of int_0^1 a(jx)|u'|^p with
// u(0) = 0, u(1) = xi: the flux a|u'|^{p-2}u' is constant, found by bisection
// on the constraint int u' = xi.
inline double flux_constancy_energy_1d(const PeriodicCoefficient& a, double p, double xi, int j) {
  if (!(p > 1.0) || j < 1) throw InputError("flux_constancy_energy_1d: need p > 1 and j >= 1");
  if (a.min() <= 0.0) throw InputError("flux_constancy_energy_1d: coefficient must be positive");
  if (xi == 0.0) return 0.0;
  const double piece = 1.0 / (static_cast<double>(a.samples.size()) * j);
  auto slope = [&](double sigma, double coef) { return std::pow(sigma / coef, 1.0 / (p - 1.0)); };
  auto displacement = [&](double sigma) {
    double d = 0.0;
    for (int r = 0; r < j; ++r)
      for (double s : a.samples) d += piece * slope(sigma, s);
    return d;
  };
  const double target = std::abs(xi);
  double lo = 0.0, hi = 1.0;
  while (displacement(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (displacement(mid) < target ? lo : hi) = mid;
  }
  const double sigma = 0.5 * (lo + hi);
  double energy = 0.0;
  for (int r = 0; r < j; ++r)
    for (double s : a.samples) energy += piece * s * std::pow(slope(sigma, s), p);
  return energy;
}

}  // namespace vexfd
