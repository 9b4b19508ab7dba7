#pragma once

// Experiment orchestration for the command line: builds contexts from a
// config, runs one experiment kind, and writes the report and CSV artifacts.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "vexfd/config.hpp"
#include "vexfd/glue.hpp"
#include "vexfd/limits.hpp"
#include "vexfd/truncation.hpp"
#include "vexfd/validate.hpp"

namespace vexfd {

inline constexpr int kCsvFormatVersion = 1;

struct Verdict {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct LadderRow {
  std::string series;
  LadderPoint point;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Verdict> verdicts;
  std::vector<LadderRow> ladder;
  std::vector<std::pair<std::string, double>> metrics;
  int assertions = 0;
  int assertionFailures = 0;
  double wallSeconds = 0.0;
  bool converged = true;
  std::string failure;

  bool passed() const {
    if (!converged) return false;
    for (const auto& v : verdicts)
      if (!v.passed) return false;
    return true;
  }
  void verdict(std::string name, bool ok, double value, double tol, std::string detail = {}) {
    verdicts.push_back({std::move(name), ok, value, tol, std::move(detail)});
  }
  void metric(std::string name, double v) { metrics.emplace_back(std::move(name), v); }
  void tally(bool ok) {
    ++assertions;
    if (!ok) ++assertionFailures;
  }
  void add_ladder(const std::string& series, const DensityEstimate& est) {
    for (const auto& p : est.ladder) ladder.push_back({series, p});
  }
};

// Raised when an experiment stops on solver non-convergence; carries what was
// finished so far.
struct ExperimentAborted : Error {
  ExperimentReport partial;
  ExperimentAborted(const std::string& what, ExperimentReport r) : Error(what), partial(std::move(r)) {}
};

namespace sample {

// Random nodal values with magnitudes spread over several decades.
inline GridFunction random_values(const Grid& g, int m, Rng& rng) {
  const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  GridFunction u(g, m);
  for (int n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < m; ++i) u(n, i) = scale * rng.uniform(-1.0, 1.0);
  return u;
}

// A smooth field plus a step of random height across a short vertical crack
// segment centred in the ball; in 1D a single cracked edge.
inline SbvGridFunction cracked_function(const Grid& g, Point centre, double radius, double maxCrack, Rng& rng) {
  const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0), w = rng.uniform(0.5, 4.0);
  const double t = centre[0] + rng.uniform(-0.5, 0.5) * radius;
  const double len = rng.uniform(0.0, maxCrack);
  const double y0 = centre[1] + (g.dim() == 2 ? rng.uniform(-0.3, 0.3) * radius : 0.0);
  const double height = rng.uniform(-3.0, 3.0);
  const bool cracked = rng.uniform() < 0.8;
  auto inSegment = [&](const Point& x) { return g.dim() == 1 || std::abs(x[1] - y0) < 0.5 * len; };
  GridFunction base = GridFunction::scalar(g, [&](const Point& x) {
    double v = a * x[0] + std::sin(w * (x[0] + b * x[1]));
    if (cracked && x[0] > t && inSegment(x)) v += height;
    return v;
  });
  SbvGridFunction u(std::move(base));
  if (!cracked) return u;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto ed = g.edge(e);
    const Point pa = g.node_point(ed.a), pb = g.node_point(ed.b);
    if ((pa[0] > t) != (pb[0] > t) && inSegment(pa) && inSegment(pb)) u.set_crack(e, true);
  }
  u.drop_null_cracks();
  return u;
}

// Random values with about a fifth of the edges cracked.
inline SbvGridFunction random_sbv(const Grid& g, int m, Rng& rng, double crackProbability = 0.2) {
  SbvGridFunction u(random_values(g, m, rng));
  for (int e = 0; e < g.edge_count(); ++e) u.set_crack(e, rng.uniform() < crackProbability);
  u.drop_null_cracks();
  return u;
}

}  // namespace sample

namespace detail {

inline Grid config_grid(const ExperimentConfig& c) { return Grid::covering(c.dim, c.cells, c.lo, c.hi); }

inline Point to_point(const std::vector<double>& v) { return {v[0], v.size() > 1 ? v[1] : 0.0}; }

inline Vec to_vec(const std::vector<double>& v) {
  Vec z(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) z[static_cast<int>(i)] = v[i];
  return z;
}

inline Gradient to_gradient(const ExperimentConfig& c) {
  Gradient xi(c.components, c.dim);
  for (int q = 0; q < c.components * c.dim; ++q) xi.v[q] = c.xi[q];
  return xi;
}

inline std::shared_ptr<const VarExponent> make_exponent(const ExperimentConfig& c, const Grid& g) {
  const auto& e = c.exponent;
  if (e.kind == "constant") return std::make_shared<const VarExponent>(VarExponent::constant(g, e.p));
  if (e.kind == "file") {
    std::ifstream in(e.file);
    if (!in) throw ConfigError("[exponent.file] cannot open '" + e.file + "'");
    std::vector<double> v;
    for (double x; in >> x;) v.push_back(x);
    if (static_cast<int>(v.size()) != g.node_count())
      throw ConfigError("[exponent.file] expected " + std::to_string(g.node_count()) + " samples, found " +
                        std::to_string(v.size()));
    return std::make_shared<const VarExponent>(g, std::move(v));
  }
  VarExponent::Source f;
  if (e.kind == "affine") {
    f = [p = e.p, s = e.slope](const Point& x) { return p + s * x[0]; };
  } else if (e.kind == "sinusoidal") {
    f = [p = e.p, a = e.amplitude, w = e.frequency](const Point& x) {
      return p + a * std::sin(2.0 * std::numbers::pi * w * x[0]);
    };
  } else {
    f = [p = e.p, r = e.right, at = e.at](const Point& x) { return x[0] < at ? p : r; };
  }
  try {
    return std::make_shared<const VarExponent>(VarExponent::from_function(g, f));
  } catch (const InputError& err) {
    throw ConfigError(std::string("[exponent] ") + err.what());
  }
}

inline SurfaceDensity make_surface(const ExperimentConfig& c) {
  if (c.surface == "const_surface") return catalog::const_surface(c.kappa);
  if (c.surface == "capped_linear") return catalog::capped_linear(c.surfaceAlpha, c.surfaceBeta);
  return catalog::linear_surface(c.surfaceAlpha);
}

inline DensitySequenceSpec make_sequence(const ExperimentConfig& c) {
  const Grid g = config_grid(c);
  auto p = make_exponent(c, g);
  const SurfaceDensity surf = make_surface(c);
  DensitySequenceSpec s;
  s.name = c.bulk + "+" + c.surface;
  s.domain = g;
  s.components = c.components;
  if (c.bulk == "weighted_power") {
    PeriodicCoefficient a{c.coefficient};
    s.bulk = [p, a](int j) { return catalog::weighted_power(p, a, j); };
  } else {
    const BulkDensity f = catalog::power(p);
    s.bulk = [f](int) { return f; };
  }
  s.surface = [surf](int) { return surf; };
  s.jTail = c.j;
  return s;
}

inline EstimateOptions make_options(const ExperimentConfig& c) {
  EstimateOptions o;
  o.epsilons = c.eps;
  o.tailWindow = c.tailWindow;
  o.spreadWarning = c.spreadWarning;
  o.hRefine = c.hRefine;
  o.solver.nodesPerAxis = c.nodes;
  o.solver.maxIter = c.maxIter;
  o.solver.maxSweeps = c.maxSweeps;
  o.solver.innerTol = c.innerTol;
  o.solver.multistarts = c.multistarts;
  o.solver.ringWidth = c.ringWidth;
  o.solver.seed = c.seed;
  return o;
}

inline CompetitorClass parse_class(const std::string& s) {
  if (s == "sobolev") return CompetitorClass::sobolev;
  if (s == "pc") return CompetitorClass::pc;
  return CompetitorClass::sbv;
}

inline void record_estimate(ExperimentReport& r, const std::string& series, const DensityEstimate& est) {
  r.add_ladder(series, est);
  r.metric(series + ".estimate", est.limitEstimate);
  r.metric(series + ".tail_spread", est.tailSpread);
  r.metric(series + ".warning", est.warning ? 1.0 : 0.0);
}

inline void oracle_verdict(ExperimentReport& r, const std::string& name, double value, double oracle, double tol) {
  const double rel = relative_gap(value, oracle);
  r.verdict(name, rel <= tol, rel, tol, "estimate " + format_double(value) + " vs " + format_double(oracle));
}

inline void run_norms(ExperimentReport& r) {
  const auto& c = r.config;
  const Grid g = config_grid(c);
  const auto p = make_exponent(c, g);
  Rng rng(c.seed);
  int violations = 0;
  double worstLp = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    const GridFunction u = sample::random_values(g, c.components, rng);
    const auto rep = check_norm_modular_inequalities(u, *p);
    for (const auto& chk : rep.checks) {
      r.tally(chk.passed);
      violations += chk.violations;
    }
    if (c.exponent.kind == "constant" && c.components == 1)
      worstLp = std::max(worstLp, relative_gap(rep.norm, classical_lp_norm(u, c.exponent.p)));
  }
  r.metric("samples", c.samples);
  r.metric("inequality_violations", violations);
  r.verdict("norm_modular_inequalities", violations == 0, violations, 0.0);
  if (c.exponent.kind == "constant" && c.components == 1) {
    r.metric("max_rel_diff_classical_lp", worstLp);
    r.verdict("luxembourg_equals_classical", worstLp <= c.tolerance, worstLp, c.tolerance);
  }
}

inline void run_truncation(ExperimentReport& r) {
  const auto& c = r.config;
  const Grid g = config_grid(c);
  const double gammaIso = c.gammaIso > 0.0 ? c.gammaIso : default_gamma_iso(c.dim);
  const double mid = 0.5 * (c.lo + c.hi), radius = 0.4 * (c.hi - c.lo);
  const Point centre{mid, c.dim == 2 ? mid : 0.0};
  const Region ball = c.dim == 1 ? Region::interval(mid - radius, mid + radius) : Region::ball(centre, radius);
  const double maxCrack = 1.5 * std::sqrt(0.5 * ball.measure(g)) / (2.0 * gammaIso);
  Rng rng(c.seed);
  int accepted = 0, rejected = 0, failures = 0;
  for (int k = 0; k < c.samples; ++k) {
    const SbvGridFunction u = sample::cracked_function(g, centre, radius, maxCrack, rng);
    try {
      const auto [t, td] = truncate(u, ball, gammaIso);
      ++accepted;
      const SbvGridFunction tt = truncate(t, ball, gammaIso).first;
      const bool idem = tt.base().raw() == t.base().raw();
      bool gradOk = true;
      for (int cell = 0; cell < g.cell_count(); ++cell)
        gradOk = gradOk && t.cell_gradient(cell).norm() <= u.cell_gradient(cell).norm() * (1.0 + 1e-12) + 1e-300;
      for (bool ok : {idem, gradOk, td.changedBoundHolds}) {
        r.tally(ok);
        if (!ok) ++failures;
      }
    } catch (const JumpSetTooLarge&) {
      ++rejected;
      const double s0 = truncation_threshold(g.dim(), gammaIso, u.jump_measure(ball));
      const bool ok = s0 > 0.5 * ball.measure(g);
      r.tally(ok);
      if (!ok) ++failures;
    }
  }
  r.metric("gamma_iso", gammaIso);
  r.metric("accepted", accepted);
  r.metric("rejected", rejected);
  r.metric("failures", failures);
  r.verdict("truncation_properties", failures == 0, failures, 0.0,
            "idempotence, gradient bound and changed-set bound with gamma_iso " + format_double(gammaIso));
}

inline void run_glue(ExperimentReport& r) {
  const auto& c = r.config;
  const Grid g = config_grid(c);
  const auto p = make_exponent(c, g);
  const EnergyContext ctx(g, catalog::power(p), make_surface(c));
  const double L = c.hi - c.lo, mid = 0.5 * (c.lo + c.hi);
  const Point centre{c.lo + 0.4 * L, c.dim == 2 ? mid : 0.0};
  const Region Dp = c.dim == 1 ? Region::interval(c.lo + 0.2 * L, c.lo + 0.45 * L) : Region::ball(centre, 0.15 * L);
  const Region Dpp = c.dim == 1 ? Region::interval(c.lo + 0.1 * L, c.lo + 0.6 * L) : Region::ball(centre, 0.35 * L);
  const Region E = c.dim == 1 ? Region::interval(c.lo + 0.35 * L, c.hi) : Region::box({c.lo + 0.3 * L, c.lo}, {c.hi, c.hi});
  Rng rng(c.seed);
  int failures = 0;
  double worstRatio = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    const SbvGridFunction u = sample::random_sbv(g, c.components, rng);
    SbvGridFunction v = sample::random_sbv(g, c.components, rng);
    if (k % 4 == 0) v = u;
    const double eta = c.eta[static_cast<std::size_t>(k) % c.eta.size()];
    try {
      const GlueResult res = glue_with_cutoff(u, v, Dp, Dpp, E, eta, ctx);
      r.tally(true);
      worstRatio = std::max(worstRatio, res.certifiedBound > 0.0 ? res.energy / res.certifiedBound : 0.0);
    } catch (const NumericError&) {
      r.tally(false);
      ++failures;
    }
  }
  r.metric("max_energy_over_bound", worstRatio);
  r.verdict("fundamental_estimate", failures == 0, failures, 0.0, "F(w) <= certified bound, no tolerance");
}

inline CellProblem make_cell_problem(const ExperimentConfig& c, double eps, int j) {
  const DensitySequenceSpec s = make_sequence(c);
  const Point x0 = to_point(c.x0);
  const BoundaryDatum d = c.datum == "jump"
                              ? BoundaryDatum::jump(x0, to_vec(c.zeta), Vec(c.components), to_point(c.nu))
                              : BoundaryDatum::affine(x0, Vec(c.components), to_gradient(c));
  return CellProblem{s.context(j), d, x0, eps, parse_class(c.cls), make_options(c).solver};
}

inline void run_cell(ExperimentReport& r) {
  const auto& c = r.config;
  const double eps = c.eps.front();
  const int j = c.j.front();
  const CellProblem pr = make_cell_problem(c, eps, j);
  const CellSolution s = solve_cell(pr);
  r.ladder.push_back({"cell", LadderPoint{eps, j, s.h, pr.cls, s.value, s.normalized, s.iterations, s.multistartSpread}});
  r.metric("value", s.value);
  r.metric("normalized", s.normalized);
  r.metric("datum_energy", datum_energy(pr));
  r.verdict("below_datum_energy", s.value <= datum_energy(pr) * (1.0 + 1e-12), s.value, 0.0);
  if (c.oracle) oracle_verdict(r, "oracle", s.normalized, *c.oracle, c.tolerance);
}

inline void run_bulk(ExperimentReport& r) {
  const auto& c = r.config;
  if (c.cls == "pc") throw ConfigError("[datum.class] bulk-density needs sbv or sobolev");
  const auto est = estimate_bulk_density(make_sequence(c), to_point(c.x0), to_gradient(c), parse_class(c.cls),
                                         make_options(c));
  record_estimate(r, "bulk", est);
  if (est.refinedValue) r.metric("bulk.refined", *est.refinedValue);
  if (c.oracle) oracle_verdict(r, "oracle", est.limitEstimate, *c.oracle, c.tolerance);
}

inline void run_surface(ExperimentReport& r) {
  const auto& c = r.config;
  const auto est = estimate_surface_density(make_sequence(c), to_point(c.x0), to_vec(c.zeta), to_point(c.nu),
                                            parse_class(c.cls), make_options(c));
  record_estimate(r, "surface", est);
  if (est.refinedValue) r.metric("surface.refined", *est.refinedValue);
  if (c.oracle) oracle_verdict(r, "oracle", est.limitEstimate, *c.oracle, c.tolerance);
}

inline void run_separation(ExperimentReport& r) {
  const auto& c = r.config;
  const auto rep = separation_check(make_sequence(c), to_point(c.x0), to_gradient(c), to_vec(c.zeta), to_point(c.nu),
                                    c.tolerance, make_options(c));
  record_estimate(r, "bulk_sbv", rep.bulkSbv);
  record_estimate(r, "bulk_sobolev", rep.bulkSobolev);
  record_estimate(r, "surface_sbv", rep.surfaceSbv);
  record_estimate(r, "surface_pc", rep.surfacePc);
  r.verdict("bulk_gap", rep.bulkGap <= c.tolerance + rep.bulkSobolev.tailSpread / std::max(1e-12, std::abs(rep.bulkSobolev.limitEstimate)),
            rep.bulkGap, c.tolerance);
  r.verdict("surface_gap", rep.surfaceGap <= c.tolerance + rep.surfacePc.tailSpread / std::max(1e-12, std::abs(rep.surfacePc.limitEstimate)),
            rep.surfaceGap, c.tolerance);
  r.verdict("class_monotonicity", rep.classViolations == 0, rep.classViolations, 0.0);
}

inline void run_perturbation(ExperimentReport& r) {
  const auto& c = r.config;
  const Vec zeta = to_vec(c.zeta);
  const auto rep = perturbation_ladder(make_sequence(c), to_point(c.x0), zeta, to_point(c.nu), c.sigmas, c.tolerance,
                                       make_options(c));
  for (std::size_t k = 0; k < rep.sigmas.size(); ++k) {
    const std::string series = "sigma=" + format_double(rep.sigmas[k]);
    record_estimate(r, series, rep.estimates[k]);
    if (c.oracle)
      oracle_verdict(r, series, rep.values[k], *c.oracle + rep.sigmas[k] * zeta.norm(), c.tolerance);
  }
  r.metric("unperturbed", rep.unperturbed);
  r.metric("extrapolated", rep.extrapolated);
  r.verdict("monotone", rep.monotone, 0.0, c.tolerance);
  r.verdict("bounded_below", rep.boundedBelow, rep.unperturbed, c.tolerance);
  if (c.oracle) oracle_verdict(r, "extrapolated", rep.extrapolated, *c.oracle, c.tolerance);
}

inline void run_homogenize(ExperimentReport& r) {
  const auto& c = r.config;
  if (c.dim != 1) throw ConfigError("[domain.dim] homogenize-1d needs dim = 1");
  if (c.bulk != "weighted_power") throw ConfigError("[bulk.name] homogenize-1d needs weighted_power");
  if (c.exponent.kind != "constant") throw ConfigError("[exponent.kind] homogenize-1d needs a constant exponent");
  if (c.components != 1) throw ConfigError("[datum.components] homogenize-1d is scalar");
  const PeriodicCoefficient a{c.coefficient};
  const double p = c.exponent.p, xi = c.xi.front();
  const double oracle = homogenize_oracle_1d(a, p, xi);
  const int jMax = *std::max_element(c.j.begin(), c.j.end());
  const double flux = flux_constancy_energy_1d(a, p, xi, jMax);
  r.metric("oracle", oracle);
  r.metric("flux_constancy", flux);
  r.verdict("oracle_cross_check", relative_gap(flux, oracle) <= 1e-9, relative_gap(flux, oracle), 1e-9);

  const DensitySequenceSpec s = make_sequence(c);
  const auto opt = make_options(c);
  const auto est = estimate_bulk_density(s, to_point(c.x0), to_gradient(c), parse_class(c.cls), opt);
  record_estimate(r, "bulk", est);
  oracle_verdict(r, "homogenized_density", est.limitEstimate, c.oracle.value_or(oracle), c.tolerance);
  if (parse_class(c.cls) == CompetitorClass::sbv) {
    const auto sob = estimate_bulk_density(s, to_point(c.x0), to_gradient(c), CompetitorClass::sobolev, opt);
    record_estimate(r, "bulk_sobolev", sob);
    const int bad = class_violations(est, sob);
    r.verdict("class_monotonicity", bad == 0, bad, 0.0);
  }
}

inline void run_validate(ExperimentReport& r) {
  const auto& c = r.config;
  const EnergyContext ctx = make_sequence(c).context(c.j.front());
  const auto rep = validate_hypotheses(ctx, c.samples, c.seed, c.components);
  for (const auto& chk : rep.checks) {
    r.metric(chk.name + ".violations", chk.violations);
    r.metric(chk.name + ".samples", chk.samples);
    r.tally(chk.violations == 0);
    r.verdict(chk.name, chk.violations == 0, chk.violations, 1e-12,
              chk.skipped ? "skipped: no modulus" : chk.witness);
  }
}

}  // namespace detail

// Runs the configured experiment. Solver non-convergence raises
// ExperimentAborted with the partial report.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport r;
  r.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& k = config.experiment;
  try {
    if (k == "norms") detail::run_norms(r);
    else if (k == "truncation") detail::run_truncation(r);
    else if (k == "glue") detail::run_glue(r);
    else if (k == "cell") detail::run_cell(r);
    else if (k == "bulk-density") detail::run_bulk(r);
    else if (k == "surface-density") detail::run_surface(r);
    else if (k == "separation") detail::run_separation(r);
    else if (k == "perturbation") detail::run_perturbation(r);
    else if (k == "homogenize-1d") detail::run_homogenize(r);
    else if (k == "validate") detail::run_validate(r);
    else throw ConfigError("[experiment] unknown experiment '" + k + "'");
  } catch (const SolverNonConvergence& e) {
    r.converged = false;
    r.failure = e.what();
    r.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    throw ExperimentAborted(e.what(), std::move(r));
  }
  r.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string ladder_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "format_version," << kCsvFormatVersion << "\n";
  os << "series,eps,j,h,class,raw_m,normalized,iterations,multistart_spread\n";
  for (const auto& row : r.ladder) {
    const auto& p = row.point;
    os << row.series << ',' << detail::format_double(p.eps) << ',' << p.j << ',' << detail::format_double(p.h) << ','
       << to_string(p.cls) << ',' << detail::format_double(p.raw) << ',' << detail::format_double(p.normalized) << ','
       << p.iterations << ',' << detail::format_double(p.spread) << "\n";
  }
  return os.str();
}

inline std::string metrics_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "format_version," << kCsvFormatVersion << "\n";
  os << "kind,name,value,tolerance,passed\n";
  for (const auto& [name, v] : r.metrics) os << "metric," << name << ',' << detail::format_double(v) << ",,\n";
  for (const auto& v : r.verdicts)
    os << "verdict," << v.name << ',' << detail::format_double(v.value) << ',' << detail::format_double(v.tolerance)
       << ',' << (v.passed ? "true" : "false") << "\n";
  os << "metric,assertions," << r.assertions << ",,\n";
  os << "metric,assertion_failures," << r.assertionFailures << ",,\n";
  return os.str();
}

inline std::string report_text(const ExperimentReport& r) {
  std::ostringstream os;
  os << "format_version " << kCsvFormatVersion << "\n";
  os << "experiment " << r.config.experiment << "\n";
  os << "status " << (!r.converged ? "NONCONVERGENCE" : r.passed() ? "PASS" : "FAIL") << "\n";
  if (!r.failure.empty()) os << "failure " << r.failure << "\n";
  os << "wall_seconds " << std::fixed << std::setprecision(3) << r.wallSeconds << std::defaultfloat << "\n\n";
  os << "verdicts\n";
  for (const auto& v : r.verdicts) {
    os << "  " << (v.passed ? "PASS " : "FAIL ") << v.name << "  value " << detail::format_double(v.value)
       << "  tolerance " << detail::format_double(v.tolerance);
    if (!v.detail.empty()) os << "  (" << v.detail << ")";
    os << "\n";
  }
  os << "\nassertions " << r.assertions << " failed " << r.assertionFailures << "\n\nmetrics\n";
  for (const auto& [name, v] : r.metrics) os << "  " << name << " = " << detail::format_double(v) << "\n";
  os << "\nladder points " << r.ladder.size() << "\n\nconfig\n";
  std::istringstream echo(echo_config(r.config));
  for (std::string line; std::getline(echo, line);) os << "  " << line << "\n";
  return os.str();
}

// report.txt, ladder.csv, metrics.csv and config.echo.ini under dir.
inline void write_artifacts(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    out << text;
  };
  put("report.txt", report_text(r));
  put("ladder.csv", ladder_csv(r));
  put("metrics.csv", metrics_csv(r));
  put("config.echo.ini", echo_config(r.config));
}

}  // namespace vexfd
