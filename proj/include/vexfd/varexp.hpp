#pragma once

// Variable exponent fields and the modular / Luxembourg norm calculus on grids.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vexfd/grid.hpp"

namespace vexfd {

// A sampled exponent p(x) with 1 < p- <= p(x) <= p+ < infinity at every node.
// An optional analytic source is used for off-node evaluation; otherwise the
// samples are interpolated multilinearly.
class VarExponent {
 public:
  using Source = std::function<double(const Point&)>;

  VarExponent() = default;

  VarExponent(Grid grid, std::vector<double> values, Source source = {})
      : grid_(std::move(grid)), values_(std::move(values)), source_(std::move(source)) {
    if (static_cast<int>(values_.size()) != grid_.node_count())
      throw StructuralError("exponent sample count does not match grid");
    pMinus_ = std::numeric_limits<double>::infinity();
    pPlus_ = -pMinus_;
    for (double p : values_) {
      if (!std::isfinite(p) || !(p > 1.0)) throw InputError("exponent samples must be finite and > 1");
      pMinus_ = std::min(pMinus_, p);
      pPlus_ = std::max(pPlus_, p);
    }
  }

  static VarExponent constant(const Grid& grid, double p) {
    return VarExponent(grid, std::vector<double>(grid.node_count(), p),
                       [p](const Point&) { return p; });
  }
  static VarExponent from_function(const Grid& grid, Source f) {
    std::vector<double> v(grid.node_count());
    for (int n = 0; n < grid.node_count(); ++n) v[n] = f(grid.node_point(n));
    return VarExponent(grid, std::move(v), std::move(f));
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int n) const { return values_[n]; }
  double pMinus() const { return pMinus_; }
  double pPlus() const { return pPlus_; }
  bool has_source() const { return static_cast<bool>(source_); }

  double at(const Point& x) const {
    if (source_) return source_(x);
    const double h = grid_.h();
    auto locate = [&](double t, int cells, double& frac) {
      t = std::clamp(t / h, 0.0, static_cast<double>(cells));
      int i = std::min(static_cast<int>(t), cells - 1);
      frac = t - i;
      return i;
    };
    double fx = 0.0, fy = 0.0;
    const Point o = grid_.origin();
    const int i = locate(x[0] - o[0], grid_.cells(0), fx);
    if (grid_.dim() == 1)
      return (1.0 - fx) * values_[i] + fx * values_[i + 1];
    const int j = locate(x[1] - o[1], grid_.cells(1), fy);
    const auto v = [&](int a, int b) { return values_[grid_.node_index(a, b)]; };
    return (1.0 - fy) * ((1.0 - fx) * v(i, j) + fx * v(i + 1, j)) +
           fy * ((1.0 - fx) * v(i, j + 1) + fx * v(i + 1, j + 1));
  }

  // Extrema over a node subset.
  std::pair<double, double> extrema(const std::vector<int>& nodes) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int n : nodes) {
      lo = std::min(lo, values_[n]);
      hi = std::max(hi, values_[n]);
    }
    return {lo, hi};
  }

  // Last value computed by log_holder_estimate.
  std::optional<double> logHolderC;

 private:
  Grid grid_;
  std::vector<double> values_;
  Source source_;
  double pMinus_ = 2.0;
  double pPlus_ = 2.0;
};

// Nodal samples of u : grid -> R^m.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, int components)
      : grid_(std::move(grid)), m_(components),
        values_(static_cast<std::size_t>(grid_.node_count()) * components, 0.0) {
    if (components < 1 || components > kMaxComponents)
      throw StructuralError("component count out of range");
  }
  GridFunction(Grid grid, int components, std::vector<double> values)
      : grid_(std::move(grid)), m_(components), values_(std::move(values)) {
    if (components < 1 || components > kMaxComponents)
      throw StructuralError("component count out of range");
    if (values_.size() != static_cast<std::size_t>(grid_.node_count()) * components)
      throw StructuralError("value count does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw InputError("grid function values must be finite");
  }

  template <class F>
  static GridFunction from_function(const Grid& grid, int components, F&& f) {
    GridFunction u(grid, components);
    for (int n = 0; n < grid.node_count(); ++n) u.set(n, f(grid.node_point(n)));
    return u;
  }
  static GridFunction scalar(const Grid& grid, const std::function<double(const Point&)>& f) {
    GridFunction u(grid, 1);
    for (int n = 0; n < grid.node_count(); ++n) u.values_[n] = f(grid.node_point(n));
    return u;
  }

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  double operator()(int n, int i) const { return values_[static_cast<std::size_t>(n) * m_ + i]; }
  double& operator()(int n, int i) { return values_[static_cast<std::size_t>(n) * m_ + i]; }
  Vec value(int n) const {
    Vec v(m_);
    for (int i = 0; i < m_; ++i) v[i] = (*this)(n, i);
    return v;
  }
  void set(int n, const Vec& v) {
    if (v.size() != m_) throw StructuralError("value has wrong component count");
    for (int i = 0; i < m_; ++i) (*this)(n, i) = v[i];
  }
  double magnitude(int n) const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += (*this)(n, i) * (*this)(n, i);
    return std::sqrt(s);
  }
  const std::vector<double>& raw() const { return values_; }
  std::vector<double>& raw() { return values_; }

  double sup_norm() const {
    double s = 0.0;
    for (int n = 0; n < grid_.node_count(); ++n) s = std::max(s, magnitude(n));
    return s;
  }

  friend GridFunction operator*(double c, GridFunction u) {
    for (double& v : u.values_) v *= c;
    return u;
  }

 private:
  Grid grid_;
  int m_ = 1;
  std::vector<double> values_;
};

namespace detail {

inline void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw StructuralError("grid mismatch");
}

inline void check_finite(const GridFunction& u) {
  for (double v : u.raw())
    if (!std::isfinite(v)) throw InputError("non-finite value in grid function");
}

// rho(u / lambda) over a node list.
inline double modular_scaled(const GridFunction& u, const VarExponent& p,
                             const std::vector<int>& nodes, double lambda) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (int n : nodes) {
    const double a = u.magnitude(n) / lambda;
    if (a > 0.0) s += g.node_weight(n) * std::pow(a, p[n]);
  }
  return s;
}

inline std::vector<int> all_nodes(const Grid& g) {
  std::vector<int> v(g.node_count());
  for (int n = 0; n < g.node_count(); ++n) v[n] = n;
  return v;
}

}  // namespace detail

// rho_p(u) = sum over region nodes of |u(x)|^{p(x)} times the node weight.
inline double modular(const GridFunction& u, const VarExponent& p, const Region& region = Region::whole()) {
  detail::check_same_grid(u.grid(), p.grid());
  detail::check_finite(u);
  const auto nodes = region.nodes(u.grid());
  if (nodes.empty()) throw PreconditionError("modular: region contains no nodes");
  return detail::modular_scaled(u, p, nodes, 1.0);
}

// Luxembourg norm inf{lambda > 0 : rho(u / lambda) <= 1} by bisection.
// Stops once |rho(u / lambda) - 1| <= tol or the bracket is exhausted.
inline double luxembourg_norm(const GridFunction& u, const VarExponent& p,
                              const Region& region = Region::whole(), double tol = 1e-10) {
  detail::check_same_grid(u.grid(), p.grid());
  detail::check_finite(u);
  const auto nodes = region.nodes(u.grid());
  if (nodes.empty()) throw PreconditionError("luxembourg_norm: region contains no nodes");

  double sup = 0.0;
  for (int n : nodes) sup = std::max(sup, u.magnitude(n));
  if (sup == 0.0) return 0.0;

  double measure = 0.0;
  for (int n : nodes) measure += u.grid().node_weight(n);

  double lo = std::numeric_limits<double>::epsilon() * sup;
  double hi = sup * (1.0 + measure);
  const auto rho = [&](double lambda) { return detail::modular_scaled(u, p, nodes, lambda); };
  const double rhoHi = rho(hi);
  if (std::isnan(rhoHi) || std::isnan(rho(lo)) || rhoHi > 1.0)
    throw NumericError("luxembourg_norm: bisection bracket failure");

  double mid = hi;
  for (int it = 0; it < 400; ++it) {
    mid = (hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double r = rho(mid);
    if (std::isnan(r)) throw NumericError("luxembourg_norm: modular is NaN");
    if (std::abs(r - 1.0) <= tol) return mid;
    if (r > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return mid;
}

// Classical L^p quadrature norm for constant p; the reference the Luxembourg
// norm must reproduce when the exponent does not vary.
inline double classical_lp_norm(const GridFunction& u, double p) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (int n = 0; n < g.node_count(); ++n) s += g.node_weight(n) * std::pow(u.magnitude(n), p);
  return std::pow(s, 1.0 / p);
}

struct InequalityCheck {
  std::string name;
  bool passed = true;
  int violations = 0;
  double worstSlack = std::numeric_limits<double>::infinity();  // relative, >= -tol when passing
};

struct NormModularReport {
  double modular = 0.0;
  double norm = 0.0;
  std::vector<InequalityCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

// Checks rho^{1/p+} <= ||u|| <= rho^{1/p-} (exponents swapped when ||u|| <= 1)
// and min{l^{p+}, l^{p-}} rho(u) <= rho(l u) <= max{...} rho(u) over `lambdas`.
inline NormModularReport check_norm_modular_inequalities(
    const GridFunction& u, const VarExponent& p,
    std::vector<double> lambdas = {1e-3, 0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0, 1e3},
    double relTol = 1e-9) {
  NormModularReport rep;
  rep.modular = modular(u, p);
  rep.norm = luxembourg_norm(u, p);
  const double pm = p.pMinus(), pp = p.pPlus();

  const auto record = [&](InequalityCheck& c, double lower, double value, double upper) {
    const double scale = std::max({std::abs(lower), std::abs(value), std::abs(upper),
                                   std::numeric_limits<double>::min()});
    const double slack = std::min(value - lower, upper - value) / scale;
    c.worstSlack = std::min(c.worstSlack, slack);
    if (slack < -relTol) {
      c.passed = false;
      ++c.violations;
    }
  };

  InequalityCheck normIneq{"norm_vs_modular"};
  if (rep.modular == 0.0) {
    record(normIneq, 0.0, rep.norm, 0.0);
  } else if (rep.norm > 1.0) {
    record(normIneq, std::pow(rep.modular, 1.0 / pp), rep.norm, std::pow(rep.modular, 1.0 / pm));
  } else {
    record(normIneq, std::pow(rep.modular, 1.0 / pm), rep.norm, std::pow(rep.modular, 1.0 / pp));
  }
  rep.checks.push_back(normIneq);

  InequalityCheck scaling{"modular_scaling"};
  for (double l : lambdas) {
    const double lo = std::min(std::pow(l, pp), std::pow(l, pm)) * rep.modular;
    const double hi = std::max(std::pow(l, pp), std::pow(l, pm)) * rep.modular;
    record(scaling, lo, modular(l * u, p), hi);
  }
  rep.checks.push_back(scaling);
  return rep;
}

struct LogHolderEstimate {
  double constant = 0.0;  // max |p(x)-p(y)| * (-log|x-y|) over pairs with 0 < |x-y| <= 1/2
  double h = 0.0;         // spacing the estimate was taken at
  bool flagged = false;   // constant above threshold
};

// A grid cannot probe |x - y| < h; compare estimates across refinements to
// detect divergence.
inline LogHolderEstimate log_holder_estimate(const VarExponent& p, double threshold = 1.0) {
  const Grid& g = p.grid();
  if (!(g.h() < 0.5)) throw PreconditionError("log_holder_estimate: need h < 1/2");
  LogHolderEstimate est{0.0, g.h(), false};
  const int N = g.node_count();
  for (int a = 0; a < N; ++a) {
    const Point xa = g.node_point(a);
    for (int b = a + 1; b < N; ++b) {
      const double t = distance(xa, g.node_point(b));
      if (t > 0.5 || t <= 0.0) continue;
      est.constant = std::max(est.constant, std::abs(p[a] - p[b]) * -std::log(t));
    }
  }
  est.flagged = est.constant > threshold;
  return est;
}

inline LogHolderEstimate log_holder_estimate(VarExponent& p, double threshold = 1.0) {
  auto est = log_holder_estimate(static_cast<const VarExponent&>(p), threshold);
  p.logHolderC = est.constant;
  return est;
}

struct BallSample {
  Point center;
  double radius;
};

struct DieniReport {
  std::vector<double> values;  // L(B)^{p-_B - p+_B} per ball
  double c1Estimate = 0.0;
};

inline DieniReport check_dieni_bound(const VarExponent& p, const std::vector<BallSample>& balls) {
  DieniReport rep;
  const Grid& g = p.grid();
  for (const auto& b : balls) {
    const Region r = Region::ball(b.center, b.radius);
    const auto nodes = r.nodes(g);
    if (nodes.empty()) throw DomainError("check_dieni_bound: ball contains no nodes");
    const auto [lo, hi] = p.extrema(nodes);
    const double v = std::pow(r.measure(g), lo - hi);
    rep.values.push_back(v);
    rep.c1Estimate = std::max(rep.c1Estimate, v);
  }
  return rep;
}

struct EmbeddingReport {
  double bound = 0.0;
  std::vector<double> ratios;  // ||u||_q / ||u||_p per test function
  bool passed = true;
};

// Embedding constant of L^p into L^q (q <= p) on a finite-measure domain,
// plus an empirical check on the supplied test functions.
inline EmbeddingReport embedding_constant_bound(const VarExponent& p, const VarExponent& q,
                                                const std::vector<GridFunction>& tests = {}) {
  detail::check_same_grid(p.grid(), q.grid());
  const Grid& g = p.grid();
  double rPlus = -std::numeric_limits<double>::infinity(), rMinus = -rPlus;
  for (int n = 0; n < g.node_count(); ++n) {
    if (q[n] > p[n]) throw PreconditionError("embedding_constant_bound: q > p at some node");
    const double r = 1.0 / q[n] - 1.0 / p[n];
    rPlus = std::max(rPlus, r);
    rMinus = std::min(rMinus, r);
  }
  const double L = g.domain_measure();
  EmbeddingReport rep;
  rep.bound = std::min(2.0 * (1.0 + L), 2.0 * std::max(std::pow(L, rPlus), std::pow(L, rMinus)));
  for (const auto& u : tests) {
    const double np = luxembourg_norm(u, p);
    const double nq = luxembourg_norm(u, q);
    const double ratio = np == 0.0 ? 0.0 : nq / np;
    rep.ratios.push_back(ratio);
    if (ratio > rep.bound * (1.0 + 1e-9)) rep.passed = false;
  }
  return rep;
}

// eps^{-d} * sum over B_eps(x0) of |u(y) - u(x0)|^{p(y)}, one entry per radius.
inline std::vector<double> lebesgue_defect(const GridFunction& u, const VarExponent& p, int x0,
                                           const std::vector<double>& radii) {
  detail::check_same_grid(u.grid(), p.grid());
  const Grid& g = u.grid();
  const Point c = g.node_point(x0);
  const Vec u0 = u.value(x0);
  std::vector<double> out;
  for (double r : radii) {
    double s = 0.0;
    for (int n : Region::ball(c, r).nodes(g)) {
      double d2 = 0.0;
      for (int i = 0; i < u.components(); ++i) d2 += (u(n, i) - u0[i]) * (u(n, i) - u0[i]);
      if (d2 > 0.0) s += g.node_weight(n) * std::pow(std::sqrt(d2), p[n]);
    }
    out.push_back(s / std::pow(r, g.dim()));
  }
  return out;
}

}  // namespace vexfd
