#pragma once

// Experiment configuration: sectioned key-value files, typed fields with
// line-level diagnostics, and a canonical echo that parses back to the same run.

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vexfd/core.hpp"

namespace vexfd {

inline constexpr int kConfigFormatVersion = 1;

struct ConfigError : Error {
  using Error::Error;
};

struct ExponentSpec {
  std::string kind = "constant";  // constant | affine | sinusoidal | step | file
  double p = 2.0;
  double slope = 0.0;      // affine: p + slope * x
  double amplitude = 0.0;  // sinusoidal: p + amplitude sin(2 pi frequency x)
  double frequency = 1.0;
  double right = 3.0;      // step: p left of `at`, right from `at` on
  double at = 0.0;
  std::string file;        // file: whitespace-separated node samples
};

struct ExperimentConfig {
  int formatVersion = kConfigFormatVersion;
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out = "out";

  int dim = 1;
  double lo = -1.0, hi = 1.0;
  int cells = 64;

  ExponentSpec exponent;

  std::string bulk = "power";
  std::vector<double> coefficient{1.0};
  std::string surface = "const_surface";
  double kappa = 1.0;
  double surfaceAlpha = 1.0;
  double surfaceBeta = 2.0;

  std::vector<double> eps{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::vector<int> j{1};
  int tailWindow = 3;
  double spreadWarning = 0.05;
  bool hRefine = false;

  int nodes = 64;
  int maxIter = 50;
  int maxSweeps = 20000;
  double innerTol = 1e-10;
  int multistarts = 2;
  int ringWidth = 1;

  std::string cls = "sbv";
  std::string datum = "affine";  // cell experiment: affine | jump
  std::vector<double> x0{0.0};
  std::vector<double> xi{1.0};
  std::vector<double> zeta{1.0};
  std::vector<double> nu{1.0};

  double tolerance = 0.05;
  std::optional<double> oracle;
  int samples = 100;
  std::vector<double> eta{0.5, 0.1, 0.02};
  std::vector<double> sigmas{1.0, 0.5, 0.25, 0.125};
  double gammaIso = 0.0;  // 0: dimension default
  int components = 1;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ", ";
    if constexpr (std::is_floating_point_v<T>)
      s += format_double(v[k]);
    else
      s += std::to_string(v[k]);
  }
  return s;
}

class ConfigReader {
 public:
  ConfigReader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    try {
      boost::property_tree::read_ini(in, tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(origin_ + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    std::istringstream lines(text);
    std::string line, section;
    for (int no = 1; std::getline(lines, line); ++no) {
      line = trim(line);
      if (line.empty() || line[0] == ';' || line[0] == '#') continue;
      if (line[0] == '[') {
        section = trim(line.substr(1, line.find(']') - 1));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(0, eq));
      lineOf_[section.empty() ? key : section + "." + key] = no;
    }
  }

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    const auto it = lineOf_.find(path);
    const std::string where = it == lineOf_.end() ? origin_ : origin_ + ":" + std::to_string(it->second);
    throw ConfigError(where + ": [" + path + "] " + msg);
  }

  std::optional<std::string> raw(const std::string& path) {
    used_.insert(path);
    const auto v = tree_.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void str(const std::string& path, std::string& out) {
    if (auto v = raw(path)) {
      if (v->empty()) fail(path, "value is empty");
      out = *v;
    }
  }

  double parse_double(const std::string& path, const std::string& s) const {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
      fail(path, "expected a number, got '" + s + "'");
    return v;
  }
  long long parse_int(const std::string& path, const std::string& s) const {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(path, "expected an integer, got '" + s + "'");
    return v;
  }

  void num(const std::string& path, double& out) {
    if (auto v = raw(path)) out = parse_double(path, *v);
  }
  void num(const std::string& path, std::optional<double>& out) {
    if (auto v = raw(path)) out = parse_double(path, *v);
  }
  void num(const std::string& path, int& out) {
    if (auto v = raw(path)) out = static_cast<int>(parse_int(path, *v));
  }
  void num(const std::string& path, std::uint64_t& out) {
    if (auto v = raw(path)) {
      const long long x = parse_int(path, *v);
      if (x < 0) fail(path, "seed must be non-negative");
      out = static_cast<std::uint64_t>(x);
    }
  }
  void flag(const std::string& path, bool& out) {
    if (auto v = raw(path)) {
      if (*v == "true") out = true;
      else if (*v == "false") out = false;
      else fail(path, "expected true or false, got '" + *v + "'");
    }
  }
  template <class T>
  void list(const std::string& path, std::vector<T>& out) {
    auto v = raw(path);
    if (!v) return;
    out.clear();
    std::istringstream in(*v);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(path, "empty list entry");
      if constexpr (std::is_floating_point_v<T>)
        out.push_back(parse_double(path, item));
      else
        out.push_back(static_cast<T>(parse_int(path, item)));
    }
    if (out.empty()) fail(path, "list is empty");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : tree_) {
      if (value.empty()) {
        if (!used_.count(key)) fail(key, "unknown key");
        continue;
      }
      for (const auto& [sub, leaf] : value)
        if (!used_.count(key + "." + sub)) fail(key + "." + sub, "unknown key");
    }
  }

 private:
  std::string origin_;
  boost::property_tree::ptree tree_;
  std::map<std::string, int> lineOf_;
  std::set<std::string> used_;
};

}  // namespace detail

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"norms",      "truncation", "glue",         "cell",
                                              "bulk-density", "surface-density", "separation",
                                              "perturbation", "homogenize-1d", "validate"};
  return kinds;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
  detail::ConfigReader r(text, origin);
  ExperimentConfig c;
  r.num("format_version", c.formatVersion);
  if (c.formatVersion != kConfigFormatVersion)
    r.fail("format_version", "unsupported version " + std::to_string(c.formatVersion));
  if (!r.raw("experiment")) r.fail("experiment", "missing");
  r.str("experiment", c.experiment);
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), c.experiment) == experiment_kinds().end())
    r.fail("experiment", "unknown experiment '" + c.experiment + "'");
  if (!r.raw("seed")) r.fail("seed", "missing; runs must be seeded");
  r.num("seed", c.seed);
  r.str("output.dir", c.out);

  r.num("domain.dim", c.dim);
  r.num("domain.lo", c.lo);
  r.num("domain.hi", c.hi);
  r.num("domain.cells", c.cells);
  if (c.dim != 1 && c.dim != 2) r.fail("domain.dim", "must be 1 or 2");
  if (!(c.hi > c.lo)) r.fail("domain.hi", "must exceed domain.lo");
  if (c.cells < 2) r.fail("domain.cells", "need at least 2 cells");

  auto& e = c.exponent;
  r.str("exponent.kind", e.kind);
  r.num("exponent.p", e.p);
  r.num("exponent.slope", e.slope);
  r.num("exponent.amplitude", e.amplitude);
  r.num("exponent.frequency", e.frequency);
  r.num("exponent.right", e.right);
  r.num("exponent.at", e.at);
  r.str("exponent.file", e.file);
  const std::set<std::string> exponentKinds{"constant", "affine", "sinusoidal", "step", "file"};
  if (!exponentKinds.count(e.kind)) r.fail("exponent.kind", "unknown exponent kind '" + e.kind + "'");
  if (!(e.p > 1.0)) r.fail("exponent.p", "must exceed 1");
  if (e.kind == "step" && !(e.right > 1.0)) r.fail("exponent.right", "must exceed 1");
  if (e.kind == "file" && e.file.empty()) r.fail("exponent.file", "missing for a file exponent");

  r.str("bulk.name", c.bulk);
  r.list("bulk.coefficient", c.coefficient);
  if (c.bulk != "power" && c.bulk != "weighted_power") r.fail("bulk.name", "unknown bulk density '" + c.bulk + "'");
  for (double a : c.coefficient)
    if (!(a > 0.0)) r.fail("bulk.coefficient", "entries must be positive");

  r.str("surface.name", c.surface);
  r.num("surface.kappa", c.kappa);
  r.num("surface.alpha", c.surfaceAlpha);
  r.num("surface.beta", c.surfaceBeta);
  if (c.surface == "const_surface") {
    if (!(c.kappa > 0.0)) r.fail("surface.kappa", "must be positive");
  } else if (c.surface == "capped_linear") {
    if (!(c.surfaceAlpha > 0.0)) r.fail("surface.alpha", "must be positive");
    if (!(c.surfaceBeta >= c.surfaceAlpha)) r.fail("surface.beta", "must be at least surface.alpha");
  } else if (c.surface == "linear_surface") {
    if (!(c.surfaceAlpha > 0.0)) r.fail("surface.alpha", "must be positive");
  } else {
    r.fail("surface.name", "unknown surface density '" + c.surface + "'");
  }

  r.list("ladder.eps", c.eps);
  r.list("ladder.j", c.j);
  r.num("ladder.tail_window", c.tailWindow);
  r.num("ladder.spread_warning", c.spreadWarning);
  r.flag("ladder.h_refine", c.hRefine);
  for (std::size_t k = 0; k < c.eps.size(); ++k) {
    if (!(c.eps[k] > 0.0)) r.fail("ladder.eps", "entries must be positive");
    if (k > 0 && !(c.eps[k] < c.eps[k - 1])) r.fail("ladder.eps", "entries must be strictly decreasing");
  }
  for (int j : c.j)
    if (j < 1) r.fail("ladder.j", "entries must be at least 1");
  if (c.tailWindow < 1) r.fail("ladder.tail_window", "must be at least 1");

  r.num("solver.nodes", c.nodes);
  r.num("solver.max_iter", c.maxIter);
  r.num("solver.max_sweeps", c.maxSweeps);
  r.num("solver.inner_tol", c.innerTol);
  r.num("solver.multistarts", c.multistarts);
  r.num("solver.ring_width", c.ringWidth);
  if (c.nodes < 4) r.fail("solver.nodes", "need at least 4 cells per axis");
  if (c.maxIter < 1) r.fail("solver.max_iter", "must be at least 1");
  if (c.maxSweeps < 1) r.fail("solver.max_sweeps", "must be at least 1");
  if (!(c.innerTol > 0.0)) r.fail("solver.inner_tol", "must be positive");
  if (c.multistarts < 0) r.fail("solver.multistarts", "must be non-negative");
  if (c.ringWidth < 1) r.fail("solver.ring_width", "must be at least 1");

  r.str("datum.class", c.cls);
  r.str("datum.kind", c.datum);
  r.list("datum.x0", c.x0);
  r.list("datum.xi", c.xi);
  r.list("datum.zeta", c.zeta);
  r.list("datum.nu", c.nu);
  r.num("datum.components", c.components);
  if (c.cls != "sbv" && c.cls != "sobolev" && c.cls != "pc") r.fail("datum.class", "unknown class '" + c.cls + "'");
  if (c.datum != "affine" && c.datum != "jump") r.fail("datum.kind", "must be affine or jump");
  if (static_cast<int>(c.x0.size()) != c.dim) r.fail("datum.x0", "needs domain.dim entries");
  if (static_cast<int>(c.nu.size()) != c.dim) r.fail("datum.nu", "needs domain.dim entries");
  if (c.components < 1 || c.components > kMaxComponents) r.fail("datum.components", "out of range");
  if (static_cast<int>(c.zeta.size()) != c.components) r.fail("datum.zeta", "needs datum.components entries");
  if (static_cast<int>(c.xi.size()) != c.components * c.dim)
    r.fail("datum.xi", "needs components x dim entries, row-major");

  r.num("check.tolerance", c.tolerance);
  r.num("check.oracle", c.oracle);
  r.num("check.samples", c.samples);
  r.list("check.eta", c.eta);
  r.list("check.sigmas", c.sigmas);
  r.num("check.gamma_iso", c.gammaIso);
  if (!(c.tolerance > 0.0)) r.fail("check.tolerance", "must be positive");
  if (c.samples < 1) r.fail("check.samples", "must be at least 1");
  for (double v : c.eta)
    if (!(v > 0.0)) r.fail("check.eta", "entries must be positive");
  for (double v : c.sigmas)
    if (!(v > 0.0)) r.fail("check.sigmas", "entries must be positive");
  if (c.gammaIso < 0.0) r.fail("check.gamma_iso", "must be non-negative");

  r.reject_unknown();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

// Every field, defaults included, in a fixed order.
inline std::string echo_config(const ExperimentConfig& c) {
  using detail::format_double;
  using detail::join;
  std::ostringstream os;
  os << "format_version = " << c.formatVersion << "\n";
  os << "experiment = " << c.experiment << "\n";
  os << "seed = " << c.seed << "\n\n";
  os << "[output]\ndir = " << c.out << "\n\n";
  os << "[domain]\ndim = " << c.dim << "\nlo = " << format_double(c.lo) << "\nhi = " << format_double(c.hi)
     << "\ncells = " << c.cells << "\n\n";
  const auto& e = c.exponent;
  os << "[exponent]\nkind = " << e.kind << "\np = " << format_double(e.p) << "\nslope = " << format_double(e.slope)
     << "\namplitude = " << format_double(e.amplitude) << "\nfrequency = " << format_double(e.frequency)
     << "\nright = " << format_double(e.right) << "\nat = " << format_double(e.at) << "\n";
  if (!e.file.empty()) os << "file = " << e.file << "\n";
  os << "\n[bulk]\nname = " << c.bulk << "\ncoefficient = " << join(c.coefficient) << "\n\n";
  os << "[surface]\nname = " << c.surface << "\nkappa = " << format_double(c.kappa)
     << "\nalpha = " << format_double(c.surfaceAlpha) << "\nbeta = " << format_double(c.surfaceBeta) << "\n\n";
  os << "[ladder]\neps = " << join(c.eps) << "\nj = " << join(c.j) << "\ntail_window = " << c.tailWindow
     << "\nspread_warning = " << format_double(c.spreadWarning) << "\nh_refine = " << (c.hRefine ? "true" : "false")
     << "\n\n";
  os << "[solver]\nnodes = " << c.nodes << "\nmax_iter = " << c.maxIter << "\nmax_sweeps = " << c.maxSweeps
     << "\ninner_tol = " << format_double(c.innerTol) << "\nmultistarts = " << c.multistarts
     << "\nring_width = " << c.ringWidth << "\n\n";
  os << "[datum]\nclass = " << c.cls << "\nkind = " << c.datum << "\ncomponents = " << c.components
     << "\nx0 = " << join(c.x0) << "\nxi = " << join(c.xi) << "\nzeta = " << join(c.zeta) << "\nnu = " << join(c.nu)
     << "\n\n";
  os << "[check]\ntolerance = " << format_double(c.tolerance) << "\n";
  if (c.oracle) os << "oracle = " << format_double(*c.oracle) << "\n";
  os << "samples = " << c.samples << "\neta = " << join(c.eta) << "\nsigmas = " << join(c.sigmas)
     << "\ngamma_iso = " << format_double(c.gammaIso) << "\n";
  return os.str();
}

}  // namespace vexfd
