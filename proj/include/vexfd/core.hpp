#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vexfd {

// Maximum number of vector components carried by grid functions.
inline constexpr int kMaxComponents = 4;

using Point = std::array<double, 2>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

// A short vector in R^m, m <= kMaxComponents. Used for values and jumps.
struct Vec {
  std::array<double, kMaxComponents> v{};
  int n = 1;

  Vec() = default;
  explicit Vec(int size) : n(size) {}
  Vec(std::initializer_list<double> init) : n(static_cast<int>(init.size())) {
    int i = 0;
    for (double x : init) v[i++] = x;
  }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return n; }

  double norm() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[i] * v[i];
    return std::sqrt(s);
  }
  Vec operator-() const {
    Vec r(n);
    for (int i = 0; i < n; ++i) r[i] = -v[i];
    return r;
  }
};

// A gradient matrix in R^{m x d}, stored row-major (component, axis).
struct Gradient {
  std::array<double, 2 * kMaxComponents> v{};
  int m = 1;
  int d = 1;

  Gradient() = default;
  Gradient(int comps, int dim) : m(comps), d(dim) {}
  double& operator()(int i, int k) { return v[i * d + k]; }
  double operator()(int i, int k) const { return v[i * d + k]; }

  // Frobenius norm.
  double norm() const {
    double s = 0.0;
    for (int i = 0; i < m * d; ++i) s += v[i] * v[i];
    return std::sqrt(s);
  }
  double l1() const {
    double s = 0.0;
    for (int i = 0; i < m * d; ++i) s += std::abs(v[i]);
    return s;
  }
};

// Lebesgue measure of the unit ball in R^k, with gamma_0 = 1.
inline double unit_ball_measure(int k) {
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// Seeded generator with a portable uniform draw (the standard distributions
// are implementation-defined, which would break cross-platform determinism).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) { return static_cast<int>(uniform() * n); }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Error hierarchy. Every failure the library raises derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Mismatched grids, component counts or malformed shapes.
struct StructuralError : Error {
  using Error::Error;
};
// Non-finite or out-of-range input data.
struct InputError : Error {
  using Error::Error;
};
// Numerical procedure failed (bracketing, overflow).
struct NumericError : Error {
  using Error::Error;
};
// Empty or ill-defined integration domain.
struct DomainError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
// A user density returned NaN or broke its declared growth bounds.
struct DensityError : Error {
  using Error::Error;
};

// Raised when the jump set inside a ball is too large for the truncation to be defined.
struct JumpSetTooLarge : Error {
  double lhs;
  double rhs;
  JumpSetTooLarge(double l, double r)
      : Error(describe(l, r)), lhs(l), rhs(r) {}

 private:
  static std::string describe(double l, double r) {
    std::ostringstream os;
    os << "jump set too large: (2*gamma_iso*H(J_u cap B))^(d/(d-1)) = " << l
       << " > L(B)/2 = " << r;
    return os.str();
  }
};

// Raised when the strip count needed by the gluing construction exceeds the cap.
struct ParameterError : Error {
  long double requiredStrips;
  ParameterError(const std::string& what, long double k) : Error(what), requiredStrips(k) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace vexfd
