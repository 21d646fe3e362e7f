#ifndef ISOLAB_COMMON_HPP
#define ISOLAB_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace isolab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded_below() const { return std::isfinite(lo); }
  bool bounded_above() const { return std::isfinite(hi); }
  double width() const { return hi - lo; }

  static Interval all() { return {-kInf, kInf}; }
  static Interval positive() { return {0.0, kInf}; }
};

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode of the numerical operations maps to a
// distinct type so callers (and the CLI) can react per condition.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidArgument : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// A family scan found two or more equilibria where at most one is allowed.
struct MultipleEquilibria : Error {
  std::vector<double> roots;
  MultipleEquilibria(const std::string& msg, std::vector<double> r)
      : Error(msg), roots(std::move(r)) {}
};

struct NoTurningPoint : Error { using Error::Error; };
struct SingularQuadratureFailure : Error { using Error::Error; };
struct NotACenter : Error { using Error::Error; };
struct NotACenteredWell : Error { using Error::Error; };
struct BoundViolation : Error { using Error::Error; };
struct StepCollapse : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct DomainExceeded : Error { using Error::Error; };
struct NotAttractiveHere : Error { using Error::Error; };
struct CollisionApproach : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct DomainEscape : Error { using Error::Error; };

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

}  // namespace isolab

#endif  // ISOLAB_COMMON_HPP
