#ifndef ISOLAB_POTENTIAL_HPP
#define ISOLAB_POTENTIAL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isolab/common.hpp"

namespace isolab {

struct PotentialValues {
  double v;    // V(x)
  double dv;   // V'(x)
  double ddv;  // V''(x)
};

enum class PotentialKind {
  kHarmonicForced,
  kPowerLaw,
  kLog,
  kErmakov,
  kPlateau,
  kReducedFromForce,
  kCustom,
};

std::string to_string(PotentialKind k);

/// A C^2 potential on an open interval, immutable after construction.
class Potential1D {
 public:
  Potential1D() = default;
  Potential1D(Interval domain, PotentialKind kind, std::string label,
              std::function<PotentialValues(double)> eval)
      : domain_(domain), kind_(kind), label_(std::move(label)),
        eval_(std::move(eval)) {}

  PotentialValues eval(double x) const {
    if (!domain_.contains(x))
      throw DomainError("potential '" + label_ + "': x=" + format_double(x) +
                        " outside open domain (" + format_double(domain_.lo) +
                        ", " + format_double(domain_.hi) + ")");
    return eval_(x);
  }
  double v(double x) const { return eval(x).v; }
  double dv(double x) const { return eval(x).dv; }
  double ddv(double x) const { return eval(x).ddv; }

  const Interval& domain() const { return domain_; }
  PotentialKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(eval_); }

 private:
  Interval domain_;
  PotentialKind kind_ = PotentialKind::kCustom;
  std::string label_;
  std::function<PotentialValues(double)> eval_;
};

// --- closed-form factories -------------------------------------------------

/// V(x) = x^2/2 on the real line.
Potential1D harmonic_potential();

/// V(x) = x^2/2 + c*x on the real line (center at -c).
Potential1D harmonic_forced_potential(double c);

/// V(x) = x^2/2 + lambda*K*x^(a+1)/(a+1) on (0, inf); a = -1 delegates to the
/// log form.
Potential1D power_law_potential(double a, double K, double lambda);

/// V(x) = x^2/2 + lambda*K*ln(x) on (0, inf)  (the a = -1 family).
Potential1D log_potential(double K, double lambda);

/// V(x) = x^2/2 + c/x^2 on (0, inf). c = 1/2 is the canonical normalization.
Potential1D ermakov_potential(double c = 0.5);

/// Flat-bottomed quartic well: V = (gamma-x)^4/4 left of gamma, 0 on
/// [gamma, Gamma], (x-Gamma)^4/4 right of Gamma. Critical set is the whole
/// plateau.
Potential1D plateau_potential(double gamma, double Gamma);

/// Monotone-cubic interpolation of (x, V, V') samples; V'' comes from the
/// interpolant.
Potential1D potential_from_samples(std::vector<double> x, std::vector<double> v,
                                   std::vector<double> dv);

/// W(x) = V(x + x_star) - V(x_star) on the shifted domain.
Potential1D translated_potential(const Potential1D& p, double x_star);

/// Same evaluator on a sub-interval of the domain.
Potential1D restricted_potential(const Potential1D& p, Interval sub);

// --- parametrized families V_lambda = x^2/2 + lambda*Phi -------------------

class PotentialFamily {
 public:
  PotentialFamily(std::function<double(double)> Phi,
                  std::function<double(double)> phi,
                  std::function<double(double)> dphi, Interval lambda_range,
                  PotentialKind kind, std::string label)
      : Phi_(std::move(Phi)), phi_(std::move(phi)), dphi_(std::move(dphi)),
        lambda_range_(lambda_range), kind_(kind), label_(std::move(label)) {}

  double Phi(double x) const { return Phi_(x); }
  double phi(double x) const { return phi_(x); }    // Phi'
  double dphi(double x) const { return dphi_(x); }  // Phi''
  const Interval& lambda_range() const { return lambda_range_; }
  const std::string& label() const { return label_; }
  PotentialKind kind() const { return kind_; }

  /// V_lambda(x) = x^2/2 + lambda*Phi(x) on (0, inf).
  Potential1D materialize(double lambda) const;

 private:
  std::function<double(double)> Phi_, phi_, dphi_;
  Interval lambda_range_;
  PotentialKind kind_;
  std::string label_;
};

/// phi(x) = K*x^a (a = -1 gives the log family Phi = K*ln x).
PotentialFamily power_law_family(double a, double K);

/// phi(x) = K constant (the a = 0 case).
PotentialFamily constant_force_family(double K);

/// The uniqueness counterexample: phi = -3^n exactly on [6^n, 2*6^n] for
/// n_min <= n <= n_max, quintic-smoothstep transitions in between, constant
/// continuations outside. C^2 on (0, inf).
PotentialFamily counterexample_family(int n_min, int n_max);

// --- equilibria -------------------------------------------------------------

enum class Stability { kCenterCandidate, kDegenerate, kSaddle };

std::string to_string(Stability s);

struct Equilibrium {
  double x;
  double second_derivative;
  Stability stability;
};

struct EquilibriumSet {
  std::vector<Equilibrium> roots;  // strictly increasing in x
  std::vector<std::string> warnings;
};

/// Scan V' on a uniform seed grid inside `scan`, refine every sign change by
/// bracketed root search to |V'| <= tol, deduplicate within 10*tol in x.
/// An empty result is not an error.
EquilibriumSet find_equilibria(const Potential1D& p, Interval scan,
                               int n_seeds = 512, double tol = 1e-12);

struct FamilyScanOptions {
  double x_lo = 1e-4;
  double x_hi = 1e4;
  int n_seeds = 1024;
};

/// The unique root of x + lambda*phi(x) = 0 on (0, inf), if any. A full
/// geometric scan asserts uniqueness; two or more roots throw
/// MultipleEquilibria (expected for the counterexample family).
std::optional<double> family_equilibrium(const PotentialFamily& f,
                                         double lambda, double tol = 1e-12,
                                         const FamilyScanOptions& scan = {});

}  // namespace isolab

#endif  // ISOLAB_POTENTIAL_HPP
