#ifndef ISOLAB_URABE_HPP
#define ISOLAB_URABE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "isolab/interp.hpp"
#include "isolab/potential.hpp"

namespace isolab {

/// A potential translated so the center sits at the origin, restricted so
/// that V approaches the same cap at both ends.
struct CenteredWell {
  Potential1D potential;
  double v_bar;  // common energy cap, may be +inf
};

/// Translate the equilibrium x_star to the origin and cap the longer side at
/// the common limit v_bar = min of the two endpoint limits.
CenteredWell centered_well(const Potential1D& p, double x_star);

/// The change of variable X(x) = sign(x)*sqrt(2V(x)) together with its
/// inverse and the angular frequency omega(X) = H(X)/X, H = V' o x(X).
class UrabeMap {
 public:
  UrabeMap(Potential1D centered, double v_bar);

  double X(double x) const;
  double x_of_X(double X) const;  // bracketed Newton, ~1e-12 relative
  double omega(double X) const;   // omega(0) = sqrt(V''(0))
  double omega0() const { return omega0_; }

  const Potential1D& potential() const { return p_; }
  double v_bar() const { return v_bar_; }
  Interval I() const { return p_.domain(); }
  Interval J() const {
    const double j = std::isfinite(v_bar_) ? std::sqrt(2.0 * v_bar_) : kInf;
    return {-j, j};
  }

 private:
  Potential1D p_;
  double v_bar_;
  double omega0_;
};

/// Validates V(0)=V'(0)=0 and x*V'(x)>0 by sampling, then builds the map.
/// Throws NotACenteredWell when the sign condition fails.
UrabeMap forward_map(const Potential1D& centered);

/// Convenience: center at x_star first (translation + cap restriction).
UrabeMap forward_map_at(const Potential1D& p, double x_star);

enum class Provenance { kExtracted, kUserSupplied };

/// The S-function of an isochronous center: odd, |S| < 1 on
/// J = (-sqrt(2*v_bar), sqrt(2*v_bar)), stored as Hermite samples in X.
class UrabeData {
 public:
  UrabeData(double T, double v_bar, CubicHermite S, Provenance prov,
            double odd_defect);

  /// Build from explicit samples; slopes are PCHIP-estimated when absent.
  /// A knot at X = 0 with S = 0 is required.
  static UrabeData from_samples(double T, double v_bar, std::vector<double> X,
                                std::vector<double> S,
                                std::vector<double> slopes = {});

  double T() const { return T_; }
  double v_bar() const { return v_bar_; }
  Interval J() const {
    const double j = std::isfinite(v_bar_) ? std::sqrt(2.0 * v_bar_) : kInf;
    return {-j, j};
  }
  double S(double X) const { return spline_.eval(X); }
  double dS(double X) const { return spline_.deriv(X); }
  double X_min() const { return spline_.x_front(); }
  double X_max() const { return spline_.x_back(); }
  const CubicHermite& spline() const { return spline_; }
  Provenance provenance() const { return provenance_; }
  double odd_defect() const { return odd_defect_; }
  double sup_abs_S() const;

 private:
  double T_;
  double v_bar_;
  CubicHermite spline_;
  Provenance provenance_;
  double odd_defect_;
};

/// S(X(x)) = -1 + (2*pi/T) * X(x) / V'(x) sampled on the given x-grid (0 is
/// skipped; the node S(0)=0 is appended). Exact dS/dX accompanies each
/// sample. Throws BoundViolation when some |S| >= 1 (p is not T-isochronous
/// or T is wrong). The stored odd_defect reports max |S(X)+S(-X)|.
UrabeData extract_S(const Potential1D& centered, double T,
                    const std::vector<double>& x_grid);

/// Symmetric x-grid whose images X(x) are graded toward +-X_max
/// (Chebyshev-like spacing in X).
std::vector<double> extraction_grid(const UrabeMap& map, double X_max, int n);

struct MembershipVerdict {
  bool member = false;
  double u_at_zero = 0.0;
  double final_xu = 0.0;   // last |x u'(x)| on the geometric grid
  double final_gap = 0.0;  // last |u(x) - u(0)|
  std::vector<double> grid;
  std::vector<double> xu_profile;
};

/// Numerical test of membership in the Urabe class: u(0) ~ 0, u continuous
/// at 0, and |x u'(x)| (finite differences) decreasing below tol along a
/// geometric grid accumulating at 0.
MembershipVerdict urabe_membership(const std::function<double(double)>& u,
                                   Interval I, double tol,
                                   double x_min = 1e-8);

/// int_0^{2*pi} f(r*cos(theta)) d(theta) by the m-node trapezoid rule.
/// Throws DomainExceeded when |r| >= sqrt(2*v_bar).
double circular_average(const std::function<double(double)>& f, double r,
                        int m, double v_bar = kInf);

struct AveragesVerdict {
  bool isochronous = false;
  double reference_T = 0.0;  // 2*pi/omega(0)
  double max_rel_deviation = 0.0;
  std::vector<double> radii;
  std::vector<double> theta;     // Theta(r) = avg of 1/omega
  std::vector<double> tau_even;  // residual of the even part
};

/// Theta(r) = int d(theta)/omega(r cos theta); constant iff isochronous.
/// tau_even(r) is the circulant average of the even part of 1/omega.
AveragesVerdict isochronicity_by_averages(const Potential1D& centered,
                                          const std::vector<double>& radii,
                                          double rel_tol, int m = 512);

struct ReconstructOptions {
  double x_cap = 10.0;     // X bound when v_bar = inf and samples exceed it
  double ode_rtol = 1e-12;
  double ode_atol = 1e-14;
};

/// Integrates dX/dx = (2*pi/T)/(1+S(X)), X(0)=0 in both directions until X
/// reaches the sampled range (or the cap), and returns V(x) = X(x)^2/2 on
/// the resulting open interval. Throws StepCollapse when 1+S approaches 0.
Potential1D reconstruct_potential(const UrabeData& s,
                                  const ReconstructOptions& opts = {});

struct LimitEstimate {
  double last = 0.0;          // final iterate
  double extrapolated = 0.0;  // Aitken-accelerated limit
  double uncertainty = 0.0;
  double sup_est = 0.0;  // limsup estimate (differs only when oscillating)
  double inf_est = 0.0;
};

struct EndpointDiagnostic {
  LimitEstimate at_alpha;  // sqrt(2V)/|V'| as x -> alpha+
  LimitEstimate at_beta;   // sqrt(2V)/V'  as x -> beta-
  double cross_sum_1 = 0.0;  // sup(alpha) + inf(beta)
  double cross_sum_2 = 0.0;  // inf(alpha) + sup(beta)
  double expected = 0.0;     // T/pi
};

/// Estimates the endpoint limits of sqrt(2V)/V' along geometric approach
/// grids; for an isochronous potential both cross sums equal T/pi.
EndpointDiagnostic endpoint_diagnostic(const Potential1D& centered, double T);

/// | int_0^{X(x_probe)} (1+S) dX - (2*pi/T) * x_probe |.
double s_integral_identity(const UrabeData& s, const UrabeMap& map,
                           double x_probe);

}  // namespace isolab

#endif  // ISOLAB_URABE_HPP
