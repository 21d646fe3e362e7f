#ifndef ISOLAB_PERIOD_HPP
#define ISOLAB_PERIOD_HPP

#include <optional>
#include <string>
#include <vector>

#include "isolab/potential.hpp"

namespace isolab {

struct PeriodSample {
  double x0;         // initial amplitude (released at rest)
  double turning;    // conjugate turning point A(x0), opposite side of x_star
  double theta;      // minimal period of the oscillation
  double est_error;  // quadrature error estimate (absolute)
};

/// The conjugate root A of V(A) = V(x0) on the opposite side of x_star,
/// located by an expanding bracketed search. Throws NoTurningPoint when the
/// level is never reached before the domain boundary.
double turning_point(const Potential1D& p, double x0, double x_star,
                     double tol = 1e-12);

/// Minimal period of the orbit through (x0, 0):
///   Theta = sqrt(2) * int_A^{x0} dxi / sqrt(V(x0) - V(xi)).
/// Each half-well is split at the half-energy point; the outer piece is
/// integrated in the angle variable V(xi) = E - D*cos^2(w), which removes the
/// inverse-square-root turning singularity, with a bracketed Newton inversion
/// of V per node. est_error <= tol * theta on success.
PeriodSample period(const Potential1D& p, double x0, double x_star,
                    double tol = 1e-9);

/// 2*pi / sqrt(V''(x_star)); throws NotACenter when V''(x_star) <= 0.
double linear_period(const Potential1D& p, double x_star);

struct PeriodCurveEntry {
  double x0;
  std::optional<PeriodSample> sample;  // empty on failure
  std::string error;                   // diagnostic when empty
};

/// Maps period() over an amplitude grid; failures are recorded per point.
/// Results are returned in grid order (cells may run concurrently).
std::vector<PeriodCurveEntry> period_curve(const Potential1D& p, double x_star,
                                           const std::vector<double>& amplitudes,
                                           double tol = 1e-9, int jobs = 1);

struct IsochronyVerdict {
  bool isochronous = false;
  double linear_T = 0.0;
  double max_rel_deviation = 0.0;
  std::vector<PeriodSample> samples;
  std::vector<double> deviations;  // |theta - linear_T| / linear_T per sample
};

/// Compares the period over an amplitude grid against the linearized period.
IsochronyVerdict is_isochronous(const Potential1D& p, double x_star,
                                const std::vector<double>& amplitudes,
                                double rel_tol);

}  // namespace isolab

#endif  // ISOLAB_PERIOD_HPP
