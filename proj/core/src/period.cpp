#include "isolab/period.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "isolab/quadrature.hpp"
#include "isolab/roots.hpp"

namespace isolab {

namespace {

constexpr double kEquilibriumSlack = 1e-7;

void require_equilibrium(const Potential1D& p, double x_star) {
  const double dv = p.dv(x_star);
  const double scale = std::max(1.0, std::fabs(x_star));
  if (std::fabs(dv) > kEquilibriumSlack * scale)
    throw InvalidArgument("x_star=" + format_double(x_star) +
                          " is not an equilibrium: V'=" + format_double(dv));
}

// Locates, on the given side of x_star, a point hi with V(hi) >= E together
// with the turning point V(A) = E. `through` is x0 when it lies on this side.
struct SideAnchor {
  double hi;       // V(hi) >= E
  double turning;  // V(turning) = E
};

SideAnchor side_anchor(const Potential1D& p, double x_star, double E,
                       double side, std::optional<double> through,
                       double tol) {
  if (through) return {*through, *through};
  auto f = [&p, E](double xi) { return p.v(xi) - E; };
  const double edge = side > 0.0 ? p.domain().hi : p.domain().lo;
  const double step0 = std::max(std::fabs(x_star), 1.0) * 1e-3;
  auto br = walk_to_sign_change(f, x_star, side, step0, edge);
  if (!br)
    throw NoTurningPoint(
        "V never re-reaches the level " + format_double(E) + " on the " +
        (side > 0.0 ? std::string("right") : std::string("left")) +
        " of x_star=" + format_double(x_star));
  const double A = brent(f, *br, tol, 4.0 * kEps);
  const double hi = (br->fb >= 0.0) ? br->b : br->a;
  return {hi, A};
}

// Solve V(xi) = level on the ordered bracket between `inner` (V < level) and
// `outer` (V >= level), robust to roundoff at the ends.
double invert_level(const Potential1D& p, double inner, double outer,
                    double level) {
  double flo = p.v(inner) - level;
  double fhi = p.v(outer) - level;
  if (flo >= 0.0) return inner;
  if (fhi <= 0.0) return outer;
  const double lo = std::min(inner, outer), hi = std::max(inner, outer);
  auto fdf = [&p, level](double xi) {
    const PotentialValues pv = p.eval(xi);
    return std::make_pair(pv.v - level, pv.dv);
  };
  Bracket br{lo, hi, lo == inner ? flo : fhi, hi == outer ? fhi : flo};
  return newton_bracketed(fdf, br, 0.5 * (lo + hi));
}

struct HalfWell {
  double value;
  double error;
  double turning;
};

// sqrt-free integral of 1/sqrt(E - V) over one side of the well.
HalfWell half_well_integral(const Potential1D& p, double x_star, double E,
                            double dE, double side, std::optional<double> x0,
                            double tol) {
  SideAnchor anchor = side_anchor(p, x_star, E, side, x0, 1e-14);
  const double Vs = E - dE;
  const double c = invert_level(p, x_star, anchor.hi, Vs + 0.5 * dE);

  QuadratureOptions qopts;
  qopts.rel_tol = 0.2 * tol;

  // inner piece: regular integrand on [x_star, c]
  auto direct = [&p, E](double xi) {
    const double g = E - p.v(xi);
    return 1.0 / std::sqrt(g);
  };
  auto inner = integrate_adaptive(direct, std::min(x_star, c),
                                  std::max(x_star, c), qopts);
  if (!inner.converged)
    throw SingularQuadratureFailure(
        "period: inner quadrature did not converge (interior critical level?)");

  // outer piece in the angle variable: V(xi) = E - D cos^2 w
  const double D = E - p.v(c);
  if (!(D > 0.0))
    throw SingularQuadratureFailure("period: degenerate energy split");
  auto outer_f = [&p, &anchor, c, E, D](double w) {
    const double cw = std::cos(w);
    const double level = E - D * cw * cw;
    const double xi = invert_level(p, c, anchor.hi, level);
    const double dv = p.dv(xi);
    if (dv == 0.0)
      throw SingularQuadratureFailure(
          "period: V' vanishes at interior node xi=" + format_double(xi));
    return 2.0 * std::sqrt(D) * std::sin(w) / std::fabs(dv);
  };
  auto outer = integrate_adaptive(outer_f, 0.0, 0.5 * kPi, qopts);
  if (!outer.converged)
    throw SingularQuadratureFailure(
        "period: turning-point quadrature did not converge");

  return {inner.value + outer.value, inner.error + outer.error,
          anchor.turning};
}

}  // namespace

double turning_point(const Potential1D& p, double x0, double x_star,
                     double tol) {
  require_equilibrium(p, x_star);
  if (x0 == x_star)
    throw InvalidArgument("turning_point: x0 must differ from x_star");
  const double E = p.v(x0);
  if (!(E > p.v(x_star)))
    throw InvalidArgument("turning_point: V(x0) must exceed V(x_star)");
  const double side = x0 > x_star ? -1.0 : 1.0;  // opposite side
  return side_anchor(p, x_star, E, side, std::nullopt, tol).turning;
}

PeriodSample period(const Potential1D& p, double x0, double x_star,
                    double tol) {
  require_equilibrium(p, x_star);
  if (x0 == x_star)
    throw InvalidArgument("period: x0 must differ from x_star");
  const double E = p.v(x0);
  const double Vs = p.v(x_star);
  const double dE = E - Vs;
  if (!(dE > 0.0))
    throw InvalidArgument("period: V(x0) must exceed V(x_star)");

  const bool x0_right = x0 > x_star;
  HalfWell right = half_well_integral(
      p, x_star, E, dE, +1.0,
      x0_right ? std::optional<double>(x0) : std::nullopt, tol);
  HalfWell left = half_well_integral(
      p, x_star, E, dE, -1.0,
      x0_right ? std::nullopt : std::optional<double>(x0), tol);

  PeriodSample s;
  s.x0 = x0;
  s.turning = x0_right ? left.turning : right.turning;
  s.theta = std::sqrt(2.0) * (left.value + right.value);
  s.est_error = std::sqrt(2.0) * (left.error + right.error);
  if (!(s.theta > 0.0) || !std::isfinite(s.theta))
    throw SingularQuadratureFailure("period: non-finite result");
  return s;
}

double linear_period(const Potential1D& p, double x_star) {
  const double ddv = p.ddv(x_star);
  if (!(ddv > 0.0))
    throw NotACenter("linear_period: V''(x_star)=" + format_double(ddv) +
                     " is not positive");
  return 2.0 * kPi / std::sqrt(ddv);
}

std::vector<PeriodCurveEntry> period_curve(const Potential1D& p, double x_star,
                                           const std::vector<double>& amplitudes,
                                           double tol, int jobs) {
  std::vector<PeriodCurveEntry> out(amplitudes.size());
  auto run_one = [&](std::size_t i) {
    PeriodCurveEntry e;
    e.x0 = amplitudes[i];
    try {
      e.sample = period(p, amplitudes[i], x_star, tol);
    } catch (const Error& err) {
      e.error = err.what();
    }
    return e;
  };
  if (jobs <= 1 || amplitudes.size() < 2) {
    for (std::size_t i = 0; i < amplitudes.size(); ++i) out[i] = run_one(i);
    return out;
  }
  std::vector<std::future<PeriodCurveEntry>> futures;
  futures.reserve(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    futures.push_back(std::async(std::launch::async | std::launch::deferred,
                                 run_one, i));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) out[i] = futures[i].get();
  return out;
}

IsochronyVerdict is_isochronous(const Potential1D& p, double x_star,
                                const std::vector<double>& amplitudes,
                                double rel_tol) {
  IsochronyVerdict v;
  v.linear_T = linear_period(p, x_star);  // throws NotACenter if degenerate
  for (double x0 : amplitudes) {
    PeriodSample s = period(p, x0, x_star);
    const double dev = std::fabs(s.theta - v.linear_T) / v.linear_T;
    v.samples.push_back(s);
    v.deviations.push_back(dev);
    v.max_rel_deviation = std::max(v.max_rel_deviation, dev);
  }
  v.isochronous = v.max_rel_deviation <= rel_tol;
  return v;
}

}  // namespace isolab
