#include "isolab/urabe.hpp"

#include <algorithm>
#include <cmath>

#include "isolab/ode.hpp"
#include "isolab/quadrature.hpp"
#include "isolab/roots.hpp"

namespace isolab {

namespace {

struct AitkenResult {
  double estimate;
  double uncertainty;
};

AitkenResult aitken_limit(std::vector<double> s) {
  if (s.empty()) return {0.0, kInf};
  if (s.size() == 1) return {s[0], kInf};
  double prev_est = s.back();
  for (int sweep = 0; sweep < 3 && s.size() >= 3; ++sweep) {
    std::vector<double> t;
    t.reserve(s.size() - 2);
    for (std::size_t k = 0; k + 2 < s.size(); ++k) {
      const double d1 = s[k + 1] - s[k];
      const double d2 = s[k + 2] - s[k + 1];
      const double den = d2 - d1;
      if (std::fabs(den) < 1e-300 || !std::isfinite(den))
        t.push_back(s[k + 2]);
      else
        t.push_back(s[k + 2] - d2 * d2 / den);
    }
    prev_est = s.back();
    s = std::move(t);
  }
  const double est = s.back();
  double unc = std::fabs(est - prev_est);
  if (s.size() >= 2) unc = std::max(unc, std::fabs(est - s[s.size() - 2]));
  return {est, unc};
}

// Sample a function along a geometric approach to one end of the domain of a
// centered well (0 is interior). Returns the possibly early-terminated
// sequence of values.
std::vector<double> approach_sequence(const std::function<double(double)>& g,
                                      const Interval& dom, bool to_upper,
                                      int max_iter = 36) {
  std::vector<double> vals;
  const double end = to_upper ? dom.hi : dom.lo;
  auto push = [&](double x) {
    if (!dom.contains(x)) return true;
    double v;
    try {
      v = g(x);
    } catch (const Error&) {
      return false;
    }
    if (!std::isfinite(v)) return false;
    vals.push_back(v);
    const std::size_t n = vals.size();
    if (n >= 4 && std::fabs(vals[n - 1] - vals[n - 2]) <=
                      1e-15 * (1.0 + std::fabs(vals[n - 1])))
      return false;
    return true;
  };
  if (std::isfinite(end)) {
    double d = 0.5 * std::fabs(end);  // halfway between the end and the center
    if (d == 0.0) return vals;
    for (int k = 0; k < max_iter; ++k, d *= 0.5)
      if (!push(to_upper ? end - d : end + d)) break;
  } else {
    double s = 2.0;
    for (int k = 0; k < max_iter; ++k, s *= 2.0)
      if (!push(to_upper ? s : -s)) break;
  }
  return vals;
}

// Endpoint limit of V itself: +inf when the values blow past 1e12.
double cap_limit(const Potential1D& p, bool upper) {
  auto seq = approach_sequence([&p](double x) { return p.v(x); }, p.domain(),
                               upper);
  if (seq.empty()) return kInf;
  if (seq.back() > 1e12) return kInf;
  return aitken_limit(seq).estimate;
}

LimitEstimate limit_estimate(const std::vector<double>& seq) {
  LimitEstimate e;
  if (seq.empty()) {
    e.uncertainty = kInf;
    return e;
  }
  e.last = seq.back();
  auto [est, unc] = aitken_limit(seq);
  e.extrapolated = est;
  e.uncertainty = unc;
  // distinguish limsup/liminf only when the tail oscillates
  const std::size_t tail = std::min<std::size_t>(6, seq.size());
  double mx = -kInf, mn = kInf;
  bool monotone_up = true, monotone_down = true;
  for (std::size_t i = seq.size() - tail; i < seq.size(); ++i) {
    mx = std::max(mx, seq[i]);
    mn = std::min(mn, seq[i]);
    if (i > seq.size() - tail) {
      if (seq[i] < seq[i - 1]) monotone_up = false;
      if (seq[i] > seq[i - 1]) monotone_down = false;
    }
  }
  if (monotone_up || monotone_down) {
    e.sup_est = e.inf_est = est;
  } else {
    e.sup_est = std::max(est, mx);
    e.inf_est = std::min(est, mn);
  }
  return e;
}

}  // namespace

CenteredWell centered_well(const Potential1D& p, double x_star) {
  Potential1D w = translated_potential(p, x_star);
  const double cap_lo = cap_limit(w, false);
  const double cap_hi = cap_limit(w, true);
  double v_bar = std::min(cap_lo, cap_hi);
  if (!(v_bar > 0.0))
    throw NotACenteredWell("centered_well: endpoint caps are not positive");
  const bool equal = (std::isinf(cap_lo) && std::isinf(cap_hi)) ||
                     (std::isfinite(cap_lo) && std::isfinite(cap_hi) &&
                      std::fabs(cap_lo - cap_hi) <=
                          1e-9 * std::max(cap_lo, cap_hi));
  if (equal) return {w, v_bar};
  // cap the deeper side at v_bar
  Interval dom = w.domain();
  auto f = [&w, v_bar](double x) { return w.v(x) - v_bar; };
  if (cap_hi > v_bar) {
    auto br = walk_to_sign_change(f, 0.0, +1.0, 0.25, dom.hi);
    if (!br) throw NotACenteredWell("centered_well: cannot locate upper cap");
    dom.hi = brent(f, *br);
  } else {
    auto br = walk_to_sign_change(f, 0.0, -1.0, 0.25, dom.lo);
    if (!br) throw NotACenteredWell("centered_well: cannot locate lower cap");
    dom.lo = brent(f, *br);
  }
  return {restricted_potential(w, dom), v_bar};
}

UrabeMap::UrabeMap(Potential1D centered, double v_bar)
    : p_(std::move(centered)), v_bar_(v_bar) {
  const double ddv0 = p_.ddv(0.0);
  if (!(ddv0 > 0.0))
    throw NotACenteredWell("forward_map: V''(0) must be positive");
  omega0_ = std::sqrt(ddv0);
}

double UrabeMap::X(double x) const {
  if (x == 0.0) return 0.0;
  const double v = p_.v(x);
  if (!(v >= 0.0))
    throw NotACenteredWell("forward_map: V < 0 at x=" + format_double(x));
  return (x > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0 * v);
}

double UrabeMap::x_of_X(double Xv) const {
  if (Xv == 0.0) return 0.0;
  if (std::isfinite(v_bar_) && std::fabs(Xv) >= std::sqrt(2.0 * v_bar_))
    throw DomainExceeded("x_of_X: |X| beyond sqrt(2*v_bar)");
  const double dir = Xv > 0.0 ? 1.0 : -1.0;
  auto g = [this, Xv](double x) { return X(x) - Xv; };
  const double edge = dir > 0.0 ? p_.domain().hi : p_.domain().lo;
  const double step0 = std::fabs(Xv) / omega0_;
  auto br = walk_to_sign_change(g, 0.0, dir, std::max(step0, 1e-12), edge);
  if (!br)
    throw DomainExceeded("x_of_X: X=" + format_double(Xv) +
                         " not attained inside the domain");
  auto fdf = [this, Xv](double x) {
    const PotentialValues pv = p_.eval(x);
    const double Xx = (x > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0 * pv.v);
    // dX/dx = V'/X away from 0
    const double d = (Xx != 0.0) ? pv.dv / Xx : omega0_;
    return std::make_pair(Xx - Xv, d);
  };
  return newton_bracketed(fdf, *br, 0.5 * (br->a + br->b), 0.0, 2.0 * kEps);
}

double UrabeMap::omega(double Xv) const {
  if (std::fabs(Xv) < 1e-9) return omega0_;
  const double x = x_of_X(Xv);
  return p_.dv(x) / Xv;
}

UrabeMap forward_map(const Potential1D& centered) {
  const Interval dom = centered.domain();
  if (!dom.contains(0.0))
    throw NotACenteredWell("forward_map: domain must contain 0");
  const PotentialValues at0 = centered.eval(0.0);
  if (std::fabs(at0.v) > 1e-10 || std::fabs(at0.dv) > 1e-8)
    throw NotACenteredWell(
        "forward_map: need V(0)=V'(0)=0 (translate the center first); got V=" +
        format_double(at0.v) + ", V'=" + format_double(at0.dv));
  // sampled sign condition x V'(x) > 0
  for (int side = 0; side < 2; ++side) {
    const double dir = side == 0 ? 1.0 : -1.0;
    const double edge = dir > 0.0 ? dom.hi : dom.lo;
    const double reach =
        std::isfinite(edge) ? 0.999 * std::fabs(edge) : 1e3;
    for (int k = 0; k < 40; ++k) {
      const double x = dir * reach * std::pow(0.7, k);
      if (!dom.contains(x) || x == 0.0) continue;
      const double dv = centered.dv(x);
      if (!(x * dv > 0.0))
        throw NotACenteredWell("forward_map: x*V'(x) <= 0 at x=" +
                               format_double(x));
    }
  }
  const double cap_lo = cap_limit(centered, false);
  const double cap_hi = cap_limit(centered, true);
  return UrabeMap(centered, std::min(cap_lo, cap_hi));
}

UrabeMap forward_map_at(const Potential1D& p, double x_star) {
  CenteredWell well = centered_well(p, x_star);
  UrabeMap map(well.potential, well.v_bar);
  return map;
}

// --- UrabeData ---------------------------------------------------------------

UrabeData::UrabeData(double T, double v_bar, CubicHermite S, Provenance prov,
                     double odd_defect)
    : T_(T), v_bar_(v_bar), spline_(std::move(S)), provenance_(prov),
      odd_defect_(odd_defect) {
  if (!(T_ > 0.0)) throw InvalidArgument("UrabeData: T must be positive");
}

UrabeData UrabeData::from_samples(double T, double v_bar,
                                  std::vector<double> X, std::vector<double> S,
                                  std::vector<double> slopes) {
  if (X.size() != S.size() || (!slopes.empty() && slopes.size() != X.size()))
    throw InvalidArgument("UrabeData::from_samples: size mismatch");
  bool has_zero = false;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i] == 0.0) {
      has_zero = true;
      if (std::fabs(S[i]) > 1e-12)
        throw InvalidArgument("UrabeData: S(0) must be 0");
    }
  }
  if (!has_zero)
    throw InvalidArgument("UrabeData: samples must include a knot at X=0");
  CubicHermite sp = slopes.empty()
                        ? CubicHermite::pchip(std::move(X), std::move(S))
                        : CubicHermite::with_derivatives(
                              std::move(X), std::move(S), std::move(slopes));
  // odd defect on the sampled grid (only pairs present in range)
  double defect = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double xi = sp.knots()[i];
    if (xi <= 0.0 || -xi < sp.x_front()) continue;
    defect = std::max(defect, std::fabs(sp.values()[i] + sp.eval(-xi)));
  }
  return UrabeData(T, v_bar, std::move(sp), Provenance::kUserSupplied, defect);
}

double UrabeData::sup_abs_S() const {
  double m = 0.0;
  for (double v : spline_.values()) m = std::max(m, std::fabs(v));
  return m;
}

UrabeData extract_S(const Potential1D& centered, double T,
                    const std::vector<double>& x_grid) {
  if (!(T > 0.0)) throw InvalidArgument("extract_S: T must be positive");
  UrabeMap map = forward_map(centered);
  const double wT = 2.0 * kPi / T;

  struct Node {
    double X, S, dS;
  };
  std::vector<Node> nodes;
  nodes.reserve(x_grid.size() + 1);
  auto sample_at = [&](double x) -> Node {
    const PotentialValues pv = centered.eval(x);
    const double Xv = (x > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0 * pv.v);
    const double S = -1.0 + wT * Xv / pv.dv;
    // dS/dX = (2*pi/T) (V'^2 - 2 V V'') / V'^3
    const double dS =
        wT * (pv.dv * pv.dv - 2.0 * pv.v * pv.ddv) / (pv.dv * pv.dv * pv.dv);
    return {Xv, S, dS};
  };
  for (double x : x_grid) {
    if (x == 0.0) continue;
    if (!centered.domain().contains(x))
      throw DomainError("extract_S: grid point outside domain");
    nodes.push_back(sample_at(x));
  }
  if (nodes.size() < 3)
    throw InsufficientSamples("extract_S: need at least 3 nonzero grid points");
  nodes.push_back({0.0, 0.0, 0.0});
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.X < b.X; });
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](const Node& a, const Node& b) {
                            return a.X == b.X;
                          }),
              nodes.end());

  for (const Node& n : nodes)
    if (std::fabs(n.S) >= 1.0)
      throw BoundViolation(
          "extract_S: |S| >= 1 at X=" + format_double(n.X) + " (S=" +
          format_double(n.S) +
          "); the potential is not T-isochronous or T is wrong");

  // derivative at the appended origin node: symmetric difference
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].X == 0.0) i0 = i;
  if (i0 > 0 && i0 + 1 < nodes.size())
    nodes[i0].dS = (nodes[i0 + 1].S - nodes[i0 - 1].S) /
                   (nodes[i0 + 1].X - nodes[i0 - 1].X);

  std::vector<double> X(nodes.size()), S(nodes.size()), dS(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    X[i] = nodes[i].X;
    S[i] = nodes[i].S;
    dS[i] = nodes[i].dS;
  }

  // oddness diagnostic through the inverse map
  double defect = 0.0;
  for (const Node& n : nodes) {
    if (n.X <= 0.0) continue;
    try {
      const double xm = map.x_of_X(-n.X);
      const Node m = sample_at(xm);
      defect = std::max(defect, std::fabs(n.S + m.S));
    } catch (const DomainExceeded&) {
      continue;  // asymmetric sampled range
    }
  }

  CubicHermite sp = CubicHermite::with_derivatives(std::move(X), std::move(S),
                                                   std::move(dS));
  return UrabeData(T, map.v_bar(), std::move(sp), Provenance::kExtracted,
                   defect);
}

std::vector<double> extraction_grid(const UrabeMap& map, double X_max, int n) {
  if (n < 4) throw InvalidArgument("extraction_grid: n too small");
  std::vector<double> xs;
  xs.reserve(2 * n);
  for (int j = 1; j <= n; ++j) {
    // graded toward the cap: spacing shrinks like cos near X_max
    const double Xj = X_max * std::sin(0.5 * kPi * j / n);
    for (double s : {-1.0, 1.0}) {
      try {
        xs.push_back(map.x_of_X(s * Xj));
      } catch (const DomainExceeded&) {
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

MembershipVerdict urabe_membership(const std::function<double(double)>& u,
                                   Interval I, double tol, double x_min) {
  if (!I.contains(0.0))
    throw InsufficientSamples("urabe_membership: interval must contain 0");
  const double reach = std::min({1.0, I.hi * 0.45, -I.lo * 0.45});
  if (!(reach > x_min * 4.0))
    throw InsufficientSamples("urabe_membership: interval too small around 0");

  MembershipVerdict v;
  v.u_at_zero = u(0.0);

  double gap_first = 0.0, gap_last = 0.0;
  double xu_first = 0.0, xu_last = 0.0;
  int count = 0;
  for (double x = reach; x >= x_min; x *= 0.5) {
    const double delta = 0.25 * x;
    double xu = 0.0, gap = 0.0;
    for (double s : {-1.0, 1.0}) {
      const double xs = s * x;
      const double du = (u(xs + delta) - u(xs - delta)) / (2.0 * delta);
      xu = std::max(xu, std::fabs(xs * du));
      gap = std::max(gap, std::fabs(u(xs) - v.u_at_zero));
    }
    v.grid.push_back(x);
    v.xu_profile.push_back(xu);
    if (count == 0) {
      gap_first = gap;
      xu_first = xu;
    }
    gap_last = gap;
    xu_last = xu;
    ++count;
  }
  if (count < 6)
    throw InsufficientSamples("urabe_membership: fewer than 6 geometric levels");
  v.final_xu = xu_last;
  v.final_gap = gap_last;

  const bool zero_ok = std::fabs(v.u_at_zero) <= tol;
  const bool continuous = gap_last <= std::max(tol, 0.02 * gap_first);
  const bool xu_ok = xu_last <= tol && xu_last <= 1.1 * std::max(xu_first, tol);
  v.member = zero_ok && continuous && xu_ok;
  return v;
}

double circular_average(const std::function<double(double)>& f, double r,
                        int m, double v_bar) {
  if (m < 16) throw InvalidArgument("circular_average: m must be >= 16");
  if (std::isfinite(v_bar) && std::fabs(r) >= std::sqrt(2.0 * v_bar))
    throw DomainExceeded("circular_average: |r| >= sqrt(2*v_bar)");
  return periodic_trapezoid([&f, r](double th) { return f(r * std::cos(th)); },
                            m);
}

AveragesVerdict isochronicity_by_averages(const Potential1D& centered,
                                          const std::vector<double>& radii,
                                          double rel_tol, int m) {
  UrabeMap map = forward_map(centered);
  AveragesVerdict out;
  out.reference_T = 2.0 * kPi / map.omega0();
  auto inv_omega = [&map](double X) { return 1.0 / map.omega(X); };
  auto tau_even = [&map, &out](double X) {
    const double u = 1.0 / map.omega(X) - out.reference_T / (2.0 * kPi);
    const double um = 1.0 / map.omega(-X) - out.reference_T / (2.0 * kPi);
    return (kPi / out.reference_T) * (u + um);
  };
  for (double r : radii) {
    out.radii.push_back(r);
    out.theta.push_back(circular_average(inv_omega, r, m, map.v_bar()));
    out.tau_even.push_back(circular_average(tau_even, r, m, map.v_bar()));
  }
  double dev = 0.0;
  for (double th : out.theta)
    dev = std::max(dev, std::fabs(th - out.reference_T) / out.reference_T);
  out.max_rel_deviation = dev;
  out.isochronous = dev <= rel_tol;
  return out;
}

Potential1D reconstruct_potential(const UrabeData& s,
                                  const ReconstructOptions& opts) {
  const double T = s.T();
  for (std::size_t i = 0; i < s.spline().size(); ++i)
    if (std::fabs(s.spline().values()[i]) >= 1.0 - 1e-14)
      throw StepCollapse("reconstruct_potential: sampled |S| reaches 1 at X=" +
                         format_double(s.spline().knots()[i]));

  const double j_hi = std::isfinite(s.v_bar())
                          ? std::sqrt(2.0 * s.v_bar())
                          : kInf;
  double X_stop_pos = std::min(s.X_max(), j_hi);
  double X_stop_neg = std::max(s.X_min(), -j_hi);
  if (!std::isfinite(s.v_bar())) {
    X_stop_pos = std::min(X_stop_pos, opts.x_cap);
    X_stop_neg = std::max(X_stop_neg, -opts.x_cap);
  }
  if (!(X_stop_pos > 0.0) || !(X_stop_neg < 0.0))
    throw InvalidArgument("reconstruct_potential: empty X range");

  const double wT = 2.0 * kPi / T;
  auto G = [&s, wT](double X) {
    const double Xc = std::clamp(X, s.X_min(), s.X_max());
    const double den = 1.0 + s.S(Xc);
    if (den < 1e-12)
      throw StepCollapse("reconstruct_potential: 1+S(X) collapsed at X=" +
                         format_double(Xc));
    return wT / den;
  };
  Rhs rhs = [&G](double, const double* y, double* dy) { dy[0] = G(y[0]); };

  OdeOptions ode;
  ode.rtol = opts.ode_rtol;
  ode.atol = opts.ode_atol;

  auto integrate_until = [&](double X_target, double direction) {
    const double y0[1] = {0.0};
    // x stays below (T/2pi) * 2 * |X_target| since dX/dx >= (pi/T)
    const double x_bound = direction * (std::fabs(X_target) * T / kPi + 1.0);
    StepObserver obs = [X_target](const DenseStep&, const double* y, double) {
      const bool reached =
          X_target > 0.0 ? (y[0] >= X_target) : (y[0] <= X_target);
      return reached ? StepControl::kStop : StepControl::kContinue;
    };
    DenseSolution sol = integrate_ode(rhs, std::span<const double>(y0, 1), 0.0,
                                      x_bound, ode, obs);
    // locate the exact crossing in the last step and truncate there
    const double t_end = sol.t_end();
    const double X_end = sol.eval(t_end, 0);
    const bool reached = X_target > 0.0 ? X_end >= X_target : X_end <= X_target;
    if (reached && !sol.steps().empty()) {
      const double t0 = sol.steps().back().t0;
      auto g = [&sol, X_target](double t) { return sol.eval(t, 0) - X_target; };
      const double g0 = g(t0), g1 = g(t_end);
      if ((g0 > 0.0) != (g1 > 0.0)) {
        const double tc = brent(g, Bracket{std::min(t0, t_end),
                                           std::max(t0, t_end),
                                           t0 < t_end ? g0 : g1,
                                           t0 < t_end ? g1 : g0},
                                0.0, 8.0 * kEps);
        sol.truncate_at(tc);
      }
    }
    return sol;
  };

  auto fwd = std::make_shared<DenseSolution>(integrate_until(X_stop_pos, +1.0));
  auto bwd = std::make_shared<DenseSolution>(integrate_until(X_stop_neg, -1.0));

  const double beta = fwd->t_end();
  const double alpha = bwd->t_end();
  auto spline = std::make_shared<CubicHermite>(s.spline());

  auto eval = [fwd, bwd, spline, wT](double x) {
    const double X = (x >= 0.0) ? fwd->eval(x, 0) : bwd->eval(x, 0);
    const double Xc = std::clamp(X, spline->x_front(), spline->x_back());
    const double Sv = spline->eval(Xc);
    const double dSv = spline->deriv(Xc);
    const double g = wT / (1.0 + Sv);
    const double v = 0.5 * X * X;
    const double dv = X * g;
    const double ddv = g * g * (1.0 - X * dSv / (1.0 + Sv));
    return PotentialValues{v, dv, ddv};
  };
  return Potential1D(Interval{alpha, beta}, PotentialKind::kCustom,
                     "reconstructed from S (T=" + format_double(T) + ")",
                     eval);
}

EndpointDiagnostic endpoint_diagnostic(const Potential1D& centered, double T) {
  auto g_abs = [&centered](double x) {
    const PotentialValues pv = centered.eval(x);
    return std::sqrt(2.0 * std::max(pv.v, 0.0)) / std::fabs(pv.dv);
  };
  EndpointDiagnostic d;
  d.at_alpha = limit_estimate(
      approach_sequence(g_abs, centered.domain(), /*to_upper=*/false));
  d.at_beta = limit_estimate(
      approach_sequence(g_abs, centered.domain(), /*to_upper=*/true));
  d.cross_sum_1 = d.at_alpha.sup_est + d.at_beta.inf_est;
  d.cross_sum_2 = d.at_alpha.inf_est + d.at_beta.sup_est;
  d.expected = T / kPi;
  return d;
}

double s_integral_identity(const UrabeData& s, const UrabeMap& map,
                           double x_probe) {
  if (x_probe == 0.0) return 0.0;
  const double Xp = map.X(x_probe);
  const double integral = Xp + s.spline().integral(0.0, Xp);
  return std::fabs(integral - (2.0 * kPi / s.T()) * x_probe);
}

}  // namespace isolab
