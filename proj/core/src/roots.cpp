#include "isolab/roots.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace isolab {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double brent(const Fn1& f, Bracket br, double xtol_abs, double xtol_rel,
             int max_iter) {
  double a = br.a, b = br.b, fa = br.fa, fb = br.fb;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw InvalidArgument("brent: endpoints do not bracket a root");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 0.5 * (xtol_abs + xtol_rel * std::fabs(b));
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic / secant
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

std::optional<Bracket> walk_to_sign_change(const Fn1& f, double from,
                                           double towards_direction,
                                           double initial_step,
                                           double domain_edge, double growth,
                                           int max_steps) {
  const double dir = towards_direction >= 0.0 ? 1.0 : -1.0;
  double x_prev = from;
  double f_prev = f(from);
  if (f_prev == 0.0) return Bracket{from, from, 0.0, 0.0};
  double step = initial_step;
  bool edge_mode = false;
  double x = from;
  for (int i = 0; i < max_steps; ++i) {
    double x_next;
    if (!edge_mode) {
      x_next = x + dir * step;
      const bool past_edge = std::isfinite(domain_edge) &&
                             (dir > 0.0 ? x_next >= domain_edge
                                        : x_next <= domain_edge);
      if (past_edge) {
        edge_mode = true;
        x_next = 0.5 * (x + domain_edge);
      } else {
        step *= growth;
      }
    } else {
      x_next = 0.5 * (x + domain_edge);
      if (x_next == x || x_next == domain_edge) return std::nullopt;
    }
    double f_next;
    try {
      f_next = f(x_next);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (!std::isfinite(f_next)) return std::nullopt;
    if (f_next == 0.0 || (f_prev > 0.0) != (f_next > 0.0)) {
      double lo = std::min(x_prev, x_next), hi = std::max(x_prev, x_next);
      double flo = lo == x_prev ? f_prev : f_next;
      double fhi = hi == x_next ? f_next : f_prev;
      return Bracket{lo, hi, flo, fhi};
    }
    x_prev = x_next;
    f_prev = f_next;
    x = x_next;
  }
  return std::nullopt;
}

double newton_bracketed(
    const std::function<std::pair<double, double>(double)>& fdf, Bracket br,
    double guess, double xtol_abs, double xtol_rel, int max_iter) {
  double lo = br.a, hi = br.b, flo = br.fa, fhi = br.fb;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw InvalidArgument("newton_bracketed: no sign change");
  double x = std::clamp(guess, lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    auto [fx, dfx] = fdf(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    const double tol = xtol_abs + xtol_rel * std::fabs(x);
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double x_next = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
    x = x_next;
  }
  return 0.5 * (lo + hi);
}

std::pair<long long, long long> best_rational(double x, long long qmax) {
  if (qmax < 1) throw InvalidArgument("best_rational: qmax must be >= 1");
  const bool neg = x < 0.0;
  double y = std::fabs(x);
  // Continued fraction convergents p_k/q_k; when the next denominator would
  // exceed qmax, try the largest admissible semiconvergent.
  long long p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
  long long p = static_cast<long long>(std::floor(y)), q = 1;
  double frac = y - std::floor(y);
  for (int it = 0; it < 64 && frac > 1e-18; ++it) {
    const double inv = 1.0 / frac;
    const double a_real = std::floor(inv);
    if (a_real > 1e17) break;
    long long a = static_cast<long long>(a_real);
    frac = inv - a_real;
    const long long q_next = a * q + q_prev;
    if (q_next > qmax) {
      // semiconvergent with the largest coefficient t <= a keeping q <= qmax
      const long long t = (qmax - q_prev) / q;
      if (t > 0) {
        const long long ps = t * p + p_prev;
        const long long qs = t * q + q_prev;
        // accept the semiconvergent only if it improves on p/q
        if (std::fabs(y - double(ps) / double(qs)) <
            std::fabs(y - double(p) / double(q))) {
          p = ps;
          q = qs;
        }
      }
      break;
    }
    const long long p_next = a * p + p_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  const long long g = std::gcd(p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return {neg ? -p : p, q};
}

}  // namespace isolab
