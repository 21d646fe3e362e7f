#ifndef ISOLAB_ROOTS_HPP
#define ISOLAB_ROOTS_HPP

#include <functional>
#include <optional>
#include <utility>

#include "isolab/common.hpp"

namespace isolab {

using Fn1 = std::function<double(double)>;

struct Bracket {
  double a, b;    // a < b
  double fa, fb;  // opposite signs (or one of them zero)
};

/// Brent's method on a sign-changing bracket. Converges to a root x with
/// bracket width below xtol_abs + xtol_rel*|x|.
double brent(const Fn1& f, Bracket br, double xtol_abs = 0.0,
             double xtol_rel = 4.0 * kEps, int max_iter = 200);

/// Walk outward from `from` in the direction of `towards` until f changes
/// sign, growing the step geometrically and halving into a finite domain
/// edge. Returns the first sign-change bracket, or nullopt if the domain
/// edge (or max_range) is reached first.
std::optional<Bracket> walk_to_sign_change(const Fn1& f, double from,
                                           double towards_direction,
                                           double initial_step,
                                           double domain_edge,
                                           double growth = 1.6,
                                           int max_steps = 400);

/// Derivative-accelerated bracketed solve: Newton steps guarded by the
/// bracket, bisection fallback. fdf returns (f, f').
double newton_bracketed(const std::function<std::pair<double, double>(double)>& fdf,
                        Bracket br, double guess, double xtol_abs = 0.0,
                        double xtol_rel = 4.0 * kEps, int max_iter = 200);

/// Best rational approximation p/q of x with q <= qmax (continued fractions,
/// including semiconvergents). q >= 1, gcd(p,q) = 1.
std::pair<long long, long long> best_rational(double x, long long qmax);

}  // namespace isolab

#endif  // ISOLAB_ROOTS_HPP
