#include "isolab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "isolab/interp.hpp"
#include "isolab/roots.hpp"

namespace isolab {

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::kHarmonicForced: return "harmonic-forced";
    case PotentialKind::kPowerLaw: return "power-law";
    case PotentialKind::kLog: return "log";
    case PotentialKind::kErmakov: return "ermakov";
    case PotentialKind::kPlateau: return "plateau";
    case PotentialKind::kReducedFromForce: return "reduced-from-force";
    case PotentialKind::kCustom: return "custom";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::kCenterCandidate: return "center-candidate";
    case Stability::kDegenerate: return "degenerate";
    case Stability::kSaddle: return "saddle";
  }
  return "?";
}

Potential1D harmonic_potential() {
  return Potential1D(Interval::all(), PotentialKind::kHarmonicForced,
                     "harmonic", [](double x) {
                       return PotentialValues{0.5 * x * x, x, 1.0};
                     });
}

Potential1D harmonic_forced_potential(double c) {
  return Potential1D(Interval::all(), PotentialKind::kHarmonicForced,
                     "harmonic-forced(c=" + format_double(c) + ")",
                     [c](double x) {
                       return PotentialValues{0.5 * x * x + c * x, x + c, 1.0};
                     });
}

Potential1D power_law_potential(double a, double K, double lambda) {
  if (a == -1.0) return log_potential(K, lambda);
  const double lk = lambda * K;
  return Potential1D(
      Interval::positive(), PotentialKind::kPowerLaw,
      "power-law(a=" + format_double(a) + ", K=" + format_double(K) +
          ", lambda=" + format_double(lambda) + ")",
      [a, lk](double x) {
        const double xa = std::pow(x, a);
        return PotentialValues{0.5 * x * x + lk * xa * x / (a + 1.0),
                               x + lk * xa, 1.0 + lk * a * xa / x};
      });
}

Potential1D log_potential(double K, double lambda) {
  const double lk = lambda * K;
  return Potential1D(Interval::positive(), PotentialKind::kLog,
                     "log(K=" + format_double(K) + ", lambda=" +
                         format_double(lambda) + ")",
                     [lk](double x) {
                       return PotentialValues{0.5 * x * x + lk * std::log(x),
                                              x + lk / x, 1.0 - lk / (x * x)};
                     });
}

Potential1D ermakov_potential(double c) {
  return Potential1D(Interval::positive(), PotentialKind::kErmakov,
                     "ermakov(c=" + format_double(c) + ")", [c](double x) {
                       const double x2 = x * x;
                       return PotentialValues{0.5 * x2 + c / x2,
                                              x - 2.0 * c / (x2 * x),
                                              1.0 + 6.0 * c / (x2 * x2)};
                     });
}

Potential1D plateau_potential(double gamma, double Gamma) {
  if (!(gamma < Gamma))
    throw InvalidArgument("plateau_potential: need gamma < Gamma");
  return Potential1D(
      Interval::all(), PotentialKind::kPlateau,
      "plateau[" + format_double(gamma) + ", " + format_double(Gamma) + "]",
      [gamma, Gamma](double x) {
        if (x < gamma) {
          const double d = gamma - x;
          const double d2 = d * d;
          return PotentialValues{0.25 * d2 * d2, -d2 * d, 3.0 * d2};
        }
        if (x > Gamma) {
          const double d = x - Gamma;
          const double d2 = d * d;
          return PotentialValues{0.25 * d2 * d2, d2 * d, 3.0 * d2};
        }
        return PotentialValues{0.0, 0.0, 0.0};
      });
}

Potential1D potential_from_samples(std::vector<double> x, std::vector<double> v,
                                   std::vector<double> dv) {
  auto spline = std::make_shared<CubicHermite>(
      CubicHermite::with_derivatives(std::move(x), std::move(v), std::move(dv)));
  Interval dom{spline->x_front(), spline->x_back()};
  return Potential1D(dom, PotentialKind::kCustom, "table",
                     [spline](double xx) {
                       return PotentialValues{spline->eval(xx),
                                              spline->deriv(xx),
                                              spline->second_deriv(xx)};
                     });
}

Potential1D translated_potential(const Potential1D& p, double x_star) {
  const double v0 = p.v(x_star);
  Interval dom{p.domain().lo - x_star, p.domain().hi - x_star};
  return Potential1D(dom, p.kind(),
                     p.label() + " shifted by " + format_double(x_star),
                     [p, x_star, v0](double x) {
                       PotentialValues pv = p.eval(x + x_star);
                       pv.v -= v0;
                       return pv;
                     });
}

Potential1D restricted_potential(const Potential1D& p, Interval sub) {
  if (sub.lo < p.domain().lo || sub.hi > p.domain().hi)
    throw InvalidArgument("restricted_potential: sub-interval not contained");
  return Potential1D(sub, p.kind(), p.label(),
                     [p](double x) { return p.eval(x); });
}

// --- families ---------------------------------------------------------------

Potential1D PotentialFamily::materialize(double lambda) const {
  auto Phi = Phi_;
  auto phi = phi_;
  auto dphi = dphi_;
  return Potential1D(
      Interval::positive(), kind_,
      label_ + " @ lambda=" + format_double(lambda),
      [Phi, phi, dphi, lambda](double x) {
        return PotentialValues{0.5 * x * x + lambda * Phi(x),
                               x + lambda * phi(x), 1.0 + lambda * dphi(x)};
      });
}

PotentialFamily power_law_family(double a, double K) {
  if (a == -1.0) {
    return PotentialFamily(
        [K](double x) { return K * std::log(x); },
        [K](double x) { return K / x; },
        [K](double x) { return -K / (x * x); }, Interval::positive(),
        PotentialKind::kLog, "family phi=K/x (K=" + format_double(K) + ")");
  }
  return PotentialFamily(
      [a, K](double x) { return K * std::pow(x, a + 1.0) / (a + 1.0); },
      [a, K](double x) { return K * std::pow(x, a); },
      [a, K](double x) { return K * a * std::pow(x, a - 1.0); },
      Interval::positive(), PotentialKind::kPowerLaw,
      "family phi=K*x^a (a=" + format_double(a) + ", K=" + format_double(K) +
          ")");
}

PotentialFamily constant_force_family(double K) {
  return PotentialFamily([K](double x) { return K * x; },
                         [K](double) { return K; }, [](double) { return 0.0; },
                         Interval::positive(), PotentialKind::kHarmonicForced,
                         "family phi=K (K=" + format_double(K) + ")");
}

namespace {

// quintic smoothstep and its integral/derivative
double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d(double t) {
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}
double smoothstep5_int(double t) {  // int_0^t s5
  const double t3 = t * t * t;
  return t3 * t * (2.5 + t * (-3.0 + t));
}

struct StepRegion {
  double x0, x1;     // [x0, x1]
  double phi0;       // value at x0
  double dphi_total; // phi(x1) - phi(x0); 0 for plateaus
  double Phi0;       // cumulative integral of phi at x0
};

struct CounterexampleTable {
  std::vector<StepRegion> regions;  // contiguous, sorted
  double phi_left, phi_right;       // constant continuations
  double x_left, x_right;
  double Phi_left0;                 // Phi at x_left

  double phi(double x) const {
    if (x <= x_left) return phi_left;
    if (x >= x_right) return phi_right;
    const StepRegion& r = find(x);
    if (r.dphi_total == 0.0) return r.phi0;
    const double t = (x - r.x0) / (r.x1 - r.x0);
    return r.phi0 + r.dphi_total * smoothstep5(t);
  }
  double dphi(double x) const {
    if (x <= x_left || x >= x_right) return 0.0;
    const StepRegion& r = find(x);
    if (r.dphi_total == 0.0) return 0.0;
    const double w = r.x1 - r.x0;
    return r.dphi_total * smoothstep5_d((x - r.x0) / w) / w;
  }
  double Phi(double x) const {
    if (x <= x_left) return Phi_left0 + phi_left * (x - x_left);
    if (x >= x_right) {
      const StepRegion& last = regions.back();
      const double Phi_end =
          last.Phi0 + segment_integral(last, last.x1);
      return Phi_end + phi_right * (x - x_right);
    }
    const StepRegion& r = find(x);
    return r.Phi0 + segment_integral(r, x);
  }

 private:
  const StepRegion& find(double x) const {
    auto it = std::upper_bound(
        regions.begin(), regions.end(), x,
        [](double xx, const StepRegion& r) { return xx < r.x1; });
    if (it == regions.end()) return regions.back();
    return *it;
  }
  double segment_integral(const StepRegion& r, double x) const {
    const double w = r.x1 - r.x0;
    const double t = (x - r.x0) / w;
    return r.phi0 * (x - r.x0) + r.dphi_total * w * smoothstep5_int(t);
  }
};

}  // namespace

PotentialFamily counterexample_family(int n_min, int n_max) {
  if (n_min > n_max)
    throw InvalidArgument("counterexample_family: n_min > n_max");
  auto table = std::make_shared<CounterexampleTable>();
  double Phi_acc = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const double six_n = std::pow(6.0, n);
    const double val = -std::pow(3.0, n);
    StepRegion plateau{six_n, 2.0 * six_n, val, 0.0, Phi_acc};
    Phi_acc += val * six_n;  // integral over [6^n, 2*6^n]
    table->regions.push_back(plateau);
    if (n < n_max) {
      const double next = -std::pow(3.0, n + 1);
      StepRegion trans{2.0 * six_n, 6.0 * six_n, val, next - val, Phi_acc};
      const double w = trans.x1 - trans.x0;
      Phi_acc += val * w + (next - val) * w * smoothstep5_int(1.0);
      table->regions.push_back(trans);
    }
  }
  table->x_left = table->regions.front().x0;
  table->x_right = table->regions.back().x1;
  table->phi_left = table->regions.front().phi0;
  table->phi_right = -std::pow(3.0, n_max);
  table->Phi_left0 = 0.0;

  return PotentialFamily(
      [table](double x) { return table->Phi(x); },
      [table](double x) { return table->phi(x); },
      [table](double x) { return table->dphi(x); }, Interval::positive(),
      PotentialKind::kCustom,
      "counterexample family n in [" + std::to_string(n_min) + ", " +
          std::to_string(n_max) + "]");
}

// --- equilibria -------------------------------------------------------------

namespace {

constexpr double kDegenerateDdv = 1e-10;

Stability classify_ddv(double ddv) {
  if (ddv > kDegenerateDdv) return Stability::kCenterCandidate;
  if (ddv < -kDegenerateDdv) return Stability::kSaddle;
  return Stability::kDegenerate;
}

EquilibriumSet scan_for_roots(const std::function<double(double)>& g,
                              const std::function<double(double)>& gdd,
                              const std::vector<double>& seeds, double tol) {
  EquilibriumSet out;
  std::vector<double> candidates;
  double x_prev = 0.0, f_prev = 0.0;
  bool have_prev = false;
  for (double x : seeds) {
    double fx;
    try {
      fx = g(x);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(fx)) {
      out.warnings.push_back("non-finite V' at seed x=" + format_double(x) +
                             "; seed skipped");
      have_prev = false;
      continue;
    }
    if (std::fabs(fx) <= tol) candidates.push_back(x);
    if (have_prev && (f_prev > 0.0) != (fx > 0.0) && f_prev != 0.0 &&
        fx != 0.0) {
      const double root =
          brent(g, Bracket{x_prev, x, f_prev, fx}, tol * 1e-3, 4.0 * kEps);
      candidates.push_back(root);
    }
    x_prev = x;
    f_prev = fx;
    have_prev = true;
  }
  std::sort(candidates.begin(), candidates.end());
  for (double r : candidates) {
    if (std::fabs(g(r)) > tol) continue;
    if (!out.roots.empty() && r - out.roots.back().x <= 10.0 * tol) continue;
    const double ddv = gdd(r);
    out.roots.push_back({r, ddv, classify_ddv(ddv)});
  }
  return out;
}

}  // namespace

EquilibriumSet find_equilibria(const Potential1D& p, Interval scan, int n_seeds,
                               double tol) {
  if (n_seeds < 2) throw InvalidArgument("find_equilibria: n_seeds >= 2");
  if (scan.lo < p.domain().lo || scan.hi > p.domain().hi)
    throw InvalidArgument("find_equilibria: scan not inside potential domain");
  std::vector<double> seeds(n_seeds);
  const double w = scan.width();
  for (int i = 0; i < n_seeds; ++i)
    seeds[i] = scan.lo + w * (i + 0.5) / n_seeds;
  return scan_for_roots([&p](double x) { return p.dv(x); },
                        [&p](double x) { return p.ddv(x); }, seeds, tol);
}

std::optional<double> family_equilibrium(const PotentialFamily& f,
                                         double lambda, double tol,
                                         const FamilyScanOptions& scan) {
  if (!f.lambda_range().contains(lambda))
    throw InvalidArgument("family_equilibrium: lambda outside admissible range");
  std::vector<double> seeds(scan.n_seeds);
  const double ratio = std::log(scan.x_hi / scan.x_lo);
  for (int i = 0; i < scan.n_seeds; ++i)
    seeds[i] = scan.x_lo * std::exp(ratio * (i + 0.5) / scan.n_seeds);
  auto g = [&f, lambda](double x) { return x + lambda * f.phi(x); };
  auto gdd = [&f, lambda](double x) { return 1.0 + lambda * f.dphi(x); };
  EquilibriumSet set = scan_for_roots(g, gdd, seeds, tol);
  if (set.roots.empty()) return std::nullopt;
  if (set.roots.size() > 1) {
    std::vector<double> xs;
    for (const auto& r : set.roots) xs.push_back(r.x);
    throw MultipleEquilibria(
        "family '" + f.label() + "' has " + std::to_string(xs.size()) +
            " equilibria at lambda=" + format_double(lambda),
        std::move(xs));
  }
  return set.roots.front().x;
}

}  // namespace isolab
