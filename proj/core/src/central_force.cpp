#include "isolab/central_force.hpp"

#include <cmath>
#include <memory>

#include "isolab/interp.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

double CentralForce::radial_potential(double r) const {
  if (r <= 0.0)
    throw DomainError("radial_potential: r must be positive");
  if (power_) {
    const double K = power_->K, q = power_->q;
    if (q == -1.0) return K * std::log(r);
    const double e = 2.0 * q + 2.0;
    return K * (std::pow(r, e) - 1.0) / e;
  }
  auto integrand = [this](double s) { return phi_(s * s) * s; };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  auto res = integrate_adaptive(integrand, 1.0, r, opts);
  if (!res.converged)
    throw SingularQuadratureFailure("radial_potential: quadrature failed");
  return res.value;
}

CentralForce power_law_force(double K, double q, double C) {
  return CentralForce(
      [K, q](double eta) { return K * std::pow(eta, q); },
      [K, q](double eta) { return K * q * std::pow(eta, q - 1.0); }, C,
      PowerLawForce{K, q},
      "phi(eta)=" + format_double(K) + "*eta^" + format_double(q));
}

CentralForce kepler_force(double mu, double C) {
  return power_law_force(mu, -1.5, C);
}

CentralForce hooke_force(double k, double C) {
  return power_law_force(k, 0.0, C);
}

Potential1D clairaut_reduce(const CentralForce& force,
                            const ClairautOptions& opts) {
  if (force.C() == 0.0)
    throw InvalidArgument("clairaut_reduce: angular momentum C must be nonzero");
  const double invC2 = 1.0 / (force.C() * force.C());

  if (force.power()) {
    const double K = force.power()->K, q = force.power()->q;
    const double e = -3.0 - 2.0 * q;  // Phi'(rho) = -K rho^e
    const std::string label =
        "reduced " + force.label() + " (C=" + format_double(force.C()) + ")";
    if (e == -1.0) {
      // Phi(rho) = -K ln rho
      return Potential1D(
          Interval::positive(), PotentialKind::kReducedFromForce, label,
          [K, invC2](double rho) {
            return PotentialValues{
                0.5 * rho * rho - invC2 * K * std::log(rho),
                rho - invC2 * K / rho, 1.0 + invC2 * K / (rho * rho)};
          });
    }
    return Potential1D(
        Interval::positive(), PotentialKind::kReducedFromForce, label,
        [K, e, invC2](double rho) {
          const double re = std::pow(rho, e);
          return PotentialValues{
              0.5 * rho * rho - invC2 * K * re * rho / (e + 1.0),
              rho - invC2 * K * re, 1.0 - invC2 * K * e * re / rho};
        });
  }

  // Generic force: Phi' and Phi'' are exact; Phi itself comes from a dense
  // Hermite table on a log grid, anchored at Phi(1) = 0.
  auto dPhi = [&force](double rho) {
    return -force.phi(1.0 / (rho * rho)) / (rho * rho * rho);
  };
  const int n = std::max(opts.nodes, 16);
  std::vector<double> rho(n), Phi(n), dP(n);
  const double lo = opts.rho_lo, hi = opts.rho_hi;
  if (!(lo > 0.0 && hi > lo))
    throw InvalidArgument("clairaut_reduce: bad rho range");
  const double lr = std::log(hi / lo);
  for (int i = 0; i < n; ++i) rho[i] = lo * std::exp(lr * i / (n - 1));
  for (int i = 0; i < n; ++i) dP[i] = dPhi(rho[i]);
  // cumulative integral from the anchor point rho = 1
  QuadratureOptions qopts;
  qopts.rel_tol = 1e-12;
  qopts.abs_tol = 1e-15;
  int anchor = 0;
  for (int i = 1; i < n; ++i)
    if (std::fabs(rho[i] - 1.0) < std::fabs(rho[anchor] - 1.0)) anchor = i;
  Phi[anchor] = integrate_adaptive(dPhi, 1.0, rho[anchor], qopts).value;
  for (int i = anchor + 1; i < n; ++i)
    Phi[i] = Phi[i - 1] + integrate_adaptive(dPhi, rho[i - 1], rho[i], qopts).value;
  for (int i = anchor - 1; i >= 0; --i)
    Phi[i] = Phi[i + 1] - integrate_adaptive(dPhi, rho[i], rho[i + 1], qopts).value;
  auto table = std::make_shared<CubicHermite>(
      CubicHermite::with_derivatives(std::move(rho), std::move(Phi), std::move(dP)));

  return Potential1D(
      Interval{lo, hi}, PotentialKind::kReducedFromForce,
      "reduced " + force.label() + " (C=" + format_double(force.C()) + ")",
      [table, fc = force, invC2](double rho) {
        const double r2 = rho * rho;
        const double eta = 1.0 / r2;
        const double f = fc.phi(eta);
        const double df = fc.dphi(eta);
        const double dPhi_v = -f / (r2 * rho);
        // Phi'' = 3 rho^-4 phi + 2 rho^-6 phi'
        const double ddPhi_v = 3.0 * f / (r2 * r2) + 2.0 * df / (r2 * r2 * r2);
        return PotentialValues{0.5 * r2 + invC2 * table->eval(rho),
                               rho + invC2 * dPhi_v, 1.0 + invC2 * ddPhi_v};
      });
}

}  // namespace isolab
