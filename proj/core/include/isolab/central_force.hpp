#ifndef ISOLAB_CENTRAL_FORCE_HPP
#define ISOLAB_CENTRAL_FORCE_HPP

#include <functional>
#include <optional>
#include <string>

#include "isolab/potential.hpp"

namespace isolab {

/// phi(eta) = K * eta^q, eta = r^2. K > 0 is attractive in
/// xdd = -phi(r^2) x.
struct PowerLawForce {
  double K;
  double q;
};

/// Radial force law phi(eta) on (0, inf) plus the angular momentum C of the
/// motion under study. The planar equations are xdd = -phi(r^2) x,
/// ydd = -phi(r^2) y.
class CentralForce {
 public:
  CentralForce(std::function<double(double)> phi,
               std::function<double(double)> dphi, double C,
               std::optional<PowerLawForce> power, std::string label)
      : phi_(std::move(phi)), dphi_(std::move(dphi)), C_(C), power_(power),
        label_(std::move(label)) {}

  double phi(double eta) const { return phi_(eta); }
  double dphi(double eta) const { return dphi_(eta); }
  double C() const { return C_; }
  const std::optional<PowerLawForce>& power() const { return power_; }
  const std::string& label() const { return label_; }

  /// Same force law with a different angular momentum.
  CentralForce with_C(double C) const {
    return CentralForce(phi_, dphi_, C, power_, label_);
  }

  /// U(r) with U'(r) = phi(r^2)*r and U(1) = 0; closed form for power laws,
  /// quadrature otherwise. Enters orbit energies only through differences.
  double radial_potential(double r) const;

 private:
  std::function<double(double)> phi_, dphi_;
  double C_;
  std::optional<PowerLawForce> power_;
  std::string label_;
};

CentralForce power_law_force(double K, double q, double C);
CentralForce kepler_force(double mu, double C);  // phi(eta) = mu * eta^(-3/2)
CentralForce hooke_force(double k, double C);    // phi(eta) = k

struct ClairautOptions {
  // rho range and node count for the cumulative quadrature of Phi when the
  // force is not a tagged power law
  double rho_lo = 1e-3;
  double rho_hi = 1e3;
  int nodes = 2048;
};

/// Clairaut reduction rho = 1/r: returns V(rho) = rho^2/2 + (1/C^2)*Phi(rho)
/// with Phi'(rho) = -rho^{-3} phi(rho^{-2}). Closed form for power-law
/// forces; cumulative quadrature anchored at Phi(1) = 0 otherwise (V enters
/// the dynamics only through V' and differences).
Potential1D clairaut_reduce(const CentralForce& force,
                            const ClairautOptions& opts = {});

}  // namespace isolab

#endif  // ISOLAB_CENTRAL_FORCE_HPP
