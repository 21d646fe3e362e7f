#ifndef ISOLAB_QUADRATURE_HPP
#define ISOLAB_QUADRATURE_HPP

#include <functional>

#include "isolab/common.hpp"

namespace isolab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  long evals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_segments = 4000;
};

/// Adaptive Gauss-Kronrod 15(7) on a finite interval [a, b]. Bisects the
/// segment with the largest error estimate until the tolerance is met.
/// Throws SingularQuadratureFailure if the integrand is non-finite at a node.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureOptions& opts = {});

/// m-node trapezoid sum of a 2*pi-periodic function: (2*pi/m) * sum f(theta_k),
/// theta_k = 2*pi*k/m. Spectrally accurate for smooth periodic integrands.
double periodic_trapezoid(const std::function<double(double)>& f, int m);

}  // namespace isolab

#endif  // ISOLAB_QUADRATURE_HPP
