#ifndef ISOLAB_INTERP_HPP
#define ISOLAB_INTERP_HPP

#include <vector>

#include "isolab/common.hpp"

namespace isolab {

/// Piecewise cubic Hermite interpolant on strictly increasing knots.
/// Slopes are either supplied exactly or estimated with the Fritsch-Carlson
/// (PCHIP) shape-preserving rule.
class CubicHermite {
 public:
  CubicHermite() = default;

  /// Exact nodal derivatives.
  static CubicHermite with_derivatives(std::vector<double> x,
                                       std::vector<double> y,
                                       std::vector<double> dy);

  /// PCHIP slope estimation from values alone.
  static CubicHermite pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  double deriv(double x) const;
  double second_deriv(double x) const;

  /// Exact integral of the piecewise cubic between a and b (both inside).
  double integral(double a, double b) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return m_; }

 private:
  std::vector<double> x_, y_, m_;
  std::size_t segment(double x) const;
  double antiderivative_from_front(double x) const;
};

}  // namespace isolab

#endif  // ISOLAB_INTERP_HPP
