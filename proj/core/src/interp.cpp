#include "isolab/interp.hpp"

#include <algorithm>
#include <cmath>

namespace isolab {

namespace {

void check_knots(const std::vector<double>& x, std::size_t ny, std::size_t nd) {
  if (x.size() < 2) throw InvalidArgument("CubicHermite: need >= 2 knots");
  if (x.size() != ny || (nd != 0 && x.size() != nd))
    throw InvalidArgument("CubicHermite: size mismatch");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw InvalidArgument("CubicHermite: knots must be strictly increasing");
}

// PCHIP endpoint slope (non-centered three-point formula with clamping).
double pchip_end(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (m * d0 <= 0.0)
    m = 0.0;
  else if (d0 * d1 < 0.0 && std::fabs(m) > 3.0 * std::fabs(d0))
    m = 3.0 * d0;
  return m;
}

}  // namespace

CubicHermite CubicHermite::with_derivatives(std::vector<double> x,
                                            std::vector<double> y,
                                            std::vector<double> dy) {
  check_knots(x, y.size(), dy.size());
  CubicHermite s;
  s.x_ = std::move(x);
  s.y_ = std::move(y);
  s.m_ = std::move(dy);
  return s;
}

CubicHermite CubicHermite::pchip(std::vector<double> x, std::vector<double> y) {
  check_knots(x, y.size(), 0);
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
  } else {
    m[0] = pchip_end(h[0], h[1], d[0], d[1]);
    m[n - 1] = pchip_end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
        m[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }
  CubicHermite s;
  s.x_ = std::move(x);
  s.y_ = std::move(y);
  s.m_ = std::move(m);
  return s;
}

std::size_t CubicHermite::segment(double x) const {
  if (x_.empty()) throw InvalidArgument("CubicHermite: empty interpolant");
  if (x < x_.front() || x > x_.back())
    throw DomainError("CubicHermite: x=" + format_double(x) +
                      " outside [" + format_double(x_.front()) + ", " +
                      format_double(x_.back()) + "]");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) i = x_.size() - 2;
  return i;
}

double CubicHermite::eval(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
}

double CubicHermite::deriv(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * y_[i] / h + (3 * t2 - 4 * t + 1) * m_[i] +
         (-6 * t2 + 6 * t) * y_[i + 1] / h + (3 * t2 - 2 * t) * m_[i + 1];
}

double CubicHermite::second_deriv(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  return (12 * t - 6) * y_[i] / (h * h) + (6 * t - 4) * m_[i] / h +
         (-12 * t + 6) * y_[i + 1] / (h * h) + (6 * t - 2) * m_[i + 1] / h;
}

double CubicHermite::antiderivative_from_front(double x) const {
  // sum of full segments before x plus the partial segment
  double acc = 0.0;
  std::size_t i = segment(x);
  for (std::size_t k = 0; k < i; ++k) {
    const double h = x_[k + 1] - x_[k];
    acc += h * (0.5 * (y_[k] + y_[k + 1]) + h * (m_[k] - m_[k + 1]) / 12.0);
  }
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double H00 = 0.5 * t4 - t3 + t;
  const double H10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
  const double H01 = -0.5 * t4 + t3;
  const double H11 = 0.25 * t4 - t3 / 3.0;
  acc += h * (H00 * y_[i] + H10 * h * m_[i] + H01 * y_[i + 1] +
              H11 * h * m_[i + 1]);
  return acc;
}

double CubicHermite::integral(double a, double b) const {
  return antiderivative_from_front(b) - antiderivative_from_front(a);
}

}  // namespace isolab
