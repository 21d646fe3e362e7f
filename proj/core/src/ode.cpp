#include "isolab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace isolab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                 a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
// e = b5 - b4 (embedded error coefficients)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense output coefficients (Hairer dopri5.f)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

const DenseStep& DenseSolution::step_for(double t) const {
  if (steps_.empty()) throw InvalidArgument("DenseSolution: empty");
  const bool fwd = forward();
  // binary search over step end times
  std::size_t lo = 0, hi = steps_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const bool before = fwd ? (t <= steps_[mid].t1) : (t >= steps_[mid].t1);
    if (before)
      hi = mid;
    else
      lo = mid + 1;
  }
  return steps_[lo];
}

void DenseSolution::eval(double t, double* y) const {
  const DenseStep& s = step_for(t);
  const double h = s.t1 - s.t0;
  const double th = (h != 0.0) ? (t - s.t0) / h : 0.0;
  const double th1 = 1.0 - th;
  const int n = dim_;
  for (int i = 0; i < n; ++i) {
    const double* c = s.cont.data();
    y[i] = c[i] +
           th * (c[n + i] +
                 th1 * (c[2 * n + i] +
                        th * (c[3 * n + i] + th1 * c[4 * n + i])));
  }
}

double DenseSolution::eval(double t, int component) const {
  const DenseStep& s = step_for(t);
  const double h = s.t1 - s.t0;
  const double th = (h != 0.0) ? (t - s.t0) / h : 0.0;
  const double th1 = 1.0 - th;
  const int n = dim_;
  const double* c = s.cont.data();
  const int i = component;
  return c[i] + th * (c[n + i] +
                      th1 * (c[2 * n + i] +
                             th * (c[3 * n + i] + th1 * c[4 * n + i])));
}

void DenseSolution::truncate_at(double t) {
  const bool fwd = forward();
  while (!steps_.empty()) {
    DenseStep& last = steps_.back();
    const bool t_before_step = fwd ? (t <= last.t0) : (t >= last.t0);
    if (t_before_step && steps_.size() > 1) {
      steps_.pop_back();
      continue;
    }
    last.t1 = t;  // dense polynomial stays valid on the sub-interval
    break;
  }
}

DenseSolution integrate_ode(const Rhs& f, std::span<const double> y0, double t0,
                            double t1, const OdeOptions& opts,
                            const StepObserver& observer) {
  const int n = static_cast<int>(y0.size());
  DenseSolution sol(n, t0);
  if (t1 == t0) return sol;
  const double dir = (t1 > t0) ? 1.0 : -1.0;

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), yerr(n), ysti(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  f(t0, y.data(), k1.data());

  auto error_norm = [&](const std::vector<double>& ya,
                        const std::vector<double>& yb,
                        const std::vector<double>& err) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk =
          opts.atol + opts.rtol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
      const double r = err[i] / sk;
      sum += r * r;
    }
    return std::sqrt(sum / n);
  };

  // initial step size (simplified Hairer hinit)
  double h = opts.h_init;
  if (h == 0.0) {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk = opts.atol + opts.rtol * std::fabs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h0 = (dnf <= 1e-10 || dny <= 1e-10)
                    ? 1e-6
                    : 0.01 * std::sqrt(dny / dnf);
    h0 = std::min(h0, std::fabs(t1 - t0));
    std::vector<double> y1t(n), f1t(n);
    for (int i = 0; i < n; ++i) y1t[i] = y[i] + dir * h0 * k1[i];
    f(t0 + dir * h0, y1t.data(), f1t.data());
    double der2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk = opts.atol + opts.rtol * std::fabs(y[i]);
      const double r = (f1t[i] - k1[i]) / sk;
      der2 += r * r;
    }
    der2 = std::sqrt(der2) / h0;
    const double der12 = std::max(der2, std::sqrt(dnf));
    double h1 = (der12 <= 1e-15)
                    ? std::max(1e-6, h0 * 1e-3)
                    : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h0, h1, std::fabs(t1 - t0), opts.h_max});
  }
  h = std::min(std::fabs(h), opts.h_max) * dir;

  double t = t0;
  long nsteps = 0;
  bool last = false;
  while (true) {
    if (++nsteps > opts.max_steps)
      throw StepFailure("integrate_ode: max step count exceeded at t=" +
                        format_double(t));
    if (std::fabs(h) <= std::fabs(t) * 4.0 * kEps + 1e-300)
      throw StepFailure("integrate_ode: step size collapsed at t=" +
                        format_double(t));
    if ((t + h - t1) * dir > 0.0) {
      h = t1 - t;
      last = true;
    } else {
      last = false;
    }

    const double hh = h;
    for (int i = 0; i < n; ++i) ysti[i] = y[i] + hh * a21 * k1[i];
    f(t + c2 * hh, ysti.data(), k2.data());
    for (int i = 0; i < n; ++i)
      ysti[i] = y[i] + hh * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hh, ysti.data(), k3.data());
    for (int i = 0; i < n; ++i)
      ysti[i] = y[i] + hh * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hh, ysti.data(), k4.data());
    for (int i = 0; i < n; ++i)
      ysti[i] = y[i] + hh * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                             a54 * k4[i]);
    f(t + c5 * hh, ysti.data(), k5.data());
    for (int i = 0; i < n; ++i)
      ysti[i] = y[i] + hh * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    f(t + hh, ysti.data(), k6.data());
    for (int i = 0; i < n; ++i)
      ynew[i] = y[i] + hh * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                             a75 * k5[i] + a76 * k6[i]);
    f(t + hh, ynew.data(), k7.data());
    for (int i = 0; i < n; ++i)
      yerr[i] = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);

    const double err = error_norm(y, ynew, yerr);
    if (err <= 1.0) {
      // accept: build dense coefficients
      DenseStep step;
      step.t0 = t;
      step.t1 = t + hh;
      step.cont.resize(5 * n);
      for (int i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = hh * k1[i] - ydiff;
        step.cont[i] = y[i];
        step.cont[n + i] = ydiff;
        step.cont[2 * n + i] = bspl;
        step.cont[3 * n + i] = ydiff - hh * k7[i] - bspl;
        step.cont[4 * n + i] =
            hh * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                  d6 * k6[i] + d7 * k7[i]);
      }
      t += hh;
      std::swap(y, ynew);
      std::swap(k1, k7);  // FSAL
      sol.push_step(std::move(step));
      if (observer &&
          observer(sol.steps().back(), y.data(), t) == StepControl::kStop)
        return sol;
      if (last) return sol;
      double fac = 0.9 * std::pow(err > 1e-30 ? err : 1e-30, -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      h = dir * std::min(std::fabs(hh) * fac, opts.h_max);
    } else {
      double fac = std::max(0.9 * std::pow(err, -0.2), 0.1);
      h = hh * fac;
    }
  }
}

}  // namespace isolab
