#ifndef ISOLAB_ODE_HPP
#define ISOLAB_ODE_HPP

#include <functional>
#include <span>
#include <vector>

#include "isolab/common.hpp"

namespace isolab {

/// Right-hand side of y' = f(t, y).
using Rhs = std::function<void(double t, const double* y, double* dydt)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 -> automatic
  double h_max = kInf;
  long max_steps = 10'000'000;
};

/// One accepted step with the 4th-order continuous extension (5*dim
/// coefficients, Hairer's rcont layout).
struct DenseStep {
  double t0, t1;
  std::vector<double> cont;
};

/// Dense-output trajectory. Steps are stored in integration order; t may
/// run forward or backward.
class DenseSolution {
 public:
  DenseSolution(int dim, double t_begin) : dim_(dim), t_begin_(t_begin) {}

  int dim() const { return dim_; }
  double t_begin() const { return t_begin_; }
  double t_end() const { return steps_.empty() ? t_begin_ : steps_.back().t1; }
  bool forward() const { return t_end() >= t_begin(); }
  const std::vector<DenseStep>& steps() const { return steps_; }

  void eval(double t, double* y) const;
  double eval(double t, int component) const;

  /// Clamp the trajectory at an interior time (used after event location).
  void truncate_at(double t);

  void push_step(DenseStep s) { steps_.push_back(std::move(s)); }

 private:
  int dim_;
  double t_begin_;
  std::vector<DenseStep> steps_;
  const DenseStep& step_for(double t) const;
};

enum class StepControl { kContinue, kStop };

/// Called after each accepted step with the step record and the new state.
using StepObserver =
    std::function<StepControl(const DenseStep& step, const double* y, double t)>;

/// Adaptive Dormand-Prince 5(4) with dense output. Integrates from t0 to t1
/// (either direction); the observer may stop the run early. Throws
/// StepFailure when the step size collapses or max_steps is exhausted.
DenseSolution integrate_ode(const Rhs& f, std::span<const double> y0, double t0,
                            double t1, const OdeOptions& opts = {},
                            const StepObserver& observer = nullptr);

}  // namespace isolab

#endif  // ISOLAB_ODE_HPP
