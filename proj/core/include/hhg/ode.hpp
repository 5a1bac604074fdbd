#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hhg/types.hpp"

namespace hhg {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;     ///< cycles
  double norm_guard = 1e-4;  ///< abort when |norm - 1| exceeds this
  std::size_t max_steps = 50'000'000;

  /// Throws InvalidArgument on non-positive tolerances, step or guard.
  void validate() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rhs_evaluations = 0;
};

/// dy/dt written into dydt; t in cycles.
using OdeRhs = std::function<void(double t, const CVector& y, CVector& dydt)>;
using OdeObserver = std::function<void(std::size_t index, double t, const CVector& y)>;

/// Adaptive Dormand-Prince 5(4) integration with dense output.
///
/// `sample_times` must be ascending and >= t0. The observer is called once per sample, in
/// order, with the interpolated state. Returns the state at the last sample.
/// Throws StepUnderflow when the step budget runs out or the controller gives up, and
/// NonFiniteError when the derivative turns non-finite.
CVector integrate_sampled(const OdeRhs& rhs, const CVector& y0, double t0, const std::vector<double>& sample_times,
                          const IntegratorConfig& cfg, const OdeObserver& observer, IntegratorStats* stats = nullptr);

}  // namespace hhg
