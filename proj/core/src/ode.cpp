#include "hhg/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "hhg/errors.hpp"

namespace hhg {

namespace odeint = boost::numeric::odeint;

namespace {

using OdeState = std::vector<cplx>;

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");
  if (!(max_step > 0.0)) throw InvalidArgument("integrator max_step must be positive");
  if (!(norm_guard > 0.0)) throw InvalidArgument("norm_guard must be positive");
  if (max_steps == 0) throw InvalidArgument("max_steps must be positive");
}

CVector integrate_sampled(const OdeRhs& rhs, const CVector& y0, double t0, const std::vector<double>& sample_times,
                          const IntegratorConfig& cfg, const OdeObserver& observer, IntegratorStats* stats) {
  cfg.validate();
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw InvalidArgument("sample times must be ascending");
  if (!sample_times.empty() && sample_times.front() < t0) throw InvalidArgument("sample times precede t0");

  const auto n = y0.size();
  IntegratorStats local;
  CVector yin(n);
  CVector dout(n);
  auto system = [&](const OdeState& x, OdeState& dxdt, double t) {
    yin = Eigen::Map<const CVector>(x.data(), n);
    rhs(t, yin, dout);
    ++local.rhs_evaluations;
    if (!dout.allFinite()) throw NonFiniteError("non-finite derivative at t=" + format_number(t) + " cycles");
    Eigen::Map<CVector>(dxdt.data(), n) = dout;
  };

  auto stepper = odeint::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_step, odeint::runge_kutta_dopri5<OdeState>());
  OdeState x(y0.data(), y0.data() + n);
  OdeState buf(static_cast<std::size_t>(n));
  stepper.initialize(x, t0, std::min(cfg.max_step, 1e-3));

  CVector y = y0;
  try {
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
      const double ts = sample_times[i];
      if (ts == t0) {
        y = y0;
      } else {
        while (stepper.current_time() < ts) {
          stepper.do_step(system);
          if (++local.steps > cfg.max_steps)
            throw StepUnderflow("step budget of " + std::to_string(cfg.max_steps) + " exhausted at t=" +
                                format_number(stepper.current_time()) + " cycles");
        }
        if (stepper.current_time() == ts) {
          const OdeState& cur = stepper.current_state();
          y = Eigen::Map<const CVector>(cur.data(), n);
        } else {
          stepper.calc_state(ts, buf);
          y = Eigen::Map<const CVector>(buf.data(), n);
        }
      }
      if (observer) observer(i, ts, y);
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw StepUnderflow(std::string("step size control failed: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw StepUnderflow(std::string("integrator made no progress: ") + e.what());
  }
  if (stats) *stats = local;
  return y;
}

}  // namespace hhg
