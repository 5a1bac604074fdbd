#include <gtest/gtest.h>

#include <cmath>

#include "hhg/errors.hpp"
#include "hhg/ode.hpp"

namespace hhg {
namespace {

TEST(IntegrateSampled, HarmonicPhaseAtSamples) {
  const OdeRhs rhs = [](double, const CVector& y, CVector& dy) { dy = cplx(0.0, -kTwoPi) * y; };
  CVector y0(1);
  y0(0) = 1.0;
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(i * 0.0625);
  std::vector<cplx> seen;
  IntegratorStats stats;
  const CVector last = integrate_sampled(
      rhs, y0, 0.0, ts, {}, [&](std::size_t i, double t, const CVector& y) {
        EXPECT_EQ(t, ts[i]);
        seen.push_back(y(0));
      },
      &stats);
  ASSERT_EQ(seen.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    EXPECT_NEAR(std::abs(seen[i] - std::exp(cplx(0.0, -kTwoPi * ts[i]))), 0.0, 1e-9);
  EXPECT_EQ(last(0), seen.back());
  EXPECT_GT(stats.steps, 0u);
  EXPECT_GE(stats.rhs_evaluations, stats.steps);
}

TEST(IntegrateSampled, StepBudgetExhausted) {
  const OdeRhs rhs = [](double, const CVector& y, CVector& dy) { dy = cplx(0.0, -1000.0) * y; };
  CVector y0 = CVector::Ones(1);
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  EXPECT_THROW(integrate_sampled(rhs, y0, 0.0, {1.0}, cfg, [](std::size_t, double, const CVector&) {}), StepUnderflow);
}

TEST(IntegrateSampled, NonFiniteDerivative) {
  const OdeRhs rhs = [](double t, const CVector& y, CVector& dy) {
    dy = y;
    if (t > 0.5) dy(0) = NAN;
  };
  EXPECT_THROW(
      integrate_sampled(rhs, CVector::Ones(1), 0.0, {1.0}, {}, [](std::size_t, double, const CVector&) {}),
      NonFiniteError);
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

}  // namespace
}  // namespace hhg
