#include <gtest/gtest.h>

#include <cmath>

#include "hhg/errors.hpp"
#include "hhg/model.hpp"

namespace hhg {
namespace {

ModelParams params(double Omega) { return ModelParams{1.0, 2.2, Omega}; }

TEST(CyclePhase, IntegerCyclesAreExact) {
  for (double t : {0.0, 1.0, 5.0, 20.0, 1e6}) {
    const CyclePhase p = cycle_phase(t);
    EXPECT_EQ(p.e, cplx(1.0, 0.0)) << t;
    EXPECT_EQ(p.s, cplx(0.0, 0.0)) << t;
  }
}

TEST(CyclePhase, QuarterCycle) {
  const CyclePhase p = cycle_phase(0.25);
  EXPECT_NEAR(std::abs(p.e - cplx(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.s - cplx(1.0, 1.0)), 0.0, 1e-15);
  // Reduction keeps the phase of t + n.
  const CyclePhase q = cycle_phase(1000.25);
  EXPECT_NEAR(std::abs(q.e - p.e), 0.0, 1e-12);
}

TEST(EvolveLabel, MatchesClosedForm) {
  const ModelParams mp = params(0.3);
  const double g = mp.gamma();
  const cplx a(1.7, -0.4);
  for (double t : {0.1, 0.37, 0.5, 0.93, 2.61}) {
    const cplx e = std::exp(cplx(0.0, -kTwoPi * t));
    for (Branch b : kBranches) {
      const double sg = sigma_x_eigenvalue(b) * g;
      const cplx expect = sg + (a - sg) * e;
      const double delta = sg * (a - (a - sg) * e).imag();
      const BranchLabel l = evolve_label(a, b, mp, t);
      EXPECT_EQ(l.branch, b);
      EXPECT_NEAR(std::abs(l.alpha - expect), 0.0, 1e-13) << t;
      EXPECT_NEAR(std::remainder(l.delta - delta, kTwoPi), 0.0, 1e-13) << t;
    }
  }
}

TEST(EvolveLabel, ReturnsToStartEachCycle) {
  const ModelParams mp = params(-0.7);
  const cplx a(3.0e5, -2.0e5);
  for (Branch b : kBranches) {
    const BranchLabel l = evolve_label(a, b, mp, 3.0);
    EXPECT_EQ(l.alpha, a);
    EXPECT_NEAR(std::remainder(l.delta, kTwoPi), 0.0, 1e-15);
  }
}

// Reference values from 50-digit arithmetic; all inputs are exact doubles.
TEST(ReducedImProduct, FrozenHighPrecisionValues) {
  struct Case {
    cplx a, b;
    double expect;
  };
  const Case cases[] = {
      {{300000.0, 125000.0}, {-270000.0, 410000.0}, -2.1702506470567752297},
      {{123456.5, -98765.25}, {54321.75, 33333.5}, 2.523134754244141263},
      {{1e6, 0.0}, {0.5, 1e6}, -0.65762475913678646748},
      {{3.0, 4.0}, {5.0, -7.0}, 2.9822971502571053385},
  };
  for (const Case& c : cases) EXPECT_NEAR(reduced_im_product(c.a, c.b), c.expect, 1e-12) << c.a << " " << c.b;
}

TEST(ReducedImProduct, RangeAndAntisymmetry) {
  const cplx a(12.5, -3.25), b(-7.0, 9.5);
  const double v = reduced_im_product(a, b);
  EXPECT_GT(v, -kPi);
  EXPECT_LE(v, kPi);
  EXPECT_NEAR(std::remainder(v + reduced_im_product(b, a), kTwoPi), 0.0, 1e-14);
}

TEST(CoherentOverlap, MatchesDirectExponential) {
  const cplx pts[] = {{0.0, 0.0}, {0.3, -1.1}, {-2.0, 0.7}, {1.5, 1.5}};
  for (cplx a : pts) {
    for (cplx b : pts) {
      const cplx direct = std::exp(std::conj(a) * b - 0.5 * std::norm(a) - 0.5 * std::norm(b));
      EXPECT_NEAR(std::abs(coherent_overlap(a, b) - direct), 0.0, 1e-14);
    }
  }
}

TEST(CoherentOverlap, StaysFiniteForHugeLabels) {
  const cplx a(4.0e5, 1.0e5);
  const cplx o = coherent_overlap(a, a + cplx(0.5, -0.25));
  EXPECT_TRUE(std::isfinite(o.real()) && std::isfinite(o.imag()));
  EXPECT_NEAR(std::abs(o), std::exp(-0.5 * 0.3125), 1e-14);
  EXPECT_EQ(coherent_overlap(a, a), cplx(1.0, 0.0));
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(params(0.1).validate());
  EXPECT_THROW((ModelParams{0.0, 1.0, 0.1}.validate()), InvalidArgument);
  EXPECT_THROW((ModelParams{1.0, -1.0, 0.1}.validate()), InvalidArgument);
  EXPECT_THROW((ModelParams{1.0, 1.0, NAN}.validate()), InvalidArgument);
  EXPECT_DOUBLE_EQ(params(0.3).gamma(), -0.3);
}

}  // namespace
}  // namespace hhg
