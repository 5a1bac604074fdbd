#include <gtest/gtest.h>

#include <cmath>

#include "hhg/dynamics.hpp"
#include "hhg/errors.hpp"

namespace hhg {
namespace {

StateCoefficients initial_state(cplx a0, const LatticeBasis& b) {
  const ExpansionCoefficients c = expand_initial(a0, b);
  return {0.0, c.plus, c.minus};
}

// At whole cycles the cross blocks equal N, so N dc+/dt = -i (omega0/2) N c-.
TEST(CoefficientSystem, WholeCycleRhsIsBareRabiCoupling) {
  const ModelParams mp{1.0, 2.2, 0.2};
  const LatticeBasis b = build_lattice(cplx(1.0, 0.5), 3, LatticeAnchor::canonical);
  const CoefficientSystem sys(b, mp);
  const CMatrix& n = sys.overlap();
  StateCoefficients s = initial_state(cplx(1.0, 0.5), b);
  s.minus *= cplx(0.8, 0.3);
  for (double t : {0.0, 1.0, 4.0}) {
    s.t = t;
    const StateDerivative d = sys.derivative(s);
    const cplx k(0.0, -mp.omega0 / 2.0);
    EXPECT_LT((n * d.plus - k * (n * s.minus)).cwiseAbs().maxCoeff(), 1e-9) << t;
    EXPECT_LT((n * d.minus - k * (n * s.plus)).cwiseAbs().maxCoeff(), 1e-9) << t;
  }
}

TEST(CoefficientSystem, CachedPathMatchesFromScratch) {
  const ModelParams mp{1.0, 2.2, 0.3};
  const LatticeBasis b = build_lattice(cplx(2.0, -0.5), 2, LatticeAnchor::initial_state);
  const CoefficientSystem sys(b, mp);
  StateCoefficients s = initial_state(cplx(2.0, -0.5), b);
  s.plus += CVector::Constant(s.plus.size(), cplx(0.01, -0.02));
  for (double t : {0.2, 0.5, 1.3}) {
    s.t = t;
    const StateDerivative a = sys.derivative(s);
    const StateDerivative r = coefficient_rhs(s, b, mp);
    EXPECT_LT((a.plus - r.plus).cwiseAbs().maxCoeff(), 1e-10) << t;
    EXPECT_LT((a.minus - r.minus).cwiseAbs().maxCoeff(), 1e-10) << t;
  }
}

TEST(CoefficientSystem, PerCycleRhsScalesByPeriod) {
  const ModelParams mp{2.0, 1.1, 0.3};
  const LatticeBasis b = build_lattice(cplx(0.5, 0.5), 1, LatticeAnchor::canonical);
  const CoefficientSystem sys(b, mp);
  StateCoefficients s = initial_state(cplx(0.5, 0.5), b);
  s.t = 0.3;
  CVector y(2 * sys.size());
  y << s.plus, s.minus;
  CVector dy(y.size());
  sys.rhs(0.3, y, dy);
  const StateDerivative d = sys.derivative(s);
  EXPECT_LT((dy.head(sys.size()) - mp.period() * d.plus).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, ZeroAtomicSplittingFreezesCoefficients) {
  const ModelParams mp{1.0, 0.0, 0.5};
  const cplx a0(1.5, 0.0);
  const LatticeBasis b = build_lattice(a0, 3, LatticeAnchor::initial_state);
  PropagationOptions opts;
  opts.samples_per_cycle = 64;
  const TrajectoryRecord r = propagate(expand_initial(a0, b), b, mp, 2.0, {}, opts);
  const StateCoefficients s0 = initial_state(a0, b);
  EXPECT_EQ(r.final_state.plus, s0.plus);
  EXPECT_EQ(r.final_state.minus, s0.minus);
  for (double sx : r.sigma_x) EXPECT_NEAR(sx, 0.0, 1e-14);
  EXPECT_LT(r.max_norm_drift, 1e-12);
}

TEST(Propagate, FidelityIsOneAfterWholeCycles) {
  const ModelParams mp{1.0, 0.0, 0.5};
  const cplx a0(1.5, 0.3);
  const LatticeBasis b = build_lattice(a0, 3, LatticeAnchor::initial_state);
  PropagationOptions opts;
  opts.samples_per_cycle = 16;
  opts.snapshot_times = {0.0, 0.5, 1.0, 2.0};
  const TrajectoryRecord r = propagate(expand_initial(a0, b), b, mp, 2.0, {}, opts);
  ASSERT_EQ(r.snapshots.size(), 4u);
  EXPECT_NEAR(fidelity(r.snapshots[0], r.snapshots[2], b, mp), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(r.snapshots[0], r.snapshots[3], b, mp), 1.0, 1e-10);
  // Half a cycle later the branches have separated by 4 gamma.
  EXPECT_LT(fidelity(r.snapshots[0], r.snapshots[1], b, mp), 0.99);
}

TEST(Propagate, NormGuardRaisesNormDrift) {
  const ModelParams mp{1.0, 2.2, 0.5};
  const cplx a0(1.0, 0.0);
  const LatticeBasis b = build_lattice(a0, 1, LatticeAnchor::canonical);
  IntegratorConfig cfg;
  cfg.norm_guard = 1e-15;
  EXPECT_THROW(propagate(expand_initial(a0, b), b, mp, 1.0, cfg), NormDrift);
}

TEST(SampleGrid, UniformAndInclusive) {
  const std::vector<double> g = sample_grid(2.0, 8.0);
  ASSERT_EQ(g.size(), 17u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(g[3], 3.0 / 8.0);
}

TEST(TwoState, CouplingMatchesEvolvedLabels) {
  const ModelParams mp{1.0, 2.2, 0.05};
  const cplx a0(2.0, 0.7);
  for (double t : {0.0, 0.21, 0.5, 0.9, 1.0}) {
    const BranchLabel p = evolve_label(a0, Branch::plus, mp, t);
    const BranchLabel m = evolve_label(a0, Branch::minus, mp, t);
    const cplx direct = std::polar(1.0, m.delta - p.delta) * coherent_overlap(p.alpha, m.alpha);
    EXPECT_NEAR(std::abs(two_state_coupling(a0, mp, t) - direct), 0.0, 1e-12) << t;
  }
}

// With an initial-state anchor and a vanishing shift, only the centre label matters,
// so the lattice and the single-label model coincide.
TEST(TwoState, MatchesLatticeAtWeakCoupling) {
  const ModelParams mp{1.0, 2.2, 1e-6};
  const cplx a0(2.0, 0.0);
  const LatticeBasis b = build_lattice(a0, 2, LatticeAnchor::initial_state);
  PropagationOptions opts;
  opts.samples_per_cycle = 32;
  const TrajectoryRecord lat = propagate(expand_initial(a0, b), b, mp, 2.0, {}, opts);
  const TrajectoryRecord two = two_state_propagate(a0, mp, 2.0, {}, opts);
  ASSERT_EQ(lat.sigma_x.size(), two.sigma_x.size());
  for (std::size_t i = 0; i < lat.sigma_x.size(); ++i) {
    EXPECT_NEAR(lat.sigma_x[i], two.sigma_x[i], 1e-8);
    EXPECT_NEAR(lat.p_plus[i], two.p_plus[i], 1e-8);
  }
}

TEST(TwoState, BareRabiOscillationWithoutCoupling) {
  // Omega = 0: |g> = (|+> + |->)/sqrt(2) is an eigenstate, sigma_x stays 0; start is fixed.
  const ModelParams mp{1.0, 2.2, 0.0};
  PropagationOptions opts;
  opts.samples_per_cycle = 16;
  const TrajectoryRecord r = two_state_propagate(cplx(3.0, 0.0), mp, 3.0, {}, opts);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    EXPECT_NEAR(r.sigma_x[i], 0.0, 1e-9);
    EXPECT_NEAR(r.norm[i], 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace hhg
