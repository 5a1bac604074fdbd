#include <gtest/gtest.h>

#include <cmath>

#include "hhg/lattice.hpp"

namespace hhg {
namespace {

TEST(Lattice, IndexOrderingIsRowMajor) {
  const LatticeBasis b = build_lattice(cplx(2.0, -1.0), 2, LatticeAnchor::canonical);
  ASSERT_EQ(b.size(), 25u);
  const auto [m0, n0] = b.indices(b.center());
  EXPECT_EQ(b.indices(0), std::make_pair(m0 - 2, n0 - 2));
  EXPECT_EQ(b.indices(1), std::make_pair(m0 - 1, n0 - 2));
  EXPECT_EQ(b.indices(5), std::make_pair(m0 - 2, n0 - 1));
  EXPECT_EQ(b.indices(24), std::make_pair(m0 + 2, n0 + 2));
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto [m, n] = b.indices(k);
    EXPECT_EQ(b.index_of(m, n), k);
    EXPECT_NEAR(std::abs(b.point(k) - cplx(m, n) * kSqrtPi), 0.0, 1e-12);
  }
}

TEST(Lattice, CanonicalCentreIsNearestPoint) {
  const cplx a0(2.0, -1.0);
  const LatticeBasis b = build_lattice(a0, 3, LatticeAnchor::canonical);
  EXPECT_LE(std::abs(b.point(b.center()) - a0), kSqrtPi / std::sqrt(2.0) + 1e-12);
}

TEST(Lattice, InitialAnchorPutsCentreOnAlpha0) {
  const cplx a0(2.3, 0.4);
  const LatticeBasis b = build_lattice(a0, 3, LatticeAnchor::initial_state);
  EXPECT_EQ(b.point(b.center()), a0);
  const ExpansionCoefficients c = expand_initial(a0, b);
  for (Eigen::Index k = 0; k < c.plus.size(); ++k) {
    const double expect = k == static_cast<Eigen::Index>(b.center()) ? 1.0 / std::sqrt(2.0) : 0.0;
    EXPECT_NEAR(std::abs(c.plus(k) - expect), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(c.minus(k) - expect), 0.0, 1e-8);
  }
}

TEST(StaticOverlap, HermitianUnitDiagonalAndDirect) {
  const LatticeBasis b = build_lattice(cplx(1.2, -0.8), 3, LatticeAnchor::initial_state);
  const CMatrix n = static_overlap(b);
  EXPECT_NEAR((n - n.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  for (Eigen::Index k = 0; k < n.rows(); ++k) EXPECT_NEAR(std::abs(n(k, k) - 1.0), 0.0, 1e-15);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t m = 0; m < b.size(); ++m)
      EXPECT_NEAR(std::abs(n(j, m) - coherent_overlap(b.point(j), b.point(m))), 0.0, 1e-12);
}

TEST(StaticOverlap, LargeLabelsKeepExactMagnitudes) {
  const LatticeBasis b = build_lattice(cplx(4.0e5, 0.0), 2, LatticeAnchor::initial_state);
  const CMatrix n = static_overlap(b);
  // Neighbours one lattice step apart: |<a|a + sqrt(pi)>| = exp(-pi/2).
  EXPECT_NEAR(std::abs(n(0, 1)), std::exp(-kPi / 2.0), 1e-15);
  EXPECT_NEAR((n - n.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

double projected_norm(const ExpansionCoefficients& c, const LatticeBasis& b) {
  const CMatrix n = static_overlap(b);
  return (c.plus.dot(n * c.plus) + c.minus.dot(n * c.minus)).real();
}

TEST(ExpandInitial, AnchoredLatticeIsExact) {
  for (cplx a0 : {cplx(0.6, 0.2), cplx(2.0, -1.3), cplx(-0.9, 0.7), cplx(4.0e5, 0.0)}) {
    const LatticeBasis b = build_lattice(a0, 5, LatticeAnchor::initial_state);
    const ExpansionCoefficients c = expand_initial(a0, b);
    EXPECT_NEAR(projected_norm(c, b), 1.0, 1e-8) << a0;
    const cplx proj = lattice_projections(a0, b).dot(c.plus) * std::sqrt(2.0);
    EXPECT_NEAR(std::abs(proj - 1.0), 0.0, 1e-8) << a0;
  }
}

// A finite canonical lattice only approaches an off-lattice coherent state slowly (about 1/N).
TEST(ExpandInitial, CanonicalDeficitShrinksWithSize) {
  const cplx a0(0.6, 0.2);
  double previous = 1.0;
  for (int n : {3, 5, 7, 9}) {
    const LatticeBasis b = build_lattice(a0, n, LatticeAnchor::canonical);
    const double deficit = 1.0 - projected_norm(expand_initial(a0, b), b);
    EXPECT_GT(deficit, 0.0) << n;
    EXPECT_LT(deficit, 0.7 * previous) << n;
    EXPECT_LT(deficit, 0.1 / n) << n;
    previous = deficit;
  }
}

// Cross-branch blocks from closed-form factors against labels evolved one by one.
TEST(DynamicOverlaps, MatchDirectEvolvedLabels) {
  const ModelParams mp{1.0, 2.2, 0.35};
  const LatticeBasis b = build_lattice(cplx(1.5, 0.5), 2, LatticeAnchor::canonical);
  for (double t : {0.0, 0.13, 0.5, 0.77, 1.0, 3.4}) {
    const OverlapSet o = dynamic_overlaps(b, mp, t);
    for (Branch bra : kBranches) {
      for (Branch ket : kBranches) {
        const CMatrix& got = o.get(bra, ket);
        double worst = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
          const BranchLabel lj = evolve_label(b.point(j), bra, mp, t);
          for (std::size_t m = 0; m < b.size(); ++m) {
            const BranchLabel lm = evolve_label(b.point(m), ket, mp, t);
            const cplx direct =
                std::polar(1.0, lm.delta - lj.delta) * coherent_overlap(lj.alpha, lm.alpha);
            worst = std::max(worst, std::abs(got(j, m) - direct));
          }
        }
        EXPECT_LT(worst, 1e-12) << "t=" << t << " " << to_string(bra) << "/" << to_string(ket);
      }
    }
  }
}

TEST(DynamicOverlaps, SameBranchEqualsStatic) {
  const ModelParams mp{1.0, 2.2, 0.8};
  const LatticeBasis b = build_lattice(cplx(3.0, 1.0), 2, LatticeAnchor::initial_state);
  const CMatrix n = static_overlap(b);
  const OverlapSet o = dynamic_overlaps(b, mp, 0.41);
  EXPECT_EQ(o.pp, n);
  EXPECT_EQ(o.mm, n);
  EXPECT_NEAR((o.mp - o.pm.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(PropagatorMatrix, FullCycleIsStaticOverlapUpToPhase) {
  const ModelParams mp{1.0, 2.2, 0.4};
  const LatticeBasis b = build_lattice(cplx(1.0, 1.0), 2, LatticeAnchor::canonical);
  const CMatrix n = static_overlap(b);
  for (Branch br : kBranches) {
    const CMatrix x = propagator_matrix(b, mp, br, 1.0);
    const cplx phase = x(0, 0) / n(0, 0);
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_NEAR((x - phase * n).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
}

TEST(RegularizedInverse, PseudoInverseProperties) {
  const LatticeBasis b = build_lattice(cplx(0.0, 0.0), 3, LatticeAnchor::canonical);
  const CMatrix n = static_overlap(b);
  const CMatrix p = regularized_inverse(n);
  EXPECT_LT((n * p * n - n).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((p - p.adjoint()).cwiseAbs().maxCoeff(), 1e-6 * p.cwiseAbs().maxCoeff());
}

}  // namespace
}  // namespace hhg
