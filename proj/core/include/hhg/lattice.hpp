#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hhg/model.hpp"
#include "hhg/types.hpp"

namespace hhg {

inline constexpr double kDefaultInverseCutoff = 1e-12;

/// Where the finite lattice is pinned.
enum class LatticeAnchor {
  /// Points sit on the von Neumann lattice (m + i n) sqrt(pi); the centre is the point
  /// closest to alpha0.
  canonical,
  /// The same lattice translated by the sub-cell offset so that its centre point
  /// coincides with alpha0. The initial coherent state is then a basis element.
  initial_state,
};

/// (2N+1)^2 coherent-state labels spaced sqrt(pi) apart.
///
/// Index k runs row by row: k = (n - n0 + N) * (2N+1) + (m - m0 + N), so k = 0 is the
/// corner (m0-N, n0-N) and the last index is (m0+N, n0+N). Labels are kept as
/// anchor + offset; the offsets are small and are what the overlap formulas use.
struct LatticeBasis {
  int half_size = 0;
  int m0 = 0;
  int n0 = 0;
  LatticeAnchor anchor_kind = LatticeAnchor::canonical;
  cplx anchor{};                    ///< label of the centre point
  std::vector<cplx> offsets;        ///< point(k) - anchor
  std::vector<double> gauge_phase;  ///< Im(conj(anchor) * offsets[k]), reduced

  std::size_t side() const { return static_cast<std::size_t>(2 * half_size + 1); }
  std::size_t size() const { return offsets.size(); }
  cplx point(std::size_t k) const { return anchor + offsets[k]; }
  /// Absolute lattice indices (m, n) of point k.
  std::pair<int, int> indices(std::size_t k) const;
  std::size_t index_of(int m, int n) const;
  std::size_t center() const { return size() / 2; }
};

LatticeBasis build_lattice(cplx alpha0, int half_size, LatticeAnchor anchor = LatticeAnchor::canonical);

/// Gram matrix N_ij = <alpha_i|alpha_j>.
CMatrix static_overlap(const LatticeBasis& basis);

/// Pseudo-inverse that drops singular values below cutoff * sigma_max.
CMatrix regularized_inverse(const CMatrix& m, double cutoff = kDefaultInverseCutoff);

/// Coefficients of |g>|alpha0> = sum_k c+_k |+>|alpha_k> + c-_k |->|alpha_k>.
struct ExpansionCoefficients {
  CVector plus;
  CVector minus;
};

/// <alpha_k|alpha0> for every lattice point.
CVector lattice_projections(cplx alpha0, const LatticeBasis& basis);

ExpansionCoefficients expand_initial(cplx alpha0, const LatticeBasis& basis,
                                     double cutoff = kDefaultInverseCutoff);

/// The four Gram matrices of the time-evolved basis at a common time (cycles).
/// Indexing: pm(j, m) = <phi+_j(t)|phi-_m(t)>, where |phi+-_k(t)> = e^{i delta} |alpha_k,+-(t)>.
struct OverlapSet {
  double t = 0.0;
  CMatrix pp;
  CMatrix mm;
  CMatrix pm;
  CMatrix mp;

  const CMatrix& get(Branch bra, Branch ket) const;
};

/// N^{ab}(t) = scale * diag(left) * N * diag(right).
///
/// With kappa = (sigma_a - sigma_b) gamma, s = 1 - e^{-i omega t}, anchor c and offsets u:
///   scale = exp(-kappa^2 |s|^2 / 2 - 2 i kappa Im(s c)),
///   left_j = exp(kappa conj(s u_j)),  right_m = exp(-kappa s u_m).
/// Same-branch blocks have kappa = 0 and reduce to the static matrix exactly.
struct OverlapFactors {
  cplx scale{1.0, 0.0};
  CVector left;
  CVector right;
};

OverlapFactors overlap_factors(const LatticeBasis& basis, const ModelParams& params, double t_cycles,
                               Branch bra, Branch ket);

OverlapSet dynamic_overlaps(const LatticeBasis& basis, const ModelParams& params, double t_cycles);

/// Labels alpha_{k,b}(t) of every lattice point evolved along one branch.
std::vector<cplx> evolved_labels(const LatticeBasis& basis, const ModelParams& params, Branch branch,
                                 double t_cycles);

/// Matrix X_km = <alpha_k| U_b(tau) |alpha_m> of the strong-field propagator on one branch,
/// used to overlap lattice states taken at different times.
CMatrix propagator_matrix(const LatticeBasis& basis, const ModelParams& params, Branch branch,
                          double tau_cycles);

}  // namespace hhg
