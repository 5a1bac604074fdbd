#include "hhg/lattice.hpp"

#include <cmath>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

// Index of the lattice line nearest to x; exact ties go to the smaller index.
int nearest_line(double x) {
  const double lo = std::floor(x / kSqrtPi);
  const double d_lo = std::abs(x - lo * kSqrtPi);
  const double d_hi = std::abs((lo + 1.0) * kSqrtPi - x);
  return static_cast<int>(d_hi < d_lo ? lo + 1.0 : lo);
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteError(std::string(what) + " contains non-finite entries");
}

}  // namespace

std::pair<int, int> LatticeBasis::indices(std::size_t k) const {
  const auto w = static_cast<int>(side());
  const int i = static_cast<int>(k);
  return {m0 - half_size + i % w, n0 - half_size + i / w};
}

std::size_t LatticeBasis::index_of(int m, int n) const {
  const int p = m - m0 + half_size;
  const int q = n - n0 + half_size;
  const auto w = static_cast<int>(side());
  if (p < 0 || q < 0 || p >= w || q >= w)
    throw InvalidArgument("lattice indices (" + std::to_string(m) + ", " + std::to_string(n) +
                          ") are outside the basis");
  return static_cast<std::size_t>(q * w + p);
}

LatticeBasis build_lattice(cplx alpha0, int half_size, LatticeAnchor anchor) {
  if (half_size < 1) throw InvalidArgument("lattice half-size N must be >= 1");
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()) || std::abs(alpha0) > 1e9)
    throw InvalidArgument("alpha0 must be finite with |alpha0| <= 1e9");

  LatticeBasis basis;
  basis.half_size = half_size;
  basis.m0 = nearest_line(alpha0.real());
  basis.n0 = nearest_line(alpha0.imag());
  basis.anchor_kind = anchor;
  basis.anchor = anchor == LatticeAnchor::canonical ? cplx(basis.m0 * kSqrtPi, basis.n0 * kSqrtPi) : alpha0;

  const std::size_t w = basis.side();
  basis.offsets.reserve(w * w);
  basis.gauge_phase.reserve(w * w);
  for (int q = -half_size; q <= half_size; ++q) {
    for (int p = -half_size; p <= half_size; ++p) {
      const cplx u(p * kSqrtPi, q * kSqrtPi);
      basis.offsets.push_back(u);
      basis.gauge_phase.push_back(reduced_im_product(basis.anchor, u));
    }
  }
  return basis;
}

CMatrix static_overlap(const LatticeBasis& basis) {
  // <c+u_j|c+u_m> = exp(-|u_j-u_m|^2/2) exp(i[phi_m - phi_j + Im(conj(u_j) u_m)]) with
  // phi = Im(conj(c) u). Offsets are integer multiples of sqrt(pi), so the last term is
  // pi times an integer and the distance is pi times an integer.
  const std::size_t n = basis.size();
  const auto w = static_cast<int>(basis.side());
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const int pj = static_cast<int>(j) % w;
    const int qj = static_cast<int>(j) / w;
    for (std::size_t m = 0; m < n; ++m) {
      const int pm = static_cast<int>(m) % w;
      const int qm = static_cast<int>(m) / w;
      const int dp = pj - pm;
      const int dq = qj - qm;
      const double mag = std::exp(-0.5 * kPi * static_cast<double>(dp * dp + dq * dq));
      const long cross = static_cast<long>(pj - basis.half_size) * (qm - basis.half_size) -
                         static_cast<long>(qj - basis.half_size) * (pm - basis.half_size);
      const double sign = (cross % 2 == 0) ? 1.0 : -1.0;
      out(j, m) = sign * std::polar(mag, basis.gauge_phase[m] - basis.gauge_phase[j]);
    }
  }
  return out;
}

CMatrix regularized_inverse(const CMatrix& m, double cutoff) {
  if (m.rows() != m.cols()) throw InvalidArgument("regularized_inverse expects a square matrix");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw InvalidArgument("inverse cutoff must lie in (0, 1)");
  require_finite(m, "matrix to invert");
  if (m.size() == 0) return m;

  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double threshold = cutoff * sv(0);
  RVector inv_sv = RVector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
  }
  CMatrix out = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
  require_finite(out, "pseudo-inverse");
  return out;
}

CVector lattice_projections(cplx alpha0, const LatticeBasis& basis) {
  const cplx d = alpha0 - basis.anchor;
  const double common = reduced_im_product(basis.anchor, d);
  CVector out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const cplx u = basis.offsets[j];
    const double phase = common - basis.gauge_phase[j] + (std::conj(u) * d).imag();
    out(j) = std::polar(std::exp(-0.5 * std::norm(u - d)), phase);
  }
  return out;
}

ExpansionCoefficients expand_initial(cplx alpha0, const LatticeBasis& basis, double cutoff) {
  const CMatrix inverse = regularized_inverse(static_overlap(basis), cutoff);
  // |g> = (|+> + |->)/sqrt(2)
  CVector c = inverse * lattice_projections(alpha0, basis) / std::sqrt(2.0);
  return {c, c};
}

const CMatrix& OverlapSet::get(Branch bra, Branch ket) const {
  if (bra == Branch::plus) return ket == Branch::plus ? pp : pm;
  return ket == Branch::plus ? mp : mm;
}

OverlapFactors overlap_factors(const LatticeBasis& basis, const ModelParams& params, double t_cycles,
                               Branch bra, Branch ket) {
  const double kappa = (sigma_x_eigenvalue(bra) - sigma_x_eigenvalue(ket)) * params.gamma();
  const std::size_t n = basis.size();
  OverlapFactors f;
  f.left = CVector::Ones(n);
  f.right = CVector::Ones(n);
  if (kappa == 0.0) return f;

  const cplx s = cycle_phase(t_cycles).s;
  f.scale = std::exp(cplx(-0.5 * kappa * kappa * std::norm(s), -2.0 * kappa * (s * basis.anchor).imag()));
  for (std::size_t k = 0; k < n; ++k) {
    const cplx su = s * basis.offsets[k];
    f.left(k) = std::exp(kappa * std::conj(su));
    f.right(k) = std::exp(-kappa * su);
  }
  return f;
}

OverlapSet dynamic_overlaps(const LatticeBasis& basis, const ModelParams& params, double t_cycles) {
  OverlapSet set;
  set.t = t_cycles;
  set.pp = static_overlap(basis);
  set.mm = set.pp;
  const auto pm = overlap_factors(basis, params, t_cycles, Branch::plus, Branch::minus);
  set.pm = pm.scale * (pm.left.asDiagonal() * set.pp * pm.right.asDiagonal());
  const auto mp = overlap_factors(basis, params, t_cycles, Branch::minus, Branch::plus);
  set.mp = mp.scale * (mp.left.asDiagonal() * set.pp * mp.right.asDiagonal());
  return set;
}

std::vector<cplx> evolved_labels(const LatticeBasis& basis, const ModelParams& params, Branch branch,
                                 double t_cycles) {
  const cplx centre = evolve_label(basis.anchor, branch, params, t_cycles).alpha;
  const cplx e = cycle_phase(t_cycles).e;
  std::vector<cplx> out;
  out.reserve(basis.size());
  for (const cplx& u : basis.offsets) out.push_back(centre + u * e);
  return out;
}

CMatrix propagator_matrix(const LatticeBasis& basis, const ModelParams& params, Branch branch,
                          double tau_cycles) {
  // <c+u_k| U_b |c+u_m> = e^{i delta_b(c+u_m)} <c+u_k|c_b+u_m e>, c_b = c e + g s.
  const double g = sigma_x_eigenvalue(branch) * params.gamma();
  const auto [e, s] = cycle_phase(tau_cycles);
  const cplx c = basis.anchor;
  const cplx cb = c * e + g * s;
  const cplx shift = (c - g) * s;  // c - c_b
  const double common = reduced_im_product(c, cb) + g * (c * s).imag() + g * g * e.imag();

  const std::size_t n = basis.size();
  std::vector<double> ket_phase(n);
  std::vector<double> bra_phase(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx u = basis.offsets[k];
    ket_phase[k] = reduced_im_product(c, u * e) + g * (u * s).imag();
    bra_phase[k] = reduced_im_product(u, cb);
  }
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx uk = basis.offsets[k];
    for (std::size_t m = 0; m < n; ++m) {
      const cplx um_e = basis.offsets[m] * e;
      const double mag = std::exp(-0.5 * std::norm(shift + uk - um_e));
      const double phase = common + ket_phase[m] + bra_phase[k] + (std::conj(uk) * um_e).imag();
      out(k, m) = std::polar(mag, phase);
    }
  }
  return out;
}

}  // namespace hhg
