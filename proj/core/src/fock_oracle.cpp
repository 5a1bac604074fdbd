#include "hhg/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhg/dynamics.hpp"
#include "hhg/errors.hpp"

namespace hhg {

namespace {

void check_alpha(cplx alpha0, int n_max) {
  const double a = std::abs(alpha0);
  if (!(a <= kFockMaxAlpha))
    throw InvalidArgument("photon-number reference requires |alpha0| <= 10, got " + format_number(a));
  if (a * a + 6.0 * a > n_max)
    throw TailOverflow("n_max=" + std::to_string(n_max) + " is below |alpha0|^2 + 6|alpha0| = " +
                       format_number(a * a + 6.0 * a));
}

// L_m^{(k)}(x) by upward recurrence in m.
double laguerre(int m, int k, double x) {
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = 1.0 + k - x;
  for (int j = 1; j < m; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

// e^{-i 2 pi n t} for n = 0 .. n_max, reduced per element.
CVector rotation(double t_cycles, int n_max) {
  const double r = t_cycles - std::nearbyint(t_cycles);
  CVector out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double x = n * r;
    out(n) = std::polar(1.0, -kTwoPi * (x - std::nearbyint(x)));
  }
  return out;
}

void record(FockTrajectory& tr, const FockState& s, const FockTruncation& trunc) {
  const double tail = s.tail_population();
  tr.max_tail = std::max(tr.max_tail, tail);
  if (tail > trunc.tail_tol)
    throw TailOverflow("population " + format_number(tail) + " in the top photon levels exceeds tail_tol at t=" +
                       format_number(s.t) + " cycles");
  const double pp = s.plus.squaredNorm();
  const double pm = s.minus.squaredNorm();
  tr.times.push_back(s.t);
  tr.p_plus.push_back(pp);
  tr.p_minus.push_back(pm);
  tr.norm.push_back(pp + pm);
  tr.sigma_x.push_back(pp - pm);
}

}  // namespace

void FockTruncation::validate() const {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw InvalidArgument("tail_tol must lie in (0, 1)");
}

FockTruncation FockTruncation::for_alpha(cplx alpha0, double tail_tol) {
  const double a = std::abs(alpha0);
  return {static_cast<int>(std::ceil(a * a + 6.0 * a + 20.0)), tail_tol};
}

double FockState::tail_population() const {
  const int levels = n_max() + 1;
  const int top = std::max(1, (levels + 9) / 10);
  return plus.tail(top).squaredNorm() + minus.tail(top).squaredNorm();
}

cplx displacement_matrix_element(int n, int m, cplx beta) {
  if (n < 0 || m < 0) throw InvalidArgument("photon numbers must be non-negative");
  if (n < m) return std::conj(displacement_matrix_element(m, n, -beta));
  const double x = std::norm(beta);
  const int k = n - m;
  if (x == 0.0) return k == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  const double log_mag = 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) + k * 0.5 * std::log(x) - 0.5 * x;
  return std::polar(std::exp(log_mag), k * std::arg(beta)) * laguerre(m, k, x);
}

CMatrix displacement_matrix(int n_max, cplx beta) {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  CMatrix d(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) d(n, m) = displacement_matrix_element(n, m, beta);
  }
  return d;
}

CVector coherent_amplitudes(cplx alpha, int n_max) {
  CVector a(n_max + 1);
  a(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) a(n) = a(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return a;
}

FockState coherent_fock_state(cplx alpha0, int n_max, AtomInit atom) {
  const CVector field = coherent_amplitudes(alpha0, n_max);
  FockState s;
  const double w = 1.0 / std::sqrt(2.0);
  switch (atom) {
    case AtomInit::ground:
      s.plus = w * field;
      s.minus = w * field;
      break;
    case AtomInit::plus:
      s.plus = field;
      s.minus = CVector::Zero(n_max + 1);
      break;
    case AtomInit::minus:
      s.plus = CVector::Zero(n_max + 1);
      s.minus = field;
      break;
  }
  return s;
}

double sfa_eigenenergy(int n, const ModelParams& params) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const double r = params.Omega / params.omega;
  return params.omega * (n - r * r);
}

RMatrix sfa_hamiltonian(const ModelParams& params, int n_max) {
  params.validate();
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  const int d = n_max + 1;
  RMatrix h = RMatrix::Zero(2 * d, 2 * d);
  for (int b = 0; b < 2; ++b) {
    const double sign = b == 0 ? 1.0 : -1.0;
    const int o = b * d;
    for (int n = 0; n <= n_max; ++n) {
      h(o + n, o + n) = params.omega * n;
      if (n < n_max) {
        const double c = sign * params.Omega * std::sqrt(n + 1.0);
        h(o + n, o + n + 1) = c;
        h(o + n + 1, o + n) = c;
      }
    }
  }
  return h;
}

RMatrix full_hamiltonian(const ModelParams& params, int n_max) {
  RMatrix h = sfa_hamiltonian(params, n_max);
  const int d = n_max + 1;
  for (int n = 0; n < d; ++n) {
    h(n, d + n) = 0.5 * params.omega0;
    h(d + n, n) = 0.5 * params.omega0;
  }
  return h;
}

FockTrajectory propagate_fock(cplx alpha0, const ModelParams& params, double t_end, const FockTruncation& trunc,
                              double samples_per_cycle, AtomInit atom, const std::vector<double>& snapshot_times) {
  trunc.validate();
  check_alpha(alpha0, trunc.n_max);
  const std::vector<double> grid = sample_grid(t_end, samples_per_cycle);
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_end)) throw InvalidArgument("snapshot time outside [0, t_end]");
  }

  const int d = trunc.n_max + 1;
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(full_hamiltonian(params, trunc.n_max));
  const RMatrix& v = eig.eigenvectors();
  const RVector& e = eig.eigenvalues();
  const FockState s0 = coherent_fock_state(alpha0, trunc.n_max, atom);
  CVector psi0(2 * d);
  psi0 << s0.plus, s0.minus;
  const CVector a = v.transpose().cast<cplx>() * psi0;
  const CMatrix vc = v.cast<cplx>();

  auto state_at = [&](double t_cycles) {
    const double t = t_cycles * params.period();
    CVector phased(2 * d);
    for (Eigen::Index i = 0; i < phased.size(); ++i) phased(i) = a(i) * std::polar(1.0, -e(i) * t);
    const CVector psi = vc * phased;
    return FockState{t_cycles, psi.head(d), psi.tail(d)};
  };

  FockTrajectory tr;
  tr.times.reserve(grid.size());
  for (double t : grid) record(tr, state_at(t), trunc);
  for (double t : snapshot_times) tr.snapshots.push_back(state_at(t));
  return tr;
}

DisplacedBasisSystem::DisplacedBasisSystem(const ModelParams& params, int n_max) : params_(params), n_max_(n_max) {
  params_.validate();
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  to_plus_ = displacement_matrix(n_max, cplx(-2.0 * params.gamma(), 0.0));
  to_minus_ = displacement_matrix(n_max, cplx(2.0 * params.gamma(), 0.0));
}

void DisplacedBasisSystem::rhs(double t_cycles, const CVector& y, CVector& dydt) const {
  const int d = n_max_ + 1;
  dydt.resize(2 * d);
  if (params_.omega0 == 0.0) {
    dydt.setZero();
    return;
  }
  const CVector p = rotation(t_cycles, n_max_);
  const CVector bp = y.head(d);
  const CVector bm = y.tail(d);
  dydt.head(d) = p.conjugate().cwiseProduct(to_plus_ * p.cwiseProduct(bm));
  dydt.tail(d) = p.conjugate().cwiseProduct(to_minus_ * p.cwiseProduct(bp));
  dydt *= cplx(0.0, -0.5 * params_.omega0 * params_.period());
}

CVector DisplacedBasisSystem::initial(cplx alpha0) const {
  // D(-+gamma)|alpha0> = e^{+-i gamma Im(alpha0)} |alpha0 -+ gamma> for real gamma.
  const double g = params_.gamma();
  const double w = 1.0 / std::sqrt(2.0);
  const int d = n_max_ + 1;
  CVector y(2 * d);
  y.head(d) = w * std::polar(1.0, g * alpha0.imag()) * coherent_amplitudes(alpha0 - g, n_max_);
  y.tail(d) = w * std::polar(1.0, -g * alpha0.imag()) * coherent_amplitudes(alpha0 + g, n_max_);
  return y;
}

CVector displaced_basis_rhs(double t_cycles, const CVector& b, const ModelParams& params, int n_max) {
  CVector d;
  DisplacedBasisSystem(params, n_max).rhs(t_cycles, b, d);
  return d / params.period();
}

FockTrajectory propagate_displaced(cplx alpha0, const ModelParams& params, double t_end, const FockTruncation& trunc,
                                   const IntegratorConfig& cfg, double samples_per_cycle) {
  trunc.validate();
  check_alpha(alpha0, trunc.n_max);
  const DisplacedBasisSystem sys(params, trunc.n_max);
  const std::vector<double> grid = sample_grid(t_end, samples_per_cycle);
  const int d = trunc.n_max + 1;
  FockTrajectory tr;
  auto rhs = [&](double t, const CVector& y, CVector& dy) { sys.rhs(t, y, dy); };
  auto obs = [&](std::size_t, double t, const CVector& y) { record(tr, FockState{t, y.head(d), y.tail(d)}, trunc); };
  integrate_sampled(rhs, sys.initial(alpha0), 0.0, grid, cfg, obs);
  return tr;
}

}  // namespace hhg
