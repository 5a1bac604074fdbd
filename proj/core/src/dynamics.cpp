#include "hhg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hhg/errors.hpp"
#include "hhg/observables.hpp"

namespace hhg {

namespace {

void require_positive_span(double t_end, double samples_per_cycle) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive and finite");
  if (!(samples_per_cycle > 0.0)) throw InvalidArgument("samples_per_cycle must be positive");
}

// Merged, ascending evaluation times. grid_index / snap_index are -1 when a time is not on
// that list.
struct EvalPlan {
  std::vector<double> times;
  std::vector<long> grid_index;
  std::vector<std::vector<std::size_t>> snap_index;
};

EvalPlan plan_evaluations(const std::vector<double>& grid, const std::vector<double>& snapshots, double t_end) {
  std::vector<std::pair<double, std::size_t>> snaps;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const double t = snapshots[i];
    if (!(t >= 0.0 && t <= t_end)) throw InvalidArgument("snapshot time " + format_number(t) + " is outside [0, t_end]");
    snaps.emplace_back(t, i);
  }
  std::stable_sort(snaps.begin(), snaps.end());

  EvalPlan plan;
  std::size_t g = 0;
  std::size_t s = 0;
  while (g < grid.size() || s < snaps.size()) {
    const double tg = g < grid.size() ? grid[g] : INFINITY;
    const double ts = s < snaps.size() ? snaps[s].first : INFINITY;
    const double t = std::min(tg, ts);
    plan.times.push_back(t);
    plan.grid_index.push_back(tg == t ? static_cast<long>(g++) : -1);
    plan.snap_index.emplace_back();
    while (s < snaps.size() && snaps[s].first == t) plan.snap_index.back().push_back(snaps[s++].second);
  }
  return plan;
}

struct Recorder {
  TrajectoryRecord rec;
  double guard;

  void record(double t, double p_plus, double p_minus) {
    const double norm = p_plus + p_minus;
    const double drift = std::abs(norm - 1.0);
    rec.max_norm_drift = std::max(rec.max_norm_drift, drift);
    if (!(drift <= guard))
      throw NormDrift("generalized norm " + format_number(norm) + " left 1 +- " + format_number(guard) +
                          " at t=" + format_number(t) + " cycles",
                      t, norm);
    rec.times.push_back(t);
    rec.p_plus.push_back(p_plus);
    rec.p_minus.push_back(p_minus);
    rec.norm.push_back(norm);
    rec.sigma_x.push_back(p_plus - p_minus);
  }
};

TrajectoryRecord run(const EvalPlan& plan, std::size_t snapshot_count, const OdeRhs& rhs, const CVector& y0,
                     const IntegratorConfig& cfg,
                     const std::function<std::pair<double, double>(const CVector&)>& probabilities) {
  const auto k = y0.size() / 2;
  Recorder r{{}, cfg.norm_guard};
  r.rec.snapshots.resize(snapshot_count);
  auto observer = [&](std::size_t i, double t, const CVector& y) {
    if (plan.grid_index[i] >= 0) {
      const auto [pp, pm] = probabilities(y);
      r.record(t, pp, pm);
    }
    for (std::size_t s : plan.snap_index[i]) r.rec.snapshots[s] = {t, y.head(k), y.tail(k)};
  };
  const CVector y_end = integrate_sampled(rhs, y0, 0.0, plan.times, cfg, observer, &r.rec.stats);
  r.rec.final_state = {plan.times.back(), y_end.head(k), y_end.tail(k)};
  return std::move(r.rec);
}

}  // namespace

CoefficientSystem::CoefficientSystem(LatticeBasis basis, const ModelParams& params, double inverse_cutoff)
    : basis_(std::move(basis)), params_(params) {
  params_.validate();
  overlap_ = static_overlap(basis_);
  inverse_ = regularized_inverse(overlap_, inverse_cutoff);
  work_.resize(static_cast<Eigen::Index>(basis_.size()));
}

void CoefficientSystem::apply_cross(double t_cycles, Branch bra, const CVector& c_other,
                                    Eigen::Ref<CVector> out) const {
  const Branch ket = bra == Branch::plus ? Branch::minus : Branch::plus;
  const OverlapFactors f = overlap_factors(basis_, params_, t_cycles, bra, ket);
  work_.noalias() = overlap_ * f.right.cwiseProduct(c_other);
  work_ = f.scale * f.left.cwiseProduct(work_);
  out.noalias() = inverse_ * work_;
}

void CoefficientSystem::rhs(double t_cycles, const CVector& y, CVector& dydt) const {
  const auto k = static_cast<Eigen::Index>(size());
  dydt.resize(2 * k);
  if (params_.omega0 == 0.0) {
    dydt.setZero();
    return;
  }
  const CVector c_plus = y.head(k);
  const CVector c_minus = y.tail(k);
  apply_cross(t_cycles, Branch::plus, c_minus, dydt.head(k));
  apply_cross(t_cycles, Branch::minus, c_plus, dydt.tail(k));
  // i dc/dt = (omega0/2) ..., with t measured in cycles of length 2 pi / omega.
  dydt *= cplx(0.0, -0.5 * params_.omega0 * params_.period());
}

StateDerivative CoefficientSystem::derivative(const StateCoefficients& state) const {
  const auto k = static_cast<Eigen::Index>(size());
  CVector y(2 * k);
  y << state.plus, state.minus;
  CVector d;
  rhs(state.t, y, d);
  d /= params_.period();
  return {d.head(k), d.tail(k)};
}

StateDerivative coefficient_rhs(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                                double inverse_cutoff) {
  params.validate();
  const OverlapSet ov = dynamic_overlaps(basis, params, state.t);
  const cplx factor(0.0, -0.5 * params.omega0);
  StateDerivative d;
  d.plus = factor * (regularized_inverse(ov.pp, inverse_cutoff) * (ov.pm * state.minus));
  d.minus = factor * (regularized_inverse(ov.mm, inverse_cutoff) * (ov.mp * state.plus));
  if (!d.plus.allFinite() || !d.minus.allFinite())
    throw NonFiniteError("non-finite coefficient derivative at t=" + format_number(state.t) + " cycles");
  return d;
}

double generalized_norm(const StateCoefficients& state, const OverlapSet& overlaps) {
  return hermitian_form(state.plus, overlaps.pp) + hermitian_form(state.minus, overlaps.mm);
}

std::vector<double> sample_grid(double t_end, double samples_per_cycle) {
  require_positive_span(t_end, samples_per_cycle);
  const auto n = static_cast<long>(std::llround(t_end * samples_per_cycle));
  if (n < 1) throw InvalidArgument("t_end * samples_per_cycle must round to at least 1");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(i) / samples_per_cycle;
  return out;
}

TrajectoryRecord propagate(const ExpansionCoefficients& initial, const CoefficientSystem& system, double t_end,
                           const IntegratorConfig& cfg, const PropagationOptions& opts) {
  cfg.validate();
  const auto k = static_cast<Eigen::Index>(system.size());
  if (initial.plus.size() != k || initial.minus.size() != k)
    throw InvalidArgument("initial coefficients do not match the lattice size");
  const EvalPlan plan = plan_evaluations(sample_grid(t_end, opts.samples_per_cycle), opts.snapshot_times, t_end);

  CVector y0(2 * k);
  y0 << initial.plus, initial.minus;
  const CMatrix& n = system.overlap();
  auto probs = [&](const CVector& y) {
    return std::make_pair(hermitian_form(y.head(k), n), hermitian_form(y.tail(k), n));
  };
  auto rhs = [&](double t, const CVector& y, CVector& d) { system.rhs(t, y, d); };
  return run(plan, opts.snapshot_times.size(), rhs, y0, cfg, probs);
}

TrajectoryRecord propagate(const ExpansionCoefficients& initial, const LatticeBasis& basis, const ModelParams& params,
                           double t_end, const IntegratorConfig& cfg, const PropagationOptions& opts) {
  return propagate(initial, CoefficientSystem(basis, params), t_end, cfg, opts);
}

cplx two_state_coupling(cplx alpha0, const ModelParams& params, double t_cycles) {
  const double g = params.gamma();
  const cplx s = cycle_phase(t_cycles).s;
  return std::exp(cplx(-2.0 * g * g * std::norm(s), -4.0 * g * (s * alpha0).imag()));
}

TrajectoryRecord two_state_propagate(cplx alpha0, const ModelParams& params, double t_end,
                                     const IntegratorConfig& cfg, const PropagationOptions& opts) {
  params.validate();
  cfg.validate();
  const EvalPlan plan = plan_evaluations(sample_grid(t_end, opts.samples_per_cycle), opts.snapshot_times, t_end);
  const cplx factor(0.0, -0.5 * params.omega0 * params.period());
  auto rhs = [&](double t, const CVector& y, CVector& d) {
    d.resize(2);
    if (params.omega0 == 0.0) {
      d.setZero();
      return;
    }
    const cplx c = two_state_coupling(alpha0, params, t);
    d(0) = factor * c * y(1);
    d(1) = factor * std::conj(c) * y(0);
  };
  auto probs = [](const CVector& y) { return std::make_pair(std::norm(y(0)), std::norm(y(1))); };
  CVector y0(2);
  y0.setConstant(cplx(1.0 / std::sqrt(2.0), 0.0));
  return run(plan, opts.snapshot_times.size(), rhs, y0, cfg, probs);
}

cplx state_overlap(const StateCoefficients& a, const StateCoefficients& b, const LatticeBasis& basis,
                   const ModelParams& params) {
  // Each branch evolves under its own time-independent Hamiltonian, so
  // <phi_b,k(ta)|phi_b,m(tb)> = <alpha_k|U_b(tb - ta)|alpha_m>.
  const double tau = b.t - a.t;
  const CMatrix xp = propagator_matrix(basis, params, Branch::plus, tau);
  const CMatrix xm = propagator_matrix(basis, params, Branch::minus, tau);
  return a.plus.dot(xp * b.plus) + a.minus.dot(xm * b.minus);
}

double fidelity(const StateCoefficients& a, const StateCoefficients& b, const LatticeBasis& basis,
                const ModelParams& params) {
  const CMatrix n = static_overlap(basis);
  const double na = hermitian_form(a.plus, n) + hermitian_form(a.minus, n);
  const double nb = hermitian_form(b.plus, n) + hermitian_form(b.minus, n);
  return std::norm(state_overlap(a, b, basis, params)) / (na * nb);
}

}  // namespace hhg
