#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hhg/lattice.hpp"
#include "hhg/model.hpp"
#include "hhg/ode.hpp"
#include "hhg/state.hpp"

namespace hhg {

struct StateDerivative {
  CVector plus;
  CVector minus;
};

/// Coefficient equations of motion on a fixed lattice.
///
/// The same-branch Gram matrices of the evolved basis equal the static one at every t, so its
/// pseudo-inverse is formed once; the cross-branch blocks are rebuilt per call from their
/// closed-form diagonal factors.
class CoefficientSystem {
 public:
  CoefficientSystem(LatticeBasis basis, const ModelParams& params, double inverse_cutoff = kDefaultInverseCutoff);

  std::size_t size() const { return basis_.size(); }
  const LatticeBasis& basis() const { return basis_; }
  const ModelParams& params() const { return params_; }
  const CMatrix& overlap() const { return overlap_; }
  const CMatrix& inverse() const { return inverse_; }

  /// d/dt (per cycle) of y = [c+; c-].
  void rhs(double t_cycles, const CVector& y, CVector& dydt) const;

  /// Physical-time derivative of both coefficient vectors.
  StateDerivative derivative(const StateCoefficients& state) const;

 private:
  void apply_cross(double t_cycles, Branch bra, const CVector& c_other, Eigen::Ref<CVector> out) const;

  LatticeBasis basis_;
  ModelParams params_;
  CMatrix overlap_;
  CMatrix inverse_;
  mutable CVector work_;
};

/// Physical-time derivatives, assembling the overlap matrices and inverse from scratch.
StateDerivative coefficient_rhs(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                                double inverse_cutoff = kDefaultInverseCutoff);

/// (c+)^dag N++ c+ + (c-)^dag N-- c-.
double generalized_norm(const StateCoefficients& state, const OverlapSet& overlaps);

struct PropagationOptions {
  double samples_per_cycle = 4096.0;
  /// Extra times (cycles, within [0, t_end]) at which the full coefficients are kept.
  std::vector<double> snapshot_times;
};

struct TrajectoryRecord {
  std::vector<double> times;  ///< uniform grid, cycles
  std::vector<double> sigma_x;
  std::vector<double> norm;
  std::vector<double> p_plus;
  std::vector<double> p_minus;
  std::vector<StateCoefficients> snapshots;  ///< in the order of snapshot_times
  StateCoefficients final_state;
  IntegratorStats stats;
  double max_norm_drift = 0.0;
};

/// Uniform sample grid i / samples_per_cycle, i = 0 .. round(t_end * samples_per_cycle).
std::vector<double> sample_grid(double t_end, double samples_per_cycle);

/// Integrates the coefficient equations from t = 0 to t_end cycles.
/// Throws NormDrift as soon as a sample leaves 1 +- cfg.norm_guard; the state is never renormalized.
TrajectoryRecord propagate(const ExpansionCoefficients& initial, const CoefficientSystem& system, double t_end,
                           const IntegratorConfig& cfg = {}, const PropagationOptions& opts = {});

TrajectoryRecord propagate(const ExpansionCoefficients& initial, const LatticeBasis& basis, const ModelParams& params,
                           double t_end, const IntegratorConfig& cfg = {}, const PropagationOptions& opts = {});

/// Single-label model: one coherent state per branch, both evolving along their own label,
///   i dc+/dt = (omega0/2) <phi+(t)|phi-(t)> c-,  i dc-/dt = (omega0/2) <phi-(t)|phi+(t)> c+,
/// from c+ = c- = 1/sqrt(2). Snapshots hold 1-element vectors.
TrajectoryRecord two_state_propagate(cplx alpha0, const ModelParams& params, double t_end,
                                     const IntegratorConfig& cfg = {}, const PropagationOptions& opts = {});

/// <phi+(t)|phi-(t)> of the single-label model, branch phases included:
///   exp(-2 gamma^2 |s|^2 - 4 i gamma Im(s alpha0)).
cplx two_state_coupling(cplx alpha0, const ModelParams& params, double t_cycles);

/// <Psi(a.t)|Psi(b.t)> for two lattice states on the same basis.
cplx state_overlap(const StateCoefficients& a, const StateCoefficients& b, const LatticeBasis& basis,
                   const ModelParams& params);

/// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const StateCoefficients& a, const StateCoefficients& b, const LatticeBasis& basis,
                const ModelParams& params);

}  // namespace hhg
