#pragma once

#include <array>

#include "hhg/types.hpp"

namespace hhg {

/// Physical constants of the two-level atom coupled to a single field mode (hbar = 1).
///
/// `Omega` is the Rabi coupling in H = (omega0/2) sigma_z + omega a^dag a + Omega sigma_x (a + a^dag).
/// Time arguments everywhere in the library are in optical cycles T = 2 pi / omega.
struct ModelParams {
  double omega = 1.0;
  double omega0 = 2.2;
  double Omega = 0.0;

  /// Shift of the displaced-oscillator centres, gamma = -Omega / omega.
  double gamma() const { return -Omega / omega; }
  /// Length of one optical cycle in physical time units.
  double period() const { return kTwoPi / omega; }

  /// Throws InvalidArgument unless omega > 0, omega0 >= 0 and everything is finite.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// sigma_x eigenstate labels.
enum class Branch { plus, minus };

inline constexpr std::array<Branch, 2> kBranches{Branch::plus, Branch::minus};

constexpr int sigma_x_eigenvalue(Branch b) { return b == Branch::plus ? 1 : -1; }

constexpr const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// Coherent label and accumulated phase of a state evolved by the strong-field Hamiltonian.
struct BranchLabel {
  Branch branch = Branch::plus;
  cplx alpha{};
  double delta = 0.0;
};

/// e = exp(-i 2 pi t) and s = 1 - e for t in cycles. The argument is reduced to the
/// nearest integer cycle first, so integer t gives e == 1 and s == 0 exactly.
struct CyclePhase {
  cplx e;
  cplx s;
};

CyclePhase cycle_phase(double t_cycles);

/// alpha_{+-}(t) = +-gamma + (alpha -+ gamma) e^{-i omega t},
/// delta_{+-}(t) = +-gamma Im[alpha - (alpha -+ gamma) e^{-i omega t}].
BranchLabel evolve_label(cplx alpha, Branch branch, const ModelParams& params, double t_cycles);

/// Im(conj(a) * b) reduced to (-pi, pi].
///
/// The product is formed with error-free transformations and reduced with a two-word
/// 2 pi, so the only error left is the rounding already present in a and b
/// (about |a||b| * eps radians).
double reduced_im_product(cplx a, cplx b);

/// <a|b> for coherent states, written as exp(-|a-b|^2/2) exp(i Im(a* b)). Safe for
/// labels of magnitude up to ~1e6 where exp(a* b) would overflow.
cplx coherent_overlap(cplx a, cplx b);

}  // namespace hhg
