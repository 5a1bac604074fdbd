#pragma once

#include <vector>

#include "hhg/model.hpp"
#include "hhg/ode.hpp"
#include "hhg/types.hpp"

namespace hhg {

/// Largest |alpha0| the photon-number reference accepts.
inline constexpr double kFockMaxAlpha = 10.0;

struct FockTruncation {
  int n_max = 60;
  double tail_tol = 1e-8;  ///< max population allowed in the top 10% of levels

  void validate() const;
  /// ceil(|alpha0|^2 + 6 |alpha0| + 20).
  static FockTruncation for_alpha(cplx alpha0, double tail_tol = 1e-8);
};

/// Amplitudes over {|+>, |->} x {|0> .. |n_max>}.
struct FockState {
  double t = 0.0;  ///< cycles
  CVector plus;
  CVector minus;

  int n_max() const { return static_cast<int>(plus.size()) - 1; }
  double norm() const { return plus.squaredNorm() + minus.squaredNorm(); }
  double sigma_x() const { return plus.squaredNorm() - minus.squaredNorm(); }
  /// Population in the top ceil(10%) of photon levels.
  double tail_population() const;
};

/// Initial atomic state of the reference runs.
enum class AtomInit {
  ground,  ///< (|+> + |->) / sqrt(2), the state the lattice runs start from
  plus,
  minus,
};

/// <n|D(beta)|m> from the associated-Laguerre closed form, prefactors in logs.
/// Accurate for n, m up to a few hundred and moderate |beta|.
cplx displacement_matrix_element(int n, int m, cplx beta);

/// (n_max+1)^2 matrix of <n|D(beta)|m>.
CMatrix displacement_matrix(int n_max, cplx beta);

/// <n|alpha>, n = 0 .. n_max.
CVector coherent_amplitudes(cplx alpha, int n_max);

FockState coherent_fock_state(cplx alpha0, int n_max, AtomInit atom = AtomInit::ground);

/// E_n = omega (n - Omega^2 / omega^2).
double sfa_eigenenergy(int n, const ModelParams& params);

/// omega a^dag a + Omega sigma_x (a + a^dag) in the basis index = b * (n_max+1) + n, b = 0 for |+>.
RMatrix sfa_hamiltonian(const ModelParams& params, int n_max);

/// sfa_hamiltonian plus (omega0/2)(|+><-| + |-><+|).
RMatrix full_hamiltonian(const ModelParams& params, int n_max);

struct FockTrajectory {
  std::vector<double> times;  ///< cycles
  std::vector<double> sigma_x;
  std::vector<double> p_plus;
  std::vector<double> p_minus;
  std::vector<double> norm;
  std::vector<FockState> snapshots;
  double max_tail = 0.0;
};

/// Exact propagation of |atom>|alpha0> under the truncated full Hamiltonian by
/// diagonalization, sampled on i / samples_per_cycle.
/// Throws InvalidArgument for |alpha0| > 10 and TailOverflow when |alpha0|^2 + 6|alpha0| > n_max
/// or when a sample puts more than tail_tol in the top levels.
FockTrajectory propagate_fock(cplx alpha0, const ModelParams& params, double t_end, const FockTruncation& trunc,
                              double samples_per_cycle = 4096.0, AtomInit atom = AtomInit::ground,
                              const std::vector<double>& snapshot_times = {});

/// Coefficient equations in the displaced number-state basis of each branch:
///   i db+_n/dt = (omega0/2) sum_m b-_m <n|D(-2 gamma)|m> e^{-i omega (m-n) t}, and mirrored.
class DisplacedBasisSystem {
 public:
  DisplacedBasisSystem(const ModelParams& params, int n_max);

  /// d/dt (per cycle) of y = [b+; b-].
  void rhs(double t_cycles, const CVector& y, CVector& dydt) const;

  /// b+-_n at t = 0 for |g>|alpha0>.
  CVector initial(cplx alpha0) const;

 private:
  ModelParams params_;
  int n_max_;
  CMatrix to_plus_;   // <n|D(-2 gamma)|m>
  CMatrix to_minus_;  // <n|D(+2 gamma)|m>
};

/// Physical-time derivative of the displaced-basis amplitudes.
CVector displaced_basis_rhs(double t_cycles, const CVector& b, const ModelParams& params, int n_max);

/// Same observables as propagate_fock, integrated in the displaced picture.
FockTrajectory propagate_displaced(cplx alpha0, const ModelParams& params, double t_end, const FockTruncation& trunc,
                                   const IntegratorConfig& cfg = {}, double samples_per_cycle = 4096.0);

}  // namespace hhg
