#pragma once

#include <vector>

#include "hhg/lattice.hpp"
#include "hhg/model.hpp"
#include "hhg/state.hpp"

namespace hhg {

/// Rectangular sampling of the complex plane; alpha = re + i im.
struct PhaseGrid {
  double re_min = -5.0;
  double re_max = 5.0;
  double im_min = -5.0;
  double im_max = 5.0;
  int n_re = 512;
  int n_im = 512;

  void validate() const;
  double re(int i) const { return re_min + (re_max - re_min) * i / (n_re - 1); }
  double im(int j) const { return im_min + (im_max - im_min) * j / (n_im - 1); }
  double d_re() const { return (re_max - re_min) / (n_re - 1); }
  double d_im() const { return (im_max - im_min) / (n_im - 1); }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Margin kept between a Gaussian centre and the grid edge: four widths of sigma = 1/2.
inline constexpr double kSupportMargin = 2.0;

/// Margin of default grids: six widths, so clipping costs ~1e-8 of the integral.
inline constexpr double kDefaultGridMargin = 3.0;

/// Bounding box of `centres` widened by `margin` on every side.
PhaseGrid grid_around(const std::vector<cplx>& centres, double margin = kSupportMargin, int n = 512);

struct WignerField {
  PhaseGrid grid;
  RMatrix values;  ///< n_im x n_re; values(j, i) at re(i) + i im(j)
  double t = 0.0;
  std::vector<cplx> support;  ///< labels carrying non-negligible weight
};

/// Centres of the separable Gaussian factors of one (k, m) pair:
/// exp(-2 (a* - a_k*)(a - a_m)) = exp(-2 (Im a - z1)^2) exp(-2 (Re a - z2)^2).
struct GaussianCenterPair {
  cplx z1;
  cplx z2;
};

GaussianCenterPair z_coefficients(cplx alpha_k, cplx alpha_m);

/// Labels of every lattice point on both branches whose coefficient is at least 1e-8 of the largest.
std::vector<cplx> weighted_labels(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params);

/// Default grid for a state: its weighted labels plus kDefaultGridMargin, 512 x 512.
PhaseGrid default_grid(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                       int n = 512);

/// Reduced-field Wigner function as a double sum of Gaussians over lattice pairs.
/// Pairs whose weight |c_k c_m N_km| falls below 1e-13 of max|c|^2 are skipped.
/// Throws NonFiniteError naming the grid point if a sample is non-finite and
/// ConsistencyError if a sample keeps an imaginary part above 1e-8.
WignerField wigner_field(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                         const PhaseGrid& grid);

/// Wigner function of the coherent state |beta>: (2/pi) exp(-2 |alpha - beta|^2).
WignerField coherent_wigner(cplx beta, const PhaseGrid& grid);

/// chi(xi) = <Psi| D(xi) |Psi> with the atom traced out.
cplx characteristic_function(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                             cplx xi);

/// chi sampled on a square grid u + i v, u, v in [-extent, extent]; result(i, j) at u_i + i v_j.
CMatrix characteristic_grid(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                            double extent, int n);

/// W(alpha) = pi^-2 int chi(xi) exp(alpha xi* - alpha* xi) d^2 xi by trapezoidal quadrature of chi
/// over |Re xi|, |Im xi| <= extent with n points per axis.
///
/// chi carries a Gaussian of unit width at every label difference lambda_k - lambda_m, and
/// evolved lattice states spread weight over the whole lattice, so the window must reach well
/// past the lattice spacing. The defaults hold 1e-8 agreement with wigner_field for N = 5.
WignerField wigner_via_characteristic(const StateCoefficients& state, const LatticeBasis& basis,
                                      const ModelParams& params, const PhaseGrid& grid, double extent = 12.0,
                                      int n = 481);

struct WignerIntegral {
  double value = 0.0;
  bool support_clipped = false;  ///< a support label lies within kSupportMargin of the edge
};

/// Trapezoidal integral over the grid.
WignerIntegral wigner_integral(const WignerField& field);

struct LocalMaximum {
  cplx position;
  double value = 0.0;
};

/// Grid points larger than their eight neighbours and above min_value, refined by a
/// parabola through the neighbours on each axis. Sorted by decreasing value.
std::vector<LocalMaximum> find_local_maxima(const WignerField& field, double min_value);

}  // namespace hhg
