#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hhg/lattice.hpp"
#include "hhg/state.hpp"

namespace hhg {

/// <sigma_x> = (c+)^dag N++ c+ - (c-)^dag N-- c-.
double sigma_x_expectation(const StateCoefficients& state, const OverlapSet& overlaps);

/// P_b = (c_b)^dag N^{bb} c_b.
double branch_probability(const StateCoefficients& state, const OverlapSet& overlaps, Branch branch);

/// Real part of c^dag M c for Hermitian M. Throws ConsistencyError if the imaginary residue exceeds 1e-10.
double hermitian_form(const CVector& c, const CMatrix& m);

/// Uniformly sampled real signal, times in cycles.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  /// Throws NonUniformSeries if the spacing varies by more than 1e-9 of dt, InvalidArgument on
  /// size mismatch or fewer than two samples, NonFiniteError on non-finite values.
  void validate() const;
  double dt() const;
};

enum class Window { hann, none };

std::string to_string(Window w);
/// Parses "hann" or "none"; throws InvalidArgument otherwise.
Window window_from_string(const std::string& s);

/// One-sided power spectrum on the harmonic-order axis (frequency / omega).
///
/// The series is mean-subtracted, windowed and transformed; power is |X_j|^2 / n with the
/// non-DC, non-Nyquist bins doubled, so sum(power) equals the energy of the windowed series.
struct Spectrum {
  std::vector<double> order;
  std::vector<double> power;
  Window window = Window::hann;
  std::size_t dc_bin = 0;  ///< kept, but holds only what survived mean subtraction
};

Spectrum power_spectrum(const TimeSeries& series, Window window = Window::hann);

struct SpectrumPeak {
  double order = 0.0;
  double power = 0.0;
};

struct SpectrumFeatures {
  std::vector<SpectrumPeak> candidates;  ///< local maxima considered
  std::vector<SpectrumPeak> peaks;       ///< plateau peaks
  double plateau_log10 = 0.0;
  double cutoff_order = 0.0;
};

/// Peak, plateau and cutoff extraction.
///
/// Candidates are bins at order >= 0.5 that are the largest within +-0.5 orders and lie
/// within 100 dB of the strongest bin. The plateau level is the median log10 power of the
/// candidates between order 2 and the cutoff; the cutoff is the highest candidate within
/// 10 dB of the plateau. The two are iterated to a fixed point. Throws NoPlateau with fewer
/// than three candidates.
SpectrumFeatures detect_features(const Spectrum& spectrum);

}  // namespace hhg
