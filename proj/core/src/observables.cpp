#include "hhg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double hermitian_form(const CVector& c, const CMatrix& m) {
  const cplx v = c.dot(m * c);
  const double scale = std::max(1.0, std::abs(v));
  if (!(std::abs(v.imag()) <= 1e-10 * scale))
    throw ConsistencyError("Hermitian form has imaginary residue " + format_number(v.imag()));
  return v.real();
}

double branch_probability(const StateCoefficients& state, const OverlapSet& overlaps, Branch branch) {
  return branch == Branch::plus ? hermitian_form(state.plus, overlaps.pp) : hermitian_form(state.minus, overlaps.mm);
}

double sigma_x_expectation(const StateCoefficients& state, const OverlapSet& overlaps) {
  return branch_probability(state, overlaps, Branch::plus) - branch_probability(state, overlaps, Branch::minus);
}

double TimeSeries::dt() const { return (times.back() - times.front()) / static_cast<double>(times.size() - 1); }

void TimeSeries::validate() const {
  if (times.size() != values.size()) throw InvalidArgument("time series has mismatched lengths");
  if (times.size() < 2) throw InvalidArgument("time series needs at least two samples");
  const double step = dt();
  if (!(step > 0.0)) throw NonUniformSeries("time series is not increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - step) > 1e-9 * step)
      throw NonUniformSeries("non-uniform spacing at sample " + std::to_string(i));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NonFiniteError("non-finite value at sample " + std::to_string(i));
  }
}

std::string to_string(Window w) { return w == Window::hann ? "hann" : "none"; }

Window window_from_string(const std::string& s) {
  if (s == "hann") return Window::hann;
  if (s == "none") return Window::none;
  throw InvalidArgument("unknown window '" + s + "' (expected hann or none)");
}

Spectrum power_spectrum(const TimeSeries& series, Window window) {
  series.validate();
  const std::size_t n = series.values.size();
  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (window == Window::hann) w = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    x[i] = (series.values[i] - mean) * w;
  }

  const std::size_t bins = n / 2 + 1;
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum spec;
  spec.window = window;
  spec.order.resize(bins);
  spec.power.resize(bins);
  const double span = static_cast<double>(n) * series.dt();
  for (std::size_t j = 0; j < bins; ++j) {
    const double p = (out[j][0] * out[j][0] + out[j][1] * out[j][1]) / static_cast<double>(n);
    const bool single = j == 0 || (n % 2 == 0 && j == n / 2);
    spec.power[j] = single ? p : 2.0 * p;
    spec.order[j] = static_cast<double>(j) / span;
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return spec;
}

SpectrumFeatures detect_features(const Spectrum& spectrum) {
  const auto& ord = spectrum.order;
  const auto& pow = spectrum.power;
  if (ord.empty() || ord.size() != pow.size()) throw InvalidArgument("spectrum is empty or malformed");

  double p_max = 0.0;
  for (std::size_t j = 0; j < ord.size(); ++j) {
    if (ord[j] >= 0.5) p_max = std::max(p_max, pow[j]);
  }

  SpectrumFeatures f;
  if (p_max > 0.0) {
    const double floor = p_max * 1e-10;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < ord.size(); ++j) {
      if (ord[j] < 0.5 || !(pow[j] > floor)) continue;
      while (ord[lo] < ord[j] - 0.5) ++lo;
      while (hi + 1 < ord.size() && ord[hi + 1] <= ord[j] + 0.5) ++hi;
      bool is_max = true;
      for (std::size_t i = lo; i <= hi && is_max; ++i) {
        // Strict on the left so equal-height neighbours yield one candidate.
        if (pow[i] > pow[j] || (i < j && pow[i] == pow[j])) is_max = false;
      }
      if (!is_max) continue;
      if (!f.candidates.empty() && ord[j] - f.candidates.back().order <= 0.5) continue;
      f.candidates.push_back({ord[j], pow[j]});
    }
  }
  if (f.candidates.size() < 3)
    throw NoPlateau("spectrum has " + std::to_string(f.candidates.size()) + " harmonic peak(s), need at least 3");

  double cutoff = f.candidates.back().order;
  double plateau = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> levels;
    for (const auto& c : f.candidates) {
      if (c.order >= 2.0 && c.order <= cutoff) levels.push_back(std::log10(c.power));
    }
    if (levels.empty()) {
      for (const auto& c : f.candidates) {
        if (c.order <= cutoff) levels.push_back(std::log10(c.power));
      }
    }
    plateau = median(levels);
    double next = f.candidates.front().order;
    for (const auto& c : f.candidates) {
      if (std::log10(c.power) >= plateau - 1.0) next = c.order;
    }
    if (next == cutoff) break;
    cutoff = next;
  }
  f.plateau_log10 = plateau;
  f.cutoff_order = cutoff;
  for (const auto& c : f.candidates) {
    if (c.order <= cutoff && std::log10(c.power) >= plateau - 1.0) f.peaks.push_back(c);
  }
  return f;
}

}  // namespace hhg
