#include "hhg/model.hpp"

#include <cmath>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

// 2 pi split into the nearest double and the remainder.
constexpr double kTwoPiHi = 6.283185307179586232;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(omega0) || !std::isfinite(Omega))
    throw InvalidArgument("model parameters must be finite");
  if (omega <= 0.0) throw InvalidArgument("omega must be positive, got " + format_number(omega));
  if (omega0 < 0.0) throw InvalidArgument("omega0 must be non-negative, got " + format_number(omega0));
}

CyclePhase cycle_phase(double t_cycles) {
  const double r = t_cycles - std::nearbyint(t_cycles);
  const double theta = kTwoPi * r;
  const double sn = std::sin(theta);
  const double half = std::sin(0.5 * theta);
  // 1 - cos(theta) = 2 sin^2(theta/2) avoids cancellation for small theta.
  return {cplx(std::cos(theta), -sn), cplx(2.0 * half * half, sn)};
}

BranchLabel evolve_label(cplx alpha, Branch branch, const ModelParams& params, double t_cycles) {
  const double g = sigma_x_eigenvalue(branch) * params.gamma();
  const auto [e, s] = cycle_phase(t_cycles);
  // alpha e + g s == g + (alpha - g) e, and alpha - (alpha - g) e == alpha s + g e.
  const cplx label = alpha * e + g * s;
  const double delta = g * ((alpha * s).imag() + g * e.imag());
  return {branch, label, delta};
}

double reduced_im_product(cplx a, cplx b) {
  const double p1 = a.real() * b.imag();
  const double e1 = std::fma(a.real(), b.imag(), -p1);
  const double p2 = a.imag() * b.real();
  const double e2 = std::fma(a.imag(), b.real(), -p2);

  // two-sum of p1 - p2
  const double hi = p1 - p2;
  const double bv = hi - p1;
  const double e3 = (p1 - (hi - bv)) + (-p2 - bv);
  const double lo = e3 + (e1 - e2);

  const double k = std::nearbyint(hi / kTwoPi);
  double r = std::fma(-k, kTwoPiHi, hi);
  r = std::fma(-k, kTwoPiLo, r);
  r += lo;
  if (r > kPi) {
    r -= kTwoPiHi;
  } else if (r <= -kPi) {
    r += kTwoPiHi;
  }
  return r;
}

cplx coherent_overlap(cplx a, cplx b) {
  const double mag = std::exp(-0.5 * std::norm(a - b));
  return std::polar(mag, reduced_im_product(a, b));
}

}  // namespace hhg
