#include "hhg/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

constexpr Eigen::Index kPairChunk = 512;

// One retained (k, m) term of a branch: labels, Gram phase and coefficient weight.
struct Pair {
  cplx lk;
  cplx lm;
  cplx weight;  // c_k* c_m exp(i arg N_km)
};

std::vector<Pair> collect_pairs(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params) {
  const CMatrix n = static_overlap(basis);
  double c_max = 0.0;
  for (Eigen::Index k = 0; k < state.plus.size(); ++k)
    c_max = std::max({c_max, std::abs(state.plus(k)), std::abs(state.minus(k))});
  const double threshold = 1e-13 * c_max * c_max;

  std::vector<Pair> pairs;
  for (Branch b : kBranches) {
    const CVector& c = b == Branch::plus ? state.plus : state.minus;
    const std::vector<cplx> labels = evolved_labels(basis, params, b, state.t);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const auto ki = static_cast<Eigen::Index>(k);
      if (std::abs(c(ki)) * c_max < threshold) continue;
      for (std::size_t m = 0; m < labels.size(); ++m) {
        const auto mi = static_cast<Eigen::Index>(m);
        const double w = std::abs(c(ki)) * std::abs(c(mi)) * std::abs(n(ki, mi));
        if (w < threshold) continue;
        pairs.push_back({labels[k], labels[m], std::conj(c(ki)) * c(mi) * std::polar(1.0, std::arg(n(ki, mi)))});
      }
    }
  }
  return pairs;
}

void check_size(const StateCoefficients& state, const LatticeBasis& basis) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (state.plus.size() != k || state.minus.size() != k)
    throw InvalidArgument("state coefficients do not match the lattice size");
}

// exp(-2 (x - z)^2 - (2 Im z)^2 / 2) = exp(-2 (x - Re z)^2 + 4 i Im z (x - Re z))
cplx gaussian_factor(double x, cplx z) {
  const double d = x - z.real();
  return std::polar(std::exp(-2.0 * d * d), 4.0 * z.imag() * d);
}

std::vector<double> trapezoid_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  w.front() = 0.5;
  w.back() = 0.5;
  return w;
}

}  // namespace

void PhaseGrid::validate() const {
  if (!(re_max > re_min) || !(im_max > im_min)) throw InvalidArgument("phase grid needs max > min on both axes");
  if (n_re < 2 || n_im < 2) throw InvalidArgument("phase grid needs at least 2 samples per axis");
}

PhaseGrid grid_around(const std::vector<cplx>& centres, double margin, int n) {
  if (centres.empty()) throw InvalidArgument("grid_around needs at least one centre");
  PhaseGrid g;
  g.re_min = g.re_max = centres.front().real();
  g.im_min = g.im_max = centres.front().imag();
  for (const cplx& c : centres) {
    g.re_min = std::min(g.re_min, c.real());
    g.re_max = std::max(g.re_max, c.real());
    g.im_min = std::min(g.im_min, c.imag());
    g.im_max = std::max(g.im_max, c.imag());
  }
  g.re_min -= margin;
  g.re_max += margin;
  g.im_min -= margin;
  g.im_max += margin;
  g.n_re = n;
  g.n_im = n;
  return g;
}

GaussianCenterPair z_coefficients(cplx alpha_k, cplx alpha_m) {
  const cplx z1 = 0.5 * cplx(alpha_k.imag() + alpha_m.imag(), alpha_k.real() - alpha_m.real());
  const cplx z2 = 0.5 * cplx(alpha_k.real() + alpha_m.real(), alpha_m.imag() - alpha_k.imag());
  return {z1, z2};
}

std::vector<cplx> weighted_labels(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params) {
  check_size(state, basis);
  const double c_max = std::max(state.plus.cwiseAbs().maxCoeff(), state.minus.cwiseAbs().maxCoeff());
  std::vector<cplx> out;
  for (Branch b : kBranches) {
    const CVector& c = b == Branch::plus ? state.plus : state.minus;
    const std::vector<cplx> labels = evolved_labels(basis, params, b, state.t);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (std::abs(c(static_cast<Eigen::Index>(k))) >= 1e-8 * c_max) out.push_back(labels[k]);
    }
  }
  return out;
}

PhaseGrid default_grid(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params, int n) {
  return grid_around(weighted_labels(state, basis, params), kDefaultGridMargin, n);
}

WignerField wigner_field(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                         const PhaseGrid& grid) {
  grid.validate();
  check_size(state, basis);
  const std::vector<Pair> pairs = collect_pairs(state, basis, params);

  CMatrix acc = CMatrix::Zero(grid.n_im, grid.n_re);
  const auto total = static_cast<Eigen::Index>(pairs.size());
  for (Eigen::Index start = 0; start < total; start += kPairChunk) {
    const Eigen::Index len = std::min(kPairChunk, total - start);
    CMatrix a(grid.n_im, len);
    CMatrix bt(len, grid.n_re);
    for (Eigen::Index p = 0; p < len; ++p) {
      const Pair& pr = pairs[static_cast<std::size_t>(start + p)];
      const auto [z1, z2] = z_coefficients(pr.lk, pr.lm);
      for (int j = 0; j < grid.n_im; ++j) a(j, p) = pr.weight * gaussian_factor(grid.im(j), z1);
      for (int i = 0; i < grid.n_re; ++i) bt(p, i) = gaussian_factor(grid.re(i), z2);
    }
    acc.noalias() += a * bt;
  }

  WignerField f;
  f.grid = grid;
  f.t = state.t;
  f.support = weighted_labels(state, basis, params);
  f.values.resize(grid.n_im, grid.n_re);
  for (int j = 0; j < grid.n_im; ++j) {
    for (int i = 0; i < grid.n_re; ++i) {
      const cplx v = (2.0 / kPi) * acc(j, i);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NonFiniteError("non-finite Wigner sample at alpha=" + format_number(grid.re(i)) + "+" +
                             format_number(grid.im(j)) + "i");
      if (std::abs(v.imag()) > 1e-8)
        throw ConsistencyError("Wigner sample at alpha=" + format_number(grid.re(i)) + "+" +
                               format_number(grid.im(j)) + "i has imaginary part " + format_number(v.imag()));
      f.values(j, i) = v.real();
    }
  }
  return f;
}

WignerField coherent_wigner(cplx beta, const PhaseGrid& grid) {
  grid.validate();
  WignerField f;
  f.grid = grid;
  f.support = {beta};
  f.values.resize(grid.n_im, grid.n_re);
  for (int j = 0; j < grid.n_im; ++j) {
    for (int i = 0; i < grid.n_re; ++i)
      f.values(j, i) = (2.0 / kPi) * std::exp(-2.0 * std::norm(cplx(grid.re(i), grid.im(j)) - beta));
  }
  return f;
}

CMatrix characteristic_grid(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                            double extent, int n) {
  check_size(state, basis);
  if (!(extent > 0.0) || n < 2) throw InvalidArgument("characteristic grid needs extent > 0 and n >= 2");
  const std::vector<Pair> pairs = collect_pairs(state, basis, params);
  auto axis = [&](int i) { return -extent + 2.0 * extent * i / (n - 1); };

  // <phi_k| D(xi) |phi_m> = e^{i arg N_km} exp(-|d - xi|^2 / 2) exp(i [v Re S - u Im S]),
  // d = a_k - a_m, S = a_k + a_m, xi = u + i v.
  CMatrix acc = CMatrix::Zero(n, n);
  const auto total = static_cast<Eigen::Index>(pairs.size());
  for (Eigen::Index start = 0; start < total; start += kPairChunk) {
    const Eigen::Index len = std::min(kPairChunk, total - start);
    CMatrix fu(n, len);
    CMatrix gv(len, n);
    for (Eigen::Index p = 0; p < len; ++p) {
      const Pair& pr = pairs[static_cast<std::size_t>(start + p)];
      const cplx d = pr.lk - pr.lm;
      const cplx s = pr.lk + pr.lm;
      for (int i = 0; i < n; ++i) {
        const double u = axis(i);
        const double du = d.real() - u;
        fu(i, p) = pr.weight * std::polar(std::exp(-0.5 * du * du), -u * s.imag());
        const double v = u;  // same axis for the imaginary part
        const double dv = d.imag() - v;
        gv(p, i) = std::polar(std::exp(-0.5 * dv * dv), v * s.real());
      }
    }
    acc.noalias() += fu * gv;
  }
  return acc;
}

cplx characteristic_function(const StateCoefficients& state, const LatticeBasis& basis, const ModelParams& params,
                             cplx xi) {
  check_size(state, basis);
  cplx sum = 0.0;
  for (const Pair& pr : collect_pairs(state, basis, params)) {
    const cplx d = pr.lk - pr.lm;
    const cplx s = pr.lk + pr.lm;
    const double phase = xi.imag() * s.real() - xi.real() * s.imag();
    sum += pr.weight * std::polar(std::exp(-0.5 * std::norm(d - xi)), phase);
  }
  return sum;
}

WignerField wigner_via_characteristic(const StateCoefficients& state, const LatticeBasis& basis,
                                      const ModelParams& params, const PhaseGrid& grid, double extent, int n) {
  grid.validate();
  const CMatrix chi = characteristic_grid(state, basis, params, extent, n);
  const double h = 2.0 * extent / (n - 1);
  const std::vector<double> w = trapezoid_weights(n);
  auto axis = [&](int i) { return -extent + h * i; };

  // exp(alpha xi* - alpha* xi) = exp(2 i (y u - x v)) for alpha = x + i y, xi = u + i v.
  CMatrix left(grid.n_im, n);
  for (int j = 0; j < grid.n_im; ++j) {
    for (int i = 0; i < n; ++i) left(j, i) = std::polar(w[static_cast<std::size_t>(i)] * h, 2.0 * grid.im(j) * axis(i));
  }
  CMatrix right(n, grid.n_re);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < grid.n_re; ++i)
      right(k, i) = std::polar(w[static_cast<std::size_t>(k)] * h, -2.0 * grid.re(i) * axis(k));
  }
  const CMatrix out = left * chi * right;

  WignerField f;
  f.grid = grid;
  f.t = state.t;
  f.support = weighted_labels(state, basis, params);
  f.values = out.real() / (kPi * kPi);
  return f;
}

WignerIntegral wigner_integral(const WignerField& field) {
  const PhaseGrid& g = field.grid;
  g.validate();
  double sum = 0.0;
  for (int j = 0; j < g.n_im; ++j) {
    const double wj = (j == 0 || j == g.n_im - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.n_re; ++i) {
      const double wi = (i == 0 || i == g.n_re - 1) ? 0.5 : 1.0;
      sum += wi * wj * field.values(j, i);
    }
  }
  WignerIntegral r;
  r.value = sum * g.d_re() * g.d_im();
  for (const cplx& c : field.support) {
    if (c.real() - g.re_min < kSupportMargin || g.re_max - c.real() < kSupportMargin ||
        c.imag() - g.im_min < kSupportMargin || g.im_max - c.imag() < kSupportMargin) {
      r.support_clipped = true;
      break;
    }
  }
  return r;
}

std::vector<LocalMaximum> find_local_maxima(const WignerField& field, double min_value) {
  const PhaseGrid& g = field.grid;
  const RMatrix& v = field.values;
  std::vector<LocalMaximum> out;
  for (int j = 1; j + 1 < g.n_im; ++j) {
    for (int i = 1; i + 1 < g.n_re; ++i) {
      const double c = v(j, i);
      if (!(c > min_value)) continue;
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          // Ties go to the first point in row-major order.
          const bool before = dj < 0 || (dj == 0 && di < 0);
          const double nb = v(j + dj, i + di);
          if ((di != 0 || dj != 0) && (nb > c || (before && nb == c))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      auto vertex = [](double lo, double mid, double hi) {
        const double den = lo - 2.0 * mid + hi;
        return den < 0.0 ? 0.5 * (lo - hi) / den : 0.0;
      };
      const double oi = vertex(v(j, i - 1), c, v(j, i + 1));
      const double oj = vertex(v(j - 1, i), c, v(j + 1, i));
      out.push_back({cplx(g.re(i) + oi * g.d_re(), g.im(j) + oj * g.d_im()), c});
    }
  }
  std::sort(out.begin(), out.end(), [](const LocalMaximum& a, const LocalMaximum& b) { return a.value > b.value; });
  return out;
}

}  // namespace hhg
