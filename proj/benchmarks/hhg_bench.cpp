#include <benchmark/benchmark.h>

#include <cmath>

#include "hhg/dynamics.hpp"
#include "hhg/fock_oracle.hpp"
#include "hhg/observables.hpp"
#include "hhg/phase_space.hpp"

namespace {

using namespace hhg;

const ModelParams kParams{1.0, 2.2, 0.05};

void BM_CoefficientRhs(benchmark::State& state) {
  const cplx a0(2.0e5, 0.0);
  const LatticeBasis b = build_lattice(a0, static_cast<int>(state.range(0)), LatticeAnchor::initial_state);
  const CoefficientSystem sys(b, ModelParams{1.0, 2.2, 1e-5});
  const ExpansionCoefficients c = expand_initial(a0, b);
  CVector y(2 * sys.size());
  y << c.plus, c.minus;
  CVector dy(y.size());
  double t = 0.0;
  for (auto _ : state) {
    sys.rhs(t, y, dy);
    t += 1e-3;
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_CoefficientRhs)->Arg(3)->Arg(5)->Arg(7);

void BM_DynamicOverlaps(benchmark::State& state) {
  const LatticeBasis b = build_lattice(cplx(2.0, 0.0), static_cast<int>(state.range(0)), LatticeAnchor::initial_state);
  double t = 0.1;
  for (auto _ : state) {
    OverlapSet o = dynamic_overlaps(b, kParams, t);
    t += 1e-3;
    benchmark::DoNotOptimize(o.pm.data());
  }
}
BENCHMARK(BM_DynamicOverlaps)->Arg(3)->Arg(5);

void BM_RegularizedInverse(benchmark::State& state) {
  const LatticeBasis b = build_lattice(cplx(2.0, 0.0), static_cast<int>(state.range(0)), LatticeAnchor::initial_state);
  const CMatrix n = static_overlap(b);
  for (auto _ : state) benchmark::DoNotOptimize(regularized_inverse(n).data());
}
BENCHMARK(BM_RegularizedInverse)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_WignerField(benchmark::State& state) {
  const cplx a0(2.0, 0.0);
  const LatticeBasis b = build_lattice(a0, 5, LatticeAnchor::initial_state);
  PropagationOptions opts;
  opts.samples_per_cycle = 64;
  opts.snapshot_times = {0.5};
  const TrajectoryRecord r = propagate(expand_initial(a0, b), b, kParams, 0.5, {}, opts);
  const StateCoefficients& s = r.snapshots.at(0);
  const int n = static_cast<int>(state.range(0));
  const PhaseGrid g = default_grid(s, b, kParams, n);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_field(s, b, kParams, g).values.data());
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_WignerField)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PowerSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  TimeSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 4096.0;
    s.times.push_back(t);
    s.values.push_back(std::sin(10.0 * std::sin(kTwoPi * t)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(power_spectrum(s).power.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PowerSpectrum)->Arg(20 * 4096)->Unit(benchmark::kMillisecond);

void BM_FockPropagation(benchmark::State& state) {
  const FockTruncation trunc{static_cast<int>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate_fock(cplx(2.0, 0.0), kParams, 1.0, trunc, 256).sigma_x.data());
}
BENCHMARK(BM_FockPropagation)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
