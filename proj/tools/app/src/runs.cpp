#include "hhg/app/runs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "hhg/app/csv.hpp"
#include "hhg/fock_oracle.hpp"
#include "hhg/observables.hpp"
#include "hhg/phase_space.hpp"

#ifndef HHG_VERSION
#define HHG_VERSION "unknown"
#endif

namespace hhg::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCutoffRule =
    "candidates: local maxima within +-0.5 orders above max*1e-10; plateau: median log10 power of candidates in "
    "[2, cutoff]; cutoff: highest candidate within 10 dB of plateau";

fs::path prepare_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

json base_meta(const RunConfig& cfg, const std::string& subcommand) {
  return {{"version", HHG_VERSION}, {"subcommand", subcommand}, {"time_unit", "cycles"}, {"config", cfg}};
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json trajectory_meta(const TrajectoryRecord& r) {
  return {{"norm_drift_max", r.max_norm_drift},
          {"samples", r.times.size()},
          {"steps", r.stats.steps},
          {"rhs_evaluations", r.stats.rhs_evaluations}};
}

std::string warning_line(const std::string& kind, const std::string& message) {
  return "warning kind=" + kind + " message=\"" + message + "\"";
}

json features_json(const SpectrumFeatures& f) {
  json peaks = json::array();
  for (const auto& p : f.peaks) peaks.push_back({{"order", p.order}, {"power", p.power}});
  return {{"plateau_log10", f.plateau_log10},
          {"cutoff_order", f.cutoff_order},
          {"peak_count", f.peaks.size()},
          {"candidate_count", f.candidates.size()},
          {"peaks", peaks}};
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const hhg::InvalidArgument*>(&e)) return 2;
  if (dynamic_cast<const hhg::NormDrift*>(&e)) return 3;
  if (dynamic_cast<const ThresholdExceeded*>(&e)) return 5;
  if (dynamic_cast<const hhg::StepUnderflow*>(&e) || dynamic_cast<const hhg::TailOverflow*>(&e) ||
      dynamic_cast<const hhg::NonFiniteError*>(&e) || dynamic_cast<const hhg::ConsistencyError*>(&e))
    return 4;
  return 1;
}

std::string kind_of(const std::exception& e) {
  if (const auto* h = dynamic_cast<const hhg::Error*>(&e)) return std::string(h->kind());
  return "InternalError";
}

WarningSink stderr_warnings() {
  return [](const std::string& line) {
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    std::cerr << line << '\n';
  };
}

std::string time_tag(double t) { return format_double(t); }

Simulation simulate(const RunConfig& cfg, const std::vector<double>& snapshot_times) {
  cfg.validate();
  const ModelParams params = cfg.model();
  PropagationOptions opts;
  opts.samples_per_cycle = cfg.samples_per_cycle;
  opts.snapshot_times = snapshot_times;
  Simulation sim;
  if (cfg.method == Method::two_state) {
    sim.record = two_state_propagate(cfg.alpha0, params, cfg.duration_cycles, cfg.integrator, opts);
    return sim;
  }
  LatticeBasis basis = build_lattice(cfg.alpha0, cfg.lattice.half_size, cfg.lattice.anchor);
  const ExpansionCoefficients init = expand_initial(cfg.alpha0, basis, cfg.lattice.inverse_cutoff);
  const CoefficientSystem system(basis, params, cfg.lattice.inverse_cutoff);
  sim.record = propagate(init, system, cfg.duration_cycles, cfg.integrator, opts);
  sim.basis = std::move(basis);
  return sim;
}

void run_simulate(const RunConfig& cfg, const WarningSink&) {
  std::vector<double> weight_times;
  if (cfg.weights.enabled) {
    if (cfg.method != Method::lattice) throw ConfigError("weights output needs method=lattice");
    weight_times = sample_grid(cfg.duration_cycles, cfg.weights.samples_per_cycle);
  }
  const Simulation sim = simulate(cfg, weight_times);
  const TrajectoryRecord& r = sim.record;
  const fs::path dir = prepare_dir(cfg);

  CsvWriter ts(dir / "timeseries.csv");
  ts.comment("method=" + to_string(cfg.method) + " time unit: optical cycles");
  ts.header({"t_cycles", "sigma_x", "norm", "p_plus", "p_minus"});
  for (std::size_t i = 0; i < r.times.size(); ++i) ts.row({r.times[i], r.sigma_x[i], r.norm[i], r.p_plus[i], r.p_minus[i]});
  ts.close();

  if (cfg.weights.enabled) {
    const LatticeBasis& basis = *sim.basis;
    CsvWriter w(dir / "weights.csv");
    w.comment("w_k = |c+_k|^2 + |c-_k|^2; centre_deficit = 1 - w at the centre point");
    std::vector<std::string> cols{"t_cycles", "centre_deficit"};
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto [m, n] = basis.indices(k);
      cols.push_back("w_" + std::to_string(m) + "_" + std::to_string(n));
    }
    w.header(cols);
    const auto centre = static_cast<Eigen::Index>(basis.center());
    for (const StateCoefficients& s : r.snapshots) {
      std::vector<double> row{s.t, 0.0};
      for (Eigen::Index k = 0; k < s.plus.size(); ++k) row.push_back(std::norm(s.plus(k)) + std::norm(s.minus(k)));
      row[1] = 1.0 - row[2 + static_cast<std::size_t>(centre)];
      w.row(row);
    }
    w.close();
  }

  json meta = base_meta(cfg, "simulate");
  meta["trajectory"] = trajectory_meta(r);
  write_json(dir / "meta.json", meta);
}

void run_wigner(const RunConfig& cfg, const WarningSink& warn) {
  if (cfg.method != Method::lattice) throw ConfigError("wigner needs method=lattice");
  if (cfg.wigner_times.empty()) throw ConfigError("wigner needs at least one entry in 'wigner_times'");
  const double t_last = *std::max_element(cfg.wigner_times.begin(), cfg.wigner_times.end());

  const ModelParams params = cfg.model();
  std::vector<StateCoefficients> states;
  LatticeBasis basis;
  json traj;
  if (t_last > 0.0) {
    RunConfig run = cfg;
    run.duration_cycles = t_last;
    Simulation sim = simulate(run, cfg.wigner_times);
    basis = *sim.basis;
    states = sim.record.snapshots;
    traj = trajectory_meta(sim.record);
  } else {
    cfg.validate();
    basis = build_lattice(cfg.alpha0, cfg.lattice.half_size, cfg.lattice.anchor);
    const ExpansionCoefficients init = expand_initial(cfg.alpha0, basis, cfg.lattice.inverse_cutoff);
    states.assign(cfg.wigner_times.size(), StateCoefficients{0.0, init.plus, init.minus});
  }

  const fs::path dir = prepare_dir(cfg);
  json snaps = json::array();
  for (const StateCoefficients& s : states) {
    const PhaseGrid grid = cfg.grid.fixed ? *cfg.grid.fixed : default_grid(s, basis, params, cfg.grid.points);
    const WignerField w = wigner_field(s, basis, params, grid);
    const WignerIntegral integral = wigner_integral(w);
    const std::string file = "wigner_t" + time_tag(s.t) + ".csv";
    if (integral.support_clipped)
      warn(warning_line("SupportClipped", "grid clips a weighted label at t=" + time_tag(s.t) + " cycles"));

    CsvWriter out(dir / file);
    out.comment("W(re + i im) at t_cycles=" + time_tag(s.t) + "; row j is im[j], column i is re[i]");
    std::vector<double> re(static_cast<std::size_t>(grid.n_re));
    std::vector<double> im(static_cast<std::size_t>(grid.n_im));
    for (int i = 0; i < grid.n_re; ++i) re[static_cast<std::size_t>(i)] = grid.re(i);
    for (int j = 0; j < grid.n_im; ++j) im[static_cast<std::size_t>(j)] = grid.im(j);
    out.labelled_row("re", re);
    out.labelled_row("im", im);
    std::vector<double> row(static_cast<std::size_t>(grid.n_re));
    for (int j = 0; j < grid.n_im; ++j) {
      for (int i = 0; i < grid.n_re; ++i) row[static_cast<std::size_t>(i)] = w.values(j, i);
      out.row(row);
    }
    out.close();

    snaps.push_back({{"t_cycles", s.t},
                     {"file", file},
                     {"integral", integral.value},
                     {"support_clipped", integral.support_clipped},
                     {"max", w.values.maxCoeff()},
                     {"min", w.values.minCoeff()},
                     {"grid", {{"re_min", grid.re_min}, {"re_max", grid.re_max}, {"im_min", grid.im_min},
                               {"im_max", grid.im_max}, {"n_re", grid.n_re}, {"n_im", grid.n_im}}}});
  }
  json meta = base_meta(cfg, "wigner");
  if (!traj.is_null()) meta["trajectory"] = traj;
  meta["snapshots"] = snaps;
  write_json(dir / "meta.json", meta);
}

SpectrumSummary run_spectrum(const RunConfig& cfg, const WarningSink& warn) {
  if (cfg.duration_cycles < 20.0)
    warn(warning_line("ShortDuration", "spectrum over " + time_tag(cfg.duration_cycles) +
                                           " cycles; 20 or more recommended"));
  const Simulation sim = simulate(cfg);
  const TrajectoryRecord& r = sim.record;

  // Drop the closing sample so a periodic signal spans a whole number of periods.
  TimeSeries series{r.times, r.sigma_x};
  series.times.pop_back();
  series.values.pop_back();
  const Spectrum spec = power_spectrum(series, cfg.window);

  const fs::path dir = prepare_dir(cfg);
  CsvWriter out(dir / "spectrum.csv");
  out.comment("power of mean-subtracted <sigma_x>, window=" + to_string(cfg.window) +
              ", one-sided, sum(power) = windowed energy");
  out.header({"harmonic_order", "power"});
  for (std::size_t j = 0; j < spec.order.size(); ++j) out.row({spec.order[j], spec.power[j]});
  out.close();

  SpectrumSummary summary;
  json features = {{"window", to_string(cfg.window)}, {"mean_subtracted", true}, {"cutoff_rule", kCutoffRule}};
  try {
    summary.features = detect_features(spec);
    features.update(features_json(*summary.features));
    features["status"] = "ok";
  } catch (const hhg::NoPlateau& e) {
    summary.status = "NoPlateau";
    features["status"] = summary.status;
    features["message"] = e.what();
    warn(warning_line("NoPlateau", e.what()));
  }
  write_json(dir / "features.json", features);

  json meta = base_meta(cfg, "spectrum");
  meta["trajectory"] = trajectory_meta(r);
  write_json(dir / "meta.json", meta);
  return summary;
}

void run_oracle_compare(const RunConfig& cfg, const WarningSink&) {
  if (cfg.method != Method::lattice) throw ConfigError("oracle-compare needs method=lattice");
  cfg.validate();
  const FockTruncation trunc = cfg.fock.n_max ? FockTruncation{*cfg.fock.n_max, cfg.fock.tail_tol}
                                              : FockTruncation::for_alpha(cfg.alpha0, cfg.fock.tail_tol);
  const FockTrajectory fock = propagate_fock(cfg.alpha0, cfg.model(), cfg.duration_cycles, trunc, cfg.samples_per_cycle);
  const Simulation sim = simulate(cfg);
  const TrajectoryRecord& r = sim.record;

  const fs::path dir = prepare_dir(cfg);
  CsvWriter out(dir / "compare.csv");
  out.header({"t_cycles", "sigma_x_lattice", "sigma_x_fock", "abs_diff", "p_plus_lattice", "p_plus_fock",
              "p_plus_abs_diff"});
  double sup_sx = 0.0;
  double sup_pp = 0.0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double dsx = std::abs(r.sigma_x[i] - fock.sigma_x[i]);
    const double dpp = std::abs(r.p_plus[i] - fock.p_plus[i]);
    sup_sx = std::max(sup_sx, dsx);
    sup_pp = std::max(sup_pp, dpp);
    out.row({r.times[i], r.sigma_x[i], fock.sigma_x[i], dsx, r.p_plus[i], fock.p_plus[i], dpp});
  }
  out.close();

  const bool pass = sup_sx < cfg.fock.threshold && sup_pp < cfg.fock.threshold;
  json report = {{"sup_abs_diff_sigma_x", sup_sx},
                 {"sup_abs_diff_p_plus", sup_pp},
                 {"threshold", cfg.fock.threshold},
                 {"pass", pass},
                 {"n_max", trunc.n_max},
                 {"max_tail_population", fock.max_tail},
                 {"lattice_N", cfg.lattice.half_size},
                 {"norm_drift_max", r.max_norm_drift},
                 {"version", HHG_VERSION},
                 {"config", cfg}};
  write_json(dir / "report.json", report);
  if (!pass)
    throw ThresholdExceeded("lattice and photon-number runs differ by " + format_double(std::max(sup_sx, sup_pp)) +
                            " > " + format_double(cfg.fock.threshold));
}

unsigned sweep_threads_from_env() {
  if (const char* v = std::getenv("HHG_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_sweep(const RunConfig& cfg, const WarningSink& warn, unsigned threads) {
  if (cfg.sweep.empty()) throw ConfigError("sweep needs a non-empty 'sweep' list");
  json base = cfg;
  base.erase("sweep");

  struct Entry {
    RunConfig cfg;
    SpectrumSummary summary;
    int exit_code = 0;
    std::string error;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
    json patch = cfg.sweep[i];
    if (patch.contains("sweep")) throw ConfigError("sweep entries cannot nest 'sweep'");
    json merged = base;
    merged.merge_patch(patch);
    RunConfig child = parse_config(merged);
    if (child.name.empty()) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "run_%03zu", i);
      child.name = buf;
    }
    child.out_dir = (fs::path(cfg.out_dir) / child.name).string();
    entries.push_back({child, {}, 0, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      Entry& e = entries[i];
      try {
        e.summary = run_spectrum(e.cfg, warn);
      } catch (const std::exception& ex) {
        e.exit_code = exit_code_for(ex);
        e.summary.status = kind_of(ex);
        e.error = ex.what();
        warn("error kind=" + e.summary.status + " run=" + e.cfg.name + " message=\"" + e.error + "\"");
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(entries.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = 0;
  for (const Entry& e : entries) worst = std::max(worst, e.exit_code);

  const fs::path dir = prepare_dir(cfg);
  // CsvWriter rows are numeric, and this table has text columns.
  std::string text = "name,method,alpha0_re,alpha0_im,Omega,omega0_ratio,status,cutoff_order,plateau_log10,peak_count\n";
  for (const Entry& e : entries) {
    const ModelParams p = e.cfg.model();
    text += e.cfg.name + "," + to_string(e.cfg.method) + "," + format_double(e.cfg.alpha0.real()) + "," +
            format_double(e.cfg.alpha0.imag()) + "," + format_double(p.Omega) + "," +
            format_double(e.cfg.omega0_ratio) + "," + e.summary.status;
    if (e.summary.features) {
      text += "," + format_double(e.summary.features->cutoff_order) + "," +
              format_double(e.summary.features->plateau_log10) + "," +
              std::to_string(e.summary.features->peaks.size());
    } else {
      text += ",,,";
    }
    text += "\n";
  }
  write_text(dir / "sweep_features.csv", text);
  return worst;
}

}  // namespace hhg::app
