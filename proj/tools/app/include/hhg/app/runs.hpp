#pragma once

#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hhg/app/config.hpp"
#include "hhg/dynamics.hpp"
#include "hhg/errors.hpp"

namespace hhg::app {

/// Oracle comparison exceeded its threshold; files are written before this is thrown.
class ThresholdExceeded : public hhg::Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "ThresholdExceeded"; }
};

/// 2 config, 3 norm drift, 4 integrator / numerical / truncation, 5 threshold, 1 anything else.
int exit_code_for(const std::exception& e);
std::string kind_of(const std::exception& e);

/// Receives one-line warnings ("warning kind=... message=...").
using WarningSink = std::function<void(const std::string&)>;

/// Sink that writes to stderr under a lock.
WarningSink stderr_warnings();

/// Trajectory of a configured run plus the lattice it used (absent for the two-state model).
struct Simulation {
  TrajectoryRecord record;
  std::optional<LatticeBasis> basis;
};

Simulation simulate(const RunConfig& cfg, const std::vector<double>& snapshot_times = {});

/// timeseries.csv, meta.json and, when enabled, weights.csv.
void run_simulate(const RunConfig& cfg, const WarningSink& warn);

/// wigner_t<time>.csv per requested time and meta.json.
void run_wigner(const RunConfig& cfg, const WarningSink& warn);

struct SpectrumSummary {
  std::string status = "ok";  ///< "ok" or the error kind (e.g. NoPlateau)
  std::optional<SpectrumFeatures> features;
};

/// spectrum.csv, features.json and meta.json.
SpectrumSummary run_spectrum(const RunConfig& cfg, const WarningSink& warn);

/// compare.csv and report.json; throws ThresholdExceeded after writing when the check fails.
void run_oracle_compare(const RunConfig& cfg, const WarningSink& warn);

/// Spectrum runs for every sweep entry, at most `threads` at a time, plus sweep_features.csv.
/// Returns the largest exit code among the runs.
int run_sweep(const RunConfig& cfg, const WarningSink& warn, unsigned threads);

/// HHG_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned sweep_threads_from_env();

/// Shortest round-trip text of a time, used in file names.
std::string time_tag(double t);

}  // namespace hhg::app
