#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hhg/errors.hpp"
#include "hhg/fock_oracle.hpp"
#include "hhg/lattice.hpp"
#include "hhg/model.hpp"
#include "hhg/observables.hpp"
#include "hhg/ode.hpp"
#include "hhg/phase_space.hpp"

namespace hhg::app {

/// Raised for malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public hhg::Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "ConfigError"; }
};

enum class Method { lattice, two_state };

struct LatticeConfig {
  int half_size = 5;
  LatticeAnchor anchor = LatticeAnchor::initial_state;
  double inverse_cutoff = kDefaultInverseCutoff;

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

struct GridConfig {
  /// When unset the grid is fitted to each snapshot (labels plus margin).
  std::optional<PhaseGrid> fixed;
  int points = 512;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct FockConfig {
  std::optional<int> n_max;  ///< default ceil(|alpha0|^2 + 6|alpha0| + 20)
  double tail_tol = 1e-8;
  double threshold = 1e-4;

  friend bool operator==(const FockConfig&, const FockConfig&) = default;
};

struct WeightsConfig {
  bool enabled = false;
  double samples_per_cycle = 64.0;

  friend bool operator==(const WeightsConfig&, const WeightsConfig&) = default;
};

/// Everything one run needs. JSON keys match the field names; see README for the schema.
struct RunConfig {
  std::string name;
  double omega = 1.0;
  double omega0_ratio = 2.2;
  std::optional<double> Omega;  ///< exactly one of Omega and gamma is set
  std::optional<double> gamma;  ///< magnitude |gamma|; the coupling is Omega = gamma * omega
  cplx alpha0{0.0, 0.0};
  Method method = Method::lattice;
  LatticeConfig lattice;
  IntegratorConfig integrator;
  double duration_cycles = 5.0;
  double samples_per_cycle = 4096.0;
  GridConfig grid;
  std::vector<double> wigner_times{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875};
  Window window = Window::hann;
  FockConfig fock;
  WeightsConfig weights;
  std::string out_dir = "out";
  /// Per-run JSON merge patches applied to this config by the sweep subcommand.
  std::vector<nlohmann::json> sweep;

  ModelParams model() const;
  /// Throws ConfigError on any inconsistency.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Applies "a.b.c=value" to j. The value is parsed as JSON and falls back to a plain string.
void apply_override(nlohmann::json& j, const std::string& assignment);

std::string to_string(Method m);

}  // namespace hhg::app
