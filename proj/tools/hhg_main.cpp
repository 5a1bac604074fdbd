#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhg/app/config.hpp"
#include "hhg/app/runs.hpp"

namespace {

using hhg::app::ConfigError;
using hhg::app::RunConfig;
using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("-c,--config", args.config_path, "JSON run configuration")->required();
  sub->add_option("--set", args.sets, "Override a config key, e.g. --set lattice.N=7 (repeatable)")
      ->take_all()
      ->allow_extra_args(false);
  sub->add_option("-o,--out", args.out_dir, "Output directory (overrides out_dir)");
}

RunConfig resolve(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw ConfigError("cannot open config file '" + args.config_path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file '" + args.config_path + "' is not valid JSON");
  for (const auto& s : args.sets) hhg::app::apply_override(j, s);
  if (!args.out_dir.empty()) j["out_dir"] = args.out_dir;
  return hhg::app::parse_config(j);
}

int report(const std::exception& e) {
  const int code = hhg::app::exit_code_for(e);
  std::string msg = e.what();
  for (char& ch : msg)
    if (ch == '"' || ch == '\n') ch = '\'';
  std::cerr << "error kind=" << hhg::app::kind_of(e) << " exit=" << code << " message=\"" << msg << "\"\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic generation from a two-level atom in a quantized field, on a coherent-state lattice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HHG_VERSION);

  CommonArgs args;
  auto* simulate = app.add_subcommand("simulate", "Time series of <sigma_x>, norm and branch populations");
  auto* wigner = app.add_subcommand("wigner", "Field Wigner function at the configured times");
  auto* spectrum = app.add_subcommand("spectrum", "Harmonic spectrum with plateau and cutoff");
  auto* compare = app.add_subcommand("oracle-compare", "Lattice run against the photon-number-basis reference");
  auto* sweep = app.add_subcommand("sweep", "Spectrum runs over the config's sweep list");
  for (auto* sub : {simulate, wigner, spectrum, compare, sweep}) add_common(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage errors share the config exit code.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto warn = hhg::app::stderr_warnings();
  try {
    const RunConfig cfg = resolve(args);
    if (simulate->parsed()) hhg::app::run_simulate(cfg, warn);
    if (wigner->parsed()) hhg::app::run_wigner(cfg, warn);
    if (spectrum->parsed()) hhg::app::run_spectrum(cfg, warn);
    if (compare->parsed()) hhg::app::run_oracle_compare(cfg, warn);
    if (sweep->parsed()) return hhg::app::run_sweep(cfg, warn, hhg::app::sweep_threads_from_env());
  } catch (const std::exception& e) {
    return report(e);
  }
  return 0;
}
