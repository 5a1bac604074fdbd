#include "hhg/app/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hhg/errors.hpp"

namespace hhg::app {

using nlohmann::json;

namespace {

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

void require_object(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("config key '" + key + "' must be an object");
}

[[noreturn]] void unknown_key(const std::string& prefix, const std::string& key) {
  throw ConfigError("unknown config key '" + prefix + key + "'");
}

json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

cplx complex_from_json(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) {
    double re = 0.0;
    double im = 0.0;
    for (const auto& [k, v] : j.items()) {
      if (k == "re") {
        re = get_as<double>(v, key + ".re");
      } else if (k == "im") {
        im = get_as<double>(v, key + ".im");
      } else {
        unknown_key(key + ".", k);
      }
    }
    return {re, im};
  }
  throw ConfigError("config key '" + key + "' must be a number or {re, im}");
}

std::string anchor_name(LatticeAnchor a) { return a == LatticeAnchor::canonical ? "canonical" : "initial"; }

LatticeAnchor anchor_from(const std::string& s) {
  if (s == "canonical") return LatticeAnchor::canonical;
  if (s == "initial") return LatticeAnchor::initial_state;
  throw ConfigError("lattice.anchor must be 'canonical' or 'initial', got '" + s + "'");
}

json grid_to_json(const PhaseGrid& g) {
  return {{"re_min", g.re_min}, {"re_max", g.re_max}, {"im_min", g.im_min},
          {"im_max", g.im_max}, {"n_re", g.n_re},     {"n_im", g.n_im}};
}

PhaseGrid grid_from_json(const json& j) {
  require_object(j, "grid");
  PhaseGrid g;
  for (const auto& [k, v] : j.items()) {
    if (k == "re_min") g.re_min = get_as<double>(v, "grid.re_min");
    else if (k == "re_max") g.re_max = get_as<double>(v, "grid.re_max");
    else if (k == "im_min") g.im_min = get_as<double>(v, "grid.im_min");
    else if (k == "im_max") g.im_max = get_as<double>(v, "grid.im_max");
    else if (k == "n_re") g.n_re = get_as<int>(v, "grid.n_re");
    else if (k == "n_im") g.n_im = get_as<int>(v, "grid.n_im");
    else if (k != "points") unknown_key("grid.", k);
  }
  return g;
}

}  // namespace

std::string to_string(Method m) { return m == Method::lattice ? "lattice" : "two_state"; }

ModelParams RunConfig::model() const {
  ModelParams p;
  p.omega = omega;
  p.omega0 = omega0_ratio * omega;
  p.Omega = Omega ? *Omega : *gamma * omega;
  return p;
}

void RunConfig::validate() const {
  if (Omega.has_value() == gamma.has_value()) throw ConfigError("exactly one of 'Omega' and 'gamma' must be given");
  if (gamma && !(*gamma >= 0.0)) throw ConfigError("'gamma' is a magnitude and must be >= 0");
  if (!(duration_cycles > 0.0)) throw ConfigError("'duration_cycles' must be positive");
  if (!(samples_per_cycle > 0.0)) throw ConfigError("'samples_per_cycle' must be positive");
  if (lattice.half_size < 1) throw ConfigError("'lattice.N' must be >= 1");
  if (grid.points < 2) throw ConfigError("'grid.points' must be >= 2");
  if (weights.enabled && !(weights.samples_per_cycle > 0.0))
    throw ConfigError("'weights.samples_per_cycle' must be positive");
  for (double t : wigner_times) {
    if (!(t >= 0.0 && t <= duration_cycles))
      throw ConfigError("wigner time " + format_number(t) + " is outside [0, duration_cycles]");
  }
  try {
    model().validate();
    integrator.validate();
    if (grid.fixed) grid.fixed->validate();
    FockTruncation{fock.n_max.value_or(1), fock.tail_tol}.validate();
  } catch (const hhg::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(fock.threshold > 0.0)) throw ConfigError("'fock.threshold' must be positive");
}

void to_json(json& j, const RunConfig& c) {
  j = json::object();
  if (!c.name.empty()) j["name"] = c.name;
  j["omega"] = c.omega;
  j["omega0_ratio"] = c.omega0_ratio;
  if (c.Omega) j["Omega"] = *c.Omega;
  if (c.gamma) j["gamma"] = *c.gamma;
  j["alpha0"] = complex_to_json(c.alpha0);
  j["method"] = to_string(c.method);
  j["lattice"] = {{"N", c.lattice.half_size},
                  {"anchor", anchor_name(c.lattice.anchor)},
                  {"cutoff", c.lattice.inverse_cutoff}};
  j["integrator"] = {{"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step", c.integrator.max_step},
                     {"norm_guard", c.integrator.norm_guard},
                     {"max_steps", c.integrator.max_steps}};
  j["duration_cycles"] = c.duration_cycles;
  j["samples_per_cycle"] = c.samples_per_cycle;
  json grid = c.grid.fixed ? grid_to_json(*c.grid.fixed) : json::object();
  grid["points"] = c.grid.points;
  j["grid"] = grid;
  j["wigner_times"] = c.wigner_times;
  j["window"] = to_string(c.window);
  json fock = {{"tail_tol", c.fock.tail_tol}, {"threshold", c.fock.threshold}};
  if (c.fock.n_max) fock["n_max"] = *c.fock.n_max;
  j["fock"] = fock;
  j["weights"] = {{"enabled", c.weights.enabled}, {"samples_per_cycle", c.weights.samples_per_cycle}};
  j["out_dir"] = c.out_dir;
  if (!c.sweep.empty()) j["sweep"] = c.sweep;
}

void from_json(const json& j, RunConfig& c) {
  require_object(j, "<root>");
  c = RunConfig{};
  for (const auto& [key, v] : j.items()) {
    if (key == "name") {
      c.name = get_as<std::string>(v, key);
    } else if (key == "omega") {
      c.omega = get_as<double>(v, key);
    } else if (key == "omega0_ratio") {
      c.omega0_ratio = get_as<double>(v, key);
    } else if (key == "Omega") {
      c.Omega = get_as<double>(v, key);
    } else if (key == "gamma") {
      c.gamma = get_as<double>(v, key);
    } else if (key == "alpha0") {
      c.alpha0 = complex_from_json(v, key);
    } else if (key == "method") {
      const auto m = get_as<std::string>(v, key);
      if (m == "lattice") c.method = Method::lattice;
      else if (m == "two_state") c.method = Method::two_state;
      else throw ConfigError("'method' must be 'lattice' or 'two_state', got '" + m + "'");
    } else if (key == "lattice") {
      require_object(v, key);
      for (const auto& [k, x] : v.items()) {
        if (k == "N") c.lattice.half_size = get_as<int>(x, "lattice.N");
        else if (k == "anchor") c.lattice.anchor = anchor_from(get_as<std::string>(x, "lattice.anchor"));
        else if (k == "cutoff") c.lattice.inverse_cutoff = get_as<double>(x, "lattice.cutoff");
        else unknown_key("lattice.", k);
      }
    } else if (key == "integrator") {
      require_object(v, key);
      for (const auto& [k, x] : v.items()) {
        if (k == "rel_tol") c.integrator.rel_tol = get_as<double>(x, "integrator.rel_tol");
        else if (k == "abs_tol") c.integrator.abs_tol = get_as<double>(x, "integrator.abs_tol");
        else if (k == "max_step") c.integrator.max_step = get_as<double>(x, "integrator.max_step");
        else if (k == "norm_guard") c.integrator.norm_guard = get_as<double>(x, "integrator.norm_guard");
        else if (k == "max_steps") c.integrator.max_steps = get_as<std::size_t>(x, "integrator.max_steps");
        else unknown_key("integrator.", k);
      }
    } else if (key == "duration_cycles") {
      c.duration_cycles = get_as<double>(v, key);
    } else if (key == "samples_per_cycle") {
      c.samples_per_cycle = get_as<double>(v, key);
    } else if (key == "grid") {
      if (v.is_string() && v.get<std::string>() == "auto") continue;
      require_object(v, key);
      if (v.contains("points")) c.grid.points = get_as<int>(v.at("points"), "grid.points");
      json bounds = v;
      bounds.erase("points");
      if (!bounds.empty()) c.grid.fixed = grid_from_json(bounds);
    } else if (key == "wigner_times") {
      c.wigner_times = get_as<std::vector<double>>(v, key);
    } else if (key == "window") {
      try {
        c.window = window_from_string(get_as<std::string>(v, key));
      } catch (const hhg::InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "fock") {
      require_object(v, key);
      for (const auto& [k, x] : v.items()) {
        if (k == "n_max") {
          if (!(x.is_string() && x.get<std::string>() == "auto")) c.fock.n_max = get_as<int>(x, "fock.n_max");
        } else if (k == "tail_tol") {
          c.fock.tail_tol = get_as<double>(x, "fock.tail_tol");
        } else if (k == "threshold") {
          c.fock.threshold = get_as<double>(x, "fock.threshold");
        } else {
          unknown_key("fock.", k);
        }
      }
    } else if (key == "weights") {
      require_object(v, key);
      for (const auto& [k, x] : v.items()) {
        if (k == "enabled") c.weights.enabled = get_as<bool>(x, "weights.enabled");
        else if (k == "samples_per_cycle") c.weights.samples_per_cycle = get_as<double>(x, "weights.samples_per_cycle");
        else unknown_key("weights.", k);
      }
    } else if (key == "out_dir") {
      c.out_dir = get_as<std::string>(v, key);
    } else if (key == "sweep") {
      if (!v.is_array()) throw ConfigError("'sweep' must be an array of override objects");
      for (const auto& e : v) {
        if (!e.is_object()) throw ConfigError("every 'sweep' entry must be an object");
        c.sweep.push_back(e);
      }
    } else {
      unknown_key("", key);
    }
  }
}

RunConfig parse_config(const json& j) {
  RunConfig c = j.get<RunConfig>();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("empty segment in --set key '" + path + "'");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError("--set key '" + path + "' descends into a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError("--set key '" + path + "' descends into a non-object");
  (*node)[parts.back()] = value;
}

}  // namespace hhg::app
