#include "collapse/config.hpp"

#include <json.hpp>

#include <cmath>
#include <initializer_list>
#include <set>
#include <string>
#include <type_traits>

#include "collapse/errors.hpp"
#include "collapse/simplex.hpp"

namespace collapse {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw ValidationError("config: " + msg);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (ok.find(it.key()) == ok.end()) {
      fail("unknown key \"" + it.key() + "\" in " + ctx);
    }
  }
}

template <typename T>
T get_as(const json& v, const std::string& ctx) {
  // json::get would silently truncate 10.5 to an int; counted fields must be
  // literal integers, and unsigned ones nonnegative
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(ctx + ": must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) fail(ctx + ": must be a nonnegative integer");
    }
  }
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    fail(ctx + ": " + e.what());
  }
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) fail(ctx + ": missing required key \"" + key + "\"");
  return get_as<T>(j.at(key), ctx + "." + key);
}

template <typename T>
T get_field_or(const json& j, const char* key, T dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  return get_as<T>(j.at(key), ctx + "." + key);
}

std::uint64_t get_u64_field(const json& j, const char* key, const std::string& ctx) {
  return get_field<std::uint64_t>(j, key, ctx);
}

const std::set<std::string>& known_presets() {
  static const std::set<std::string> presets{
      "sigma_x", "sigma_y", "sigma_z", "maximally_mixed", "uniform_superposition"};
  return presets;
}

MatrixSpec parse_matrix_spec(const json& v, const std::string& ctx) {
  MatrixSpec spec;
  if (v.is_string()) {
    spec.preset = v.get<std::string>();
    if (known_presets().find(spec.preset) == known_presets().end()) {
      fail(ctx + ": unknown preset \"" + spec.preset + "\"");
    }
    return spec;
  }
  if (!v.is_object()) fail(ctx + ": expected a preset name or an object");
  check_keys(v, {"diag", "matrix"}, ctx);
  if (v.contains("diag") == v.contains("matrix")) {
    fail(ctx + ": exactly one of \"diag\" or \"matrix\" required");
  }
  if (v.contains("diag")) {
    spec.diag = get_as<std::vector<double>>(v.at("diag"), ctx + ".diag");
    if (spec.diag.empty()) fail(ctx + ".diag: must be nonempty");
    return spec;
  }
  const json& m = v.at("matrix");
  if (!m.is_array() || m.empty()) fail(ctx + ".matrix: must be a nonempty array");
  for (const json& e : m) {
    if (!e.is_array() || e.size() != 2) {
      fail(ctx + ".matrix: entries must be [re, im] pairs");
    }
    spec.entries.emplace_back(get_as<double>(e.at(0), ctx + ".matrix"),
                              get_as<double>(e.at(1), ctx + ".matrix"));
  }
  return spec;
}

void check_matrix_spec_dims(const MatrixSpec& spec, int n, const std::string& ctx) {
  if (!spec.diag.empty() && static_cast<int>(spec.diag.size()) != n) {
    fail(ctx + ": diag length must equal n");
  }
  if (!spec.entries.empty() &&
      static_cast<int>(spec.entries.size()) != n * n) {
    fail(ctx + ": matrix must have n*n entries in row-major order");
  }
  if ((spec.preset == "sigma_x" || spec.preset == "sigma_y" ||
       spec.preset == "sigma_z") &&
      n != 2) {
    fail(ctx + ": preset \"" + spec.preset + "\" requires n = 2");
  }
}

LindbladConfig parse_lindblad(const json& v, const std::string& ctx) {
  LindbladConfig config;
  if (!v.is_object()) fail(ctx + ": expected an object");
  if (v.contains("preset")) {
    check_keys(v, {"preset", "gamma"}, ctx);
    config.preset = get_field<std::string>(v, "preset", ctx);
    if (config.preset != "dephasing") {
      fail(ctx + ": unknown preset \"" + config.preset + "\"");
    }
    if (!v.contains("gamma")) fail(ctx + ": missing required key \"gamma\"");
    const json& g = v.at("gamma");
    if (g.is_number()) {
      config.gamma.push_back(get_as<double>(g, ctx + ".gamma"));
    } else {
      config.gamma = get_as<std::vector<double>>(g, ctx + ".gamma");
    }
    if (config.gamma.empty()) fail(ctx + ".gamma: must be nonempty");
    for (double rate : config.gamma) {
      if (rate < 0.0) fail(ctx + ".gamma: rates must be >= 0");
    }
    return config;
  }
  check_keys(v, {"h", "jumps"}, ctx);
  if (!v.contains("h")) fail(ctx + ": missing required key \"h\"");
  config.h = parse_matrix_spec(v.at("h"), ctx + ".h");
  if (!v.contains("jumps")) fail(ctx + ": missing required key \"jumps\"");
  const json& jumps = v.at("jumps");
  if (!jumps.is_array()) fail(ctx + ".jumps: must be an array");
  int idx = 0;
  for (const json& e : jumps) {
    config.jumps.push_back(
        parse_matrix_spec(e, ctx + ".jumps[" + std::to_string(idx) + "]"));
    ++idx;
  }
  return config;
}

std::vector<double> parse_simplex_field(const json& j, const char* key, int m,
                                        const std::string& ctx) {
  auto r = get_field<std::vector<double>>(j, key, ctx);
  if (static_cast<int>(r.size()) != m) {
    fail(ctx + "." + key + ": length must equal m");
  }
  // delegate the numeric invariants (nonnegativity, simplex sum) to the type
  [[maybe_unused]] const SimplexPoint probe{std::vector<double>(r)};
  return r;
}

DecohereConfig parse_decohere(const json& j) {
  const std::string ctx = "decohere";
  check_keys(j, {"command", "n", "observable", "lindblad", "rho0", "t_final", "dt",
                 "stride"},
             ctx);
  DecohereConfig c;
  c.n = get_field<int>(j, "n", ctx);
  if (c.n < 2) fail(ctx + ".n: must be >= 2");
  if (!j.contains("observable")) fail(ctx + ": missing required key \"observable\"");
  c.observable = parse_matrix_spec(j.at("observable"), ctx + ".observable");
  check_matrix_spec_dims(c.observable, c.n, ctx + ".observable");
  if (!j.contains("lindblad")) fail(ctx + ": missing required key \"lindblad\"");
  c.lindblad = parse_lindblad(j.at("lindblad"), ctx + ".lindblad");
  if (!j.contains("rho0")) fail(ctx + ": missing required key \"rho0\"");
  c.rho0 = parse_matrix_spec(j.at("rho0"), ctx + ".rho0");
  check_matrix_spec_dims(c.rho0, c.n, ctx + ".rho0");
  c.t_final = get_field_or<double>(j, "t_final", c.t_final, ctx);
  if (!(c.t_final > 0.0)) fail(ctx + ".t_final: must be > 0");
  c.dt = get_field_or<double>(j, "dt", c.dt, ctx);
  c.stride = get_field_or<int>(j, "stride", c.stride, ctx);
  if (c.stride < 1) fail(ctx + ".stride: must be >= 1");
  return c;
}

PurifyConfig parse_purify(const json& j) {
  const std::string ctx = "purify";
  check_keys(j, {"command", "m", "mu0", "mu_ext", "a", "conv_tol", "dt", "t_cap",
                 "stride"},
             ctx);
  PurifyConfig c;
  c.m = get_field<int>(j, "m", ctx);
  if (c.m < 2) fail(ctx + ".m: must be >= 2");
  c.mu0 = parse_simplex_field(j, "mu0", c.m, ctx);
  c.mu_ext = parse_simplex_field(j, "mu_ext", c.m, ctx);
  c.a = get_field_or<double>(j, "a", c.a, ctx);
  if (!(c.a > 0.0)) fail(ctx + ".a: must be > 0");
  c.conv_tol = get_field_or<double>(j, "conv_tol", c.conv_tol, ctx);
  if (!(c.conv_tol > 0.0)) fail(ctx + ".conv_tol: must be > 0");
  c.dt = get_field_or<double>(j, "dt", c.dt, ctx);
  c.t_cap = get_field_or<double>(j, "t_cap", c.t_cap, ctx);
  c.stride = get_field_or<int>(j, "stride", c.stride, ctx);
  if (c.stride < 1) fail(ctx + ".stride: must be >= 1");
  return c;
}

BornConfig parse_born(const json& j) {
  const std::string ctx = "born";
  check_keys(j, {"command", "m", "mu0", "trials", "a", "seed", "mode", "conv_tol",
                 "dt", "t_cap", "threads"},
             ctx);
  BornConfig c;
  c.m = get_field<int>(j, "m", ctx);
  if (c.m < 2) fail(ctx + ".m: must be >= 2");
  c.mu0 = parse_simplex_field(j, "mu0", c.m, ctx);
  c.trials = get_u64_field(j, "trials", ctx);
  if (c.trials < 1) fail(ctx + ".trials: must be >= 1");
  c.a = get_field_or<double>(j, "a", c.a, ctx);
  if (!(c.a > 0.0)) fail(ctx + ".a: must be > 0");
  c.seed = get_u64_field(j, "seed", ctx);
  c.mode = get_field_or<std::string>(j, "mode", c.mode, ctx);
  if (c.mode != "full_ode" && c.mode != "classify_only") {
    fail(ctx + ".mode: must be \"full_ode\" or \"classify_only\"");
  }
  c.conv_tol = get_field_or<double>(j, "conv_tol", c.conv_tol, ctx);
  if (!(c.conv_tol > 0.0)) fail(ctx + ".conv_tol: must be > 0");
  c.dt = get_field_or<double>(j, "dt", c.dt, ctx);
  c.t_cap = get_field_or<double>(j, "t_cap", c.t_cap, ctx);
  c.threads = get_field_or<int>(j, "threads", c.threads, ctx);
  if (c.threads < 1) fail(ctx + ".threads: must be >= 1");
  return c;
}

InterruptConfig parse_interrupt(const json& j) {
  const std::string ctx = "interrupt";
  check_keys(j, {"command", "m", "mu0", "trials", "a", "seed", "t_interrupt",
                 "conv_tol", "dt", "t_cap", "threads"},
             ctx);
  InterruptConfig c;
  c.m = get_field<int>(j, "m", ctx);
  if (c.m < 2) fail(ctx + ".m: must be >= 2");
  c.mu0 = parse_simplex_field(j, "mu0", c.m, ctx);
  c.trials = get_u64_field(j, "trials", ctx);
  if (c.trials < 1) fail(ctx + ".trials: must be >= 1");
  c.a = get_field_or<double>(j, "a", c.a, ctx);
  if (!(c.a > 0.0)) fail(ctx + ".a: must be > 0");
  c.seed = get_u64_field(j, "seed", ctx);
  c.t_interrupt = get_field<double>(j, "t_interrupt", ctx);
  if (c.t_interrupt < 0.0) fail(ctx + ".t_interrupt: must be >= 0");
  c.conv_tol = get_field_or<double>(j, "conv_tol", c.conv_tol, ctx);
  if (!(c.conv_tol > 0.0)) fail(ctx + ".conv_tol: must be > 0");
  c.dt = get_field_or<double>(j, "dt", c.dt, ctx);
  c.t_cap = get_field_or<double>(j, "t_cap", c.t_cap, ctx);
  c.threads = get_field_or<int>(j, "threads", c.threads, ctx);
  if (c.threads < 1) fail(ctx + ".threads: must be >= 1");
  return c;
}

CombinedConfig parse_combined(const json& j) {
  const std::string ctx = "combined";
  check_keys(j, {"command", "n", "observable", "lindblad", "rho0", "a", "trials",
                 "seed", "conv_tol", "t_cap", "threads"},
             ctx);
  CombinedConfig c;
  c.n = get_field<int>(j, "n", ctx);
  if (c.n < 2) fail(ctx + ".n: must be >= 2");
  if (!j.contains("observable")) fail(ctx + ": missing required key \"observable\"");
  c.observable = parse_matrix_spec(j.at("observable"), ctx + ".observable");
  check_matrix_spec_dims(c.observable, c.n, ctx + ".observable");
  if (!j.contains("lindblad")) fail(ctx + ": missing required key \"lindblad\"");
  c.lindblad = parse_lindblad(j.at("lindblad"), ctx + ".lindblad");
  if (!j.contains("rho0")) fail(ctx + ": missing required key \"rho0\"");
  c.rho0 = parse_matrix_spec(j.at("rho0"), ctx + ".rho0");
  check_matrix_spec_dims(c.rho0, c.n, ctx + ".rho0");
  c.a = get_field_or<double>(j, "a", c.a, ctx);
  if (!(c.a > 0.0)) fail(ctx + ".a: must be > 0");
  c.trials = get_u64_field(j, "trials", ctx);
  if (c.trials < 1) fail(ctx + ".trials: must be >= 1");
  c.seed = get_u64_field(j, "seed", ctx);
  c.conv_tol = get_field_or<double>(j, "conv_tol", c.conv_tol, ctx);
  if (!(c.conv_tol > 0.0)) fail(ctx + ".conv_tol: must be > 0");
  c.t_cap = get_field_or<double>(j, "t_cap", c.t_cap, ctx);
  c.threads = get_field_or<int>(j, "threads", c.threads, ctx);
  if (c.threads < 1) fail(ctx + ".threads: must be >= 1");
  return c;
}

CheckConfig parse_check(const json& j) {
  const std::string ctx = "check";
  check_keys(j, {"command", "n", "observable", "lindblad"}, ctx);
  CheckConfig c;
  c.n = get_field<int>(j, "n", ctx);
  if (c.n < 2) fail(ctx + ".n: must be >= 2");
  if (!j.contains("observable")) fail(ctx + ": missing required key \"observable\"");
  c.observable = parse_matrix_spec(j.at("observable"), ctx + ".observable");
  check_matrix_spec_dims(c.observable, c.n, ctx + ".observable");
  if (!j.contains("lindblad")) fail(ctx + ": missing required key \"lindblad\"");
  c.lindblad = parse_lindblad(j.at("lindblad"), ctx + ".lindblad");
  return c;
}

json dump_matrix_spec(const MatrixSpec& spec) {
  if (!spec.preset.empty()) return spec.preset;
  json o = json::object();
  if (!spec.diag.empty()) {
    o["diag"] = spec.diag;
    return o;
  }
  json arr = json::array();
  for (const Complex& z : spec.entries) {
    arr.push_back(json::array({z.real(), z.imag()}));
  }
  o["matrix"] = arr;
  return o;
}

json dump_lindblad(const LindbladConfig& config) {
  json o = json::object();
  if (!config.preset.empty()) {
    o["preset"] = config.preset;
    o["gamma"] = config.gamma;
    return o;
  }
  o["h"] = dump_matrix_spec(config.h);
  json jumps = json::array();
  for (const MatrixSpec& v : config.jumps) jumps.push_back(dump_matrix_spec(v));
  o["jumps"] = jumps;
  return o;
}

json dump_config(const ExperimentConfig& config) {
  json o = json::object();
  o["command"] = command_of(config);
  std::visit(
      [&o](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DecohereConfig>) {
          o["n"] = c.n;
          o["observable"] = dump_matrix_spec(c.observable);
          o["lindblad"] = dump_lindblad(c.lindblad);
          o["rho0"] = dump_matrix_spec(c.rho0);
          o["t_final"] = c.t_final;
          o["dt"] = c.dt;
          o["stride"] = c.stride;
        } else if constexpr (std::is_same_v<T, PurifyConfig>) {
          o["m"] = c.m;
          o["mu0"] = c.mu0;
          o["mu_ext"] = c.mu_ext;
          o["a"] = c.a;
          o["conv_tol"] = c.conv_tol;
          o["dt"] = c.dt;
          o["t_cap"] = c.t_cap;
          o["stride"] = c.stride;
        } else if constexpr (std::is_same_v<T, BornConfig>) {
          o["m"] = c.m;
          o["mu0"] = c.mu0;
          o["trials"] = c.trials;
          o["a"] = c.a;
          o["seed"] = c.seed;
          o["mode"] = c.mode;
          o["conv_tol"] = c.conv_tol;
          o["dt"] = c.dt;
          o["t_cap"] = c.t_cap;
          o["threads"] = c.threads;
        } else if constexpr (std::is_same_v<T, CombinedConfig>) {
          o["n"] = c.n;
          o["observable"] = dump_matrix_spec(c.observable);
          o["lindblad"] = dump_lindblad(c.lindblad);
          o["rho0"] = dump_matrix_spec(c.rho0);
          o["a"] = c.a;
          o["trials"] = c.trials;
          o["seed"] = c.seed;
          o["conv_tol"] = c.conv_tol;
          o["t_cap"] = c.t_cap;
          o["threads"] = c.threads;
        } else if constexpr (std::is_same_v<T, InterruptConfig>) {
          o["m"] = c.m;
          o["mu0"] = c.mu0;
          o["trials"] = c.trials;
          o["a"] = c.a;
          o["seed"] = c.seed;
          o["t_interrupt"] = c.t_interrupt;
          o["conv_tol"] = c.conv_tol;
          o["dt"] = c.dt;
          o["t_cap"] = c.t_cap;
          o["threads"] = c.threads;
        } else {
          static_assert(std::is_same_v<T, CheckConfig>);
          o["n"] = c.n;
          o["observable"] = dump_matrix_spec(c.observable);
          o["lindblad"] = dump_lindblad(c.lindblad);
        }
      },
      config);
  return o;
}

}  // namespace

std::string command_of(const ExperimentConfig& config) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DecohereConfig>) return "decohere";
        if constexpr (std::is_same_v<T, PurifyConfig>) return "purify";
        if constexpr (std::is_same_v<T, BornConfig>) return "born";
        if constexpr (std::is_same_v<T, CombinedConfig>) return "combined";
        if constexpr (std::is_same_v<T, InterruptConfig>) return "interrupt";
        if constexpr (std::is_same_v<T, CheckConfig>) return "check";
      },
      config);
}

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& command) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  std::string cmd = command;
  if (j.contains("command")) {
    const auto embedded = get_as<std::string>(j.at("command"), "command");
    if (!cmd.empty() && cmd != embedded) {
      fail("embedded command \"" + embedded + "\" does not match \"" + cmd + "\"");
    }
    cmd = embedded;
  }
  if (cmd.empty()) fail("no command given (pass a subcommand or a \"command\" key)");
  if (cmd == "decohere") return parse_decohere(j);
  if (cmd == "purify") return parse_purify(j);
  if (cmd == "born") return parse_born(j);
  if (cmd == "combined") return parse_combined(j);
  if (cmd == "interrupt") return parse_interrupt(j);
  if (cmd == "check") return parse_check(j);
  fail("unknown command \"" + cmd + "\"");
}

std::string serialize_config(const ExperimentConfig& config) {
  return dump_config(config).dump(2);
}

Observable resolve_observable(const MatrixSpec& spec, int n) {
  if (spec.preset == "sigma_x") {
    return Observable::spectral_decompose(HermitianOperator(pauli_x()));
  }
  if (spec.preset == "sigma_y") {
    return Observable::spectral_decompose(HermitianOperator(pauli_y()));
  }
  if (spec.preset == "sigma_z") {
    return Observable::spectral_decompose(HermitianOperator(pauli_z()));
  }
  if (!spec.preset.empty()) {
    throw ValidationError("config: preset \"" + spec.preset +
                          "\" is not an observable");
  }
  if (!spec.diag.empty()) return Observable::from_diagonal(spec.diag);
  if (!spec.entries.empty()) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = spec.entries[static_cast<std::size_t>(i * n + j)];
      }
    }
    return Observable::spectral_decompose(HermitianOperator(m));
  }
  throw ValidationError("config: empty observable spec");
}

DensityMatrix resolve_density(const MatrixSpec& spec, int n) {
  if (spec.preset == "maximally_mixed") return maximally_mixed(n);
  if (spec.preset == "uniform_superposition") return uniform_superposition(n);
  if (!spec.preset.empty()) {
    throw ValidationError("config: preset \"" + spec.preset + "\" is not a state");
  }
  if (!spec.diag.empty()) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = spec.diag[static_cast<std::size_t>(i)];
    return DensityMatrix::validated(m);
  }
  if (!spec.entries.empty()) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = spec.entries[static_cast<std::size_t>(i * n + j)];
      }
    }
    return DensityMatrix::validated(m);
  }
  throw ValidationError("config: empty state spec");
}

LindbladSpec resolve_lindblad(const LindbladConfig& config, const Observable& a) {
  if (config.preset == "dephasing") {
    std::vector<double> gamma = config.gamma;
    if (gamma.size() == 1) {
      gamma.assign(static_cast<std::size_t>(a.points()), gamma.front());
    }
    if (static_cast<int>(gamma.size()) != a.points()) {
      throw ValidationError(
          "config: dephasing gamma must have one rate per spectral point");
    }
    return dephasing(a, gamma);
  }
  const int n = static_cast<int>(a.dim());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  if (!config.h.empty()) {
    if (!config.h.diag.empty()) {
      if (static_cast<int>(config.h.diag.size()) != n) {
        throw ValidationError("config: lindblad.h diag length must equal n");
      }
      for (int i = 0; i < n; ++i) h(i, i) = config.h.diag[static_cast<std::size_t>(i)];
    } else if (!config.h.entries.empty()) {
      if (static_cast<int>(config.h.entries.size()) != n * n) {
        throw ValidationError("config: lindblad.h must have n*n entries");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          h(i, j) = config.h.entries[static_cast<std::size_t>(i * n + j)];
        }
      }
    } else if (config.h.preset == "sigma_x") {
      h = pauli_x();
    } else if (config.h.preset == "sigma_y") {
      h = pauli_y();
    } else if (config.h.preset == "sigma_z") {
      h = pauli_z();
    } else {
      throw ValidationError("config: preset \"" + config.h.preset +
                            "\" is not a Hamiltonian");
    }
  }
  std::vector<ComplexMatrix> jumps;
  for (const MatrixSpec& spec : config.jumps) {
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    if (!spec.diag.empty()) {
      if (static_cast<int>(spec.diag.size()) != n) {
        throw ValidationError("config: jump diag length must equal n");
      }
      for (int i = 0; i < n; ++i) v(i, i) = spec.diag[static_cast<std::size_t>(i)];
    } else if (!spec.entries.empty()) {
      if (static_cast<int>(spec.entries.size()) != n * n) {
        throw ValidationError("config: jump matrix must have n*n entries");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          v(i, j) = spec.entries[static_cast<std::size_t>(i * n + j)];
        }
      }
    } else if (spec.preset == "sigma_x") {
      v = pauli_x();
    } else if (spec.preset == "sigma_y") {
      v = pauli_y();
    } else if (spec.preset == "sigma_z") {
      v = pauli_z();
    } else {
      throw ValidationError("config: unsupported jump operator spec");
    }
    jumps.push_back(std::move(v));
  }
  return LindbladSpec(HermitianOperator(h), std::move(jumps));
}

}  // namespace collapse
