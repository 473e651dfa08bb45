#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "collapse/lindblad.hpp"
#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"

namespace collapse {

// One of three exclusive forms: a named preset ("sigma_x" | "sigma_y" |
// "sigma_z" | "maximally_mixed" | "uniform_superposition"), a real diagonal,
// or an explicit row-major complex matrix.
struct MatrixSpec {
  std::string preset;
  std::vector<double> diag;
  std::vector<Complex> entries;

  bool operator==(const MatrixSpec&) const = default;
  bool empty() const { return preset.empty() && diag.empty() && entries.empty(); }
};

// Either the "dephasing" preset (one rate per spectral point, or a single
// shared rate) or an explicit Hamiltonian plus jump operators.
struct LindbladConfig {
  std::string preset;
  std::vector<double> gamma;
  MatrixSpec h;
  std::vector<MatrixSpec> jumps;

  bool operator==(const LindbladConfig&) const = default;
};

struct DecohereConfig {
  int n = 0;
  MatrixSpec observable;
  LindbladConfig lindblad;
  MatrixSpec rho0;
  double t_final = 10.0;
  double dt = 0.0;  // <= 0: integrator default
  int stride = 1;

  bool operator==(const DecohereConfig&) const = default;
};

struct PurifyConfig {
  int m = 0;
  std::vector<double> mu0;
  std::vector<double> mu_ext;
  double a = 1.0;
  double conv_tol = 1e-6;
  double dt = 0.0;
  double t_cap = 0.0;
  int stride = 1;

  bool operator==(const PurifyConfig&) const = default;
};

struct BornConfig {
  int m = 0;
  std::vector<double> mu0;
  std::uint64_t trials = 0;
  double a = 1.0;
  std::uint64_t seed = 0;
  std::string mode = "full_ode";  // or "classify_only"
  double conv_tol = 1e-6;
  double dt = 0.0;
  double t_cap = 0.0;
  int threads = 1;

  bool operator==(const BornConfig&) const = default;
};

struct InterruptConfig {
  int m = 0;
  std::vector<double> mu0;
  std::uint64_t trials = 0;
  double a = 1.0;
  std::uint64_t seed = 0;
  double t_interrupt = 0.0;
  double conv_tol = 1e-6;
  double dt = 0.0;
  double t_cap = 0.0;
  int threads = 1;

  bool operator==(const InterruptConfig&) const = default;
};

struct CombinedConfig {
  int n = 0;
  MatrixSpec observable;
  LindbladConfig lindblad;
  MatrixSpec rho0;
  double a = 0.01;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double conv_tol = 1e-6;
  double t_cap = 0.0;
  int threads = 1;

  bool operator==(const CombinedConfig&) const = default;
};

struct CheckConfig {
  int n = 0;
  MatrixSpec observable;
  LindbladConfig lindblad;

  bool operator==(const CheckConfig&) const = default;
};

using ExperimentConfig = std::variant<DecohereConfig, PurifyConfig, BornConfig,
                                      CombinedConfig, InterruptConfig, CheckConfig>;

// "decohere" | "purify" | "born" | "combined" | "interrupt" | "check"
std::string command_of(const ExperimentConfig& config);

// Strict parse: unknown keys are rejected, every value is validated against
// the precondition of the module it feeds. command may be empty when the
// JSON carries a "command" key; when both are present they must match.
// Throws ValidationError with key context on any violation.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& command = "");

// Canonical JSON with every default filled in.
// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

// Materialization of the MatrixSpec/LindbladConfig forms into core objects.
Observable resolve_observable(const MatrixSpec& spec, int n);
DensityMatrix resolve_density(const MatrixSpec& spec, int n);
LindbladSpec resolve_lindblad(const LindbladConfig& config, const Observable& a);

}  // namespace collapse
