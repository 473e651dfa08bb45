#include "collapse/run.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "collapse/born.hpp"
#include "collapse/combined.hpp"
#include "collapse/errors.hpp"
#include "collapse/io.hpp"
#include "collapse/lindblad.hpp"
#include "collapse/measurement.hpp"
#include "collapse/purification.hpp"

namespace collapse {
namespace {

using nlohmann::json;

struct CommandArtifacts {
  json results;
  std::string csv;         // plot-ready payload for --format csv
  std::string trace_name;  // file name under --trace-dir
};

json complex_matrix_to_json(const ComplexMatrix& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      arr.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  return arr;
}

json report_to_json(const DecoherenceReport& report) {
  return json{{"generated_algebra_matches", report.generated_algebra_matches},
              {"all_initial_converge", report.all_initial_converge},
              {"generated_dim", report.generated_dim},
              {"jump_generated_dim", report.jump_generated_dim},
              {"observable_dim", report.observable_dim}};
}

json stats_to_json(const OutcomeStats& stats) {
  return json{{"trials", stats.trials},
              {"counts", stats.counts},
              {"unresolved", stats.unresolved},
              {"frequencies", stats.frequencies},
              {"born", stats.born},
              {"stderr", stats.stderrs},
              {"max_abs_dev", stats.max_abs_dev},
              {"chi_square", stats.chi_square}};
}

void warn_if_not_decohering(const DecoherenceReport& report, std::ostream& err) {
  if (!report.generated_algebra_matches) {
    err << "warning: generated algebra does not match the observable algebra "
           "(dim "
        << report.generated_dim << " vs " << report.observable_dim
        << "); decoherence onto this observable is not guaranteed\n";
  } else if (!report.all_initial_converge) {
    err << "warning: jump-generated algebra is smaller than the generated "
           "algebra; not every initial state converges\n";
  }
}

CommandArtifacts execute_decohere(const DecohereConfig& config, std::ostream& err) {
  const Observable a = resolve_observable(config.observable, config.n);
  const LindbladSpec spec = resolve_lindblad(config.lindblad, a);
  const DensityMatrix rho0 = resolve_density(config.rho0, config.n);
  const DecoherenceReport report = check_decoherence(spec, a);
  warn_if_not_decohering(report, err);

  const Trajectory traj =
      integrate_lindblad(rho0, spec, config.t_final, config.dt, config.stride);
  const DensityMatrix& final_state = traj.back().state;
  const double pinch_gap = frobenius_distance(
      final_state.matrix(), conditional_expectation(rho0, a).matrix());

  CommandArtifacts art;
  art.results = json{{"decoherence", report_to_json(report)},
                     {"points_recorded", traj.size()},
                     {"t_final", traj.back().t},
                     {"final_state", complex_matrix_to_json(final_state.matrix())},
                     {"final_pinching_distance", pinch_gap}};
  std::ostringstream csv;
  write_lindblad_csv(csv, traj);
  art.csv = csv.str();
  art.trace_name = "trajectory.csv";
  return art;
}

CommandArtifacts execute_purify(const PurifyConfig& config) {
  const SimplexPoint mu0{std::vector<double>(config.mu0)};
  const SimplexPoint mu_ext{std::vector<double>(config.mu_ext)};
  PurificationParams params;
  params.a = config.a;
  params.dt = config.dt;
  params.conv_tol = config.conv_tol;
  params.t_cap = config.t_cap;
  std::vector<PurificationTracePoint> trace;
  const PurificationOutcome outcome =
      integrate_purification(mu0, mu_ext, params, &trace, config.stride);

  CommandArtifacts art;
  art.results =
      json{{"status", outcome.converged() ? "converged" : "unresolved"},
           {"index", outcome.index},
           {"t_elapsed", outcome.t_elapsed},
           {"steps", outcome.steps},
           {"final", outcome.final_state.coords()}};
  std::ostringstream csv;
  write_purification_csv(csv, trace);
  art.csv = csv.str();
  art.trace_name = "trajectory.csv";
  return art;
}

CommandArtifacts execute_born(const BornConfig& config, int threads) {
  const SimplexPoint mu0{std::vector<double>(config.mu0)};
  ExperimentOptions options;
  options.conv_tol = config.conv_tol;
  options.dt = config.dt;
  options.t_cap = config.t_cap;
  options.threads = threads > 0 ? threads : config.threads;
  const RunMode mode =
      config.mode == "full_ode" ? RunMode::full_ode : RunMode::classify_only;
  std::vector<TrialRecord> ledger;
  const OutcomeStats stats =
      run_experiment(mu0, config.trials, config.a, config.seed, mode, options,
                     &ledger);

  CommandArtifacts art;
  art.results = stats_to_json(stats);
  art.results["mode"] = config.mode;
  std::ostringstream csv;
  write_ledger_csv(csv, ledger);
  art.csv = csv.str();
  art.trace_name = "ledger.csv";
  return art;
}

CommandArtifacts execute_interrupt(const InterruptConfig& config, int threads) {
  const SimplexPoint mu0{std::vector<double>(config.mu0)};
  ExperimentOptions options;
  options.conv_tol = config.conv_tol;
  options.dt = config.dt;
  options.t_cap = config.t_cap;
  options.threads = threads > 0 ? threads : config.threads;
  std::vector<TrialRecord> ledger;
  const InterruptedResult result =
      interrupted_experiment(mu0, config.t_interrupt, config.trials, config.a,
                             config.seed, options, &ledger);

  CommandArtifacts art;
  art.results = stats_to_json(result.stats);
  art.results["t_interrupt"] = config.t_interrupt;
  art.results["intermediate_mean"] = result.intermediate_mean;
  art.results["intermediate_stderr"] = result.intermediate_stderr;
  std::ostringstream csv;
  write_ledger_csv(csv, ledger);
  art.csv = csv.str();
  art.trace_name = "ledger.csv";
  return art;
}

CommandArtifacts execute_combined(const CombinedConfig& config, int threads,
                                  std::ostream& err) {
  const Observable a = resolve_observable(config.observable, config.n);
  const LindbladSpec spec = resolve_lindblad(config.lindblad, a);
  const DensityMatrix rho0 = resolve_density(config.rho0, config.n);
  const DecoherenceReport report = check_decoherence(spec, a);
  warn_if_not_decohering(report, err);

  CombinedExperimentOptions options;
  options.conv_tol = config.conv_tol;
  options.t_cap = config.t_cap;
  options.threads = threads > 0 ? threads : config.threads;
  std::vector<TrialRecord> ledger;
  const OutcomeStats stats =
      run_combined_experiment(rho0, spec, a, config.a, config.trials, config.seed,
                              options, &ledger);

  CommandArtifacts art;
  art.results = stats_to_json(stats);
  art.results["decoherence"] = report_to_json(report);
  std::ostringstream csv;
  write_ledger_csv(csv, ledger);
  art.csv = csv.str();
  art.trace_name = "ledger.csv";
  return art;
}

CommandArtifacts execute_check(const CheckConfig& config, std::ostream& err) {
  const Observable a = resolve_observable(config.observable, config.n);
  const LindbladSpec spec = resolve_lindblad(config.lindblad, a);
  const DecoherenceReport report = check_decoherence(spec, a);
  warn_if_not_decohering(report, err);
  const SuperoperatorSpectrum spectrum = superoperator_spectrum(spec);

  json eigenvalues = json::array();
  bool any_decaying = false;
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv.precision(17);
  csv << "re,im\n";
  for (const Complex& lam : spectrum.eigenvalues) {
    eigenvalues.push_back(json::array({lam.real(), lam.imag()}));
    if (lam.real() < -spectrum.tol) any_decaying = true;
    csv << lam.real() << "," << lam.imag() << "\n";
  }

  CommandArtifacts art;
  art.results = json{{"decoherence", report_to_json(report)},
                     {"spectrum",
                      json{{"eigenvalues", eigenvalues},
                           {"zero_subspace_dim", spectrum.zero_subspace_dim},
                           {"zero_real_dim", spectrum.zero_real_dim},
                           {"max_re", spectrum.max_re}}}};
  if (any_decaying) {
    art.results["slowest_decay_rate"] = slowest_decay_rate(spec);
  } else {
    art.results["slowest_decay_rate"] = nullptr;
  }
  art.csv = csv.str();
  art.trace_name = "spectrum.csv";
  return art;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file: " + path);
  file << body;
  if (!file) throw ValidationError("write failed: " + path);
}

}  // namespace

int run_command(const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    if (options.format != "json" && options.format != "csv") {
      throw ValidationError("format must be \"json\" or \"csv\"");
    }
    const auto t0 = std::chrono::steady_clock::now();
    CommandArtifacts art = std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, DecohereConfig>) {
            return execute_decohere(c, err);
          } else if constexpr (std::is_same_v<T, PurifyConfig>) {
            return execute_purify(c);
          } else if constexpr (std::is_same_v<T, BornConfig>) {
            return execute_born(c, options.threads);
          } else if constexpr (std::is_same_v<T, CombinedConfig>) {
            return execute_combined(c, options.threads, err);
          } else if constexpr (std::is_same_v<T, InterruptConfig>) {
            return execute_interrupt(c, options.threads);
          } else {
            static_assert(std::is_same_v<T, CheckConfig>);
            return execute_check(c, err);
          }
        },
        config);
    const auto t1 = std::chrono::steady_clock::now();

    json summary;
    summary["command"] = command_of(config);
    summary["config"] = json::parse(serialize_config(config));
    summary["results"] = std::move(art.results);
    summary["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    const std::string payload =
        options.format == "csv" ? art.csv : summary.dump(2) + "\n";
    if (options.out_path.empty()) {
      out << payload;
    } else {
      write_text(options.out_path, payload);
    }
    if (!options.trace_dir.empty()) {
      std::filesystem::create_directories(options.trace_dir);
      write_text((std::filesystem::path(options.trace_dir) / art.trace_name)
                     .string(),
                 art.csv);
      write_text(
          (std::filesystem::path(options.trace_dir) / "summary.json").string(),
          summary.dump(2) + "\n");
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace collapse
