#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "collapse/config.hpp"
#include "collapse/errors.hpp"
#include "collapse/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw collapse::ValidationError("cannot read config file: " + path);
  }
  std::ostringstream body;
  body << file.rdbuf();
  return body.str();
}

struct Overrides {
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_trials = false;
  std::uint64_t trials = 0;
};

void apply_overrides(collapse::ExperimentConfig& config, const Overrides& ov) {
  if (!ov.has_seed && !ov.has_trials) return;
  std::visit(
      [&](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, collapse::BornConfig> ||
                      std::is_same_v<T, collapse::InterruptConfig> ||
                      std::is_same_v<T, collapse::CombinedConfig>) {
          if (ov.has_seed) c.seed = ov.seed;
          if (ov.has_trials) {
            if (ov.trials < 1) {
              throw collapse::ValidationError("--trials must be >= 1");
            }
            c.trials = ov.trials;
          }
        } else {
          throw collapse::ValidationError(
              "--seed/--trials only apply to born, interrupt and combined");
        }
      },
      config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "collapse-sim: decoherence, nonlinear purification on the simplex, and "
      "Born-statistics experiments"};
  app.require_subcommand(1);

  std::string config_path;
  collapse::RunOptions options;
  Overrides overrides;
  int threads = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_path,
                    "summary output path (default: stdout)");
    sub->add_option("--trace-dir", options.trace_dir,
                    "directory for trajectory/ledger CSV files");
    sub->add_option("--format", options.format, "payload format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", threads,
                    "worker threads (fallback: COLLAPSE_SIM_THREADS, then the "
                    "config value)");
    sub->add_option("--seed", overrides.seed, "override the config seed");
    sub->add_option("--trials", overrides.trials, "override the config trials");
  };

  const char* const commands[] = {"decohere", "purify",    "born",
                                  "combined", "interrupt", "check"};
  const char* const descriptions[] = {
      "integrate a Lindblad equation and compare against the pinching map",
      "integrate the nonlinear simplex dynamics for one (mu0, mu_ext) pair",
      "Monte Carlo outcome statistics against the Born probabilities",
      "single-equation dynamics on density matrices, Monte Carlo over mu_ext",
      "two-stage interrupted/restarted experiment",
      "algebraic decoherence criteria and generator spectrum"};
  for (int i = 0; i < 6; ++i) {
    add_common(app.add_subcommand(commands[i], descriptions[i]));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  overrides.has_seed = sub->count("--seed") > 0;
  overrides.has_trials = sub->count("--trials") > 0;
  if (sub->count("--threads") == 0) {
    if (const char* env = std::getenv("COLLAPSE_SIM_THREADS")) {
      threads = std::atoi(env);
    }
  }
  options.threads = threads;

  try {
    collapse::ExperimentConfig config =
        collapse::parse_config(read_file(config_path), sub->get_name());
    apply_overrides(config, overrides);
    return collapse::run_command(config, options, std::cout, std::cerr);
  } catch (const collapse::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
