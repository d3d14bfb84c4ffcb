#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "glauber/cli_runner.hpp"
#include "glauber/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{std::string(glauber::kArtifactName) +
               " - equilibrium birth-death simulator and verification toolkit"};
  app.set_version_flag("--version", glauber::kArtifactVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("--threads", threads, "worker thread cap (default: hardware cores)");
    sub->add_option("--out", out_dir, "override the output directory");
  };

  add_common(app.add_subcommand("simulate", "run chains and write trajectories"));
  add_common(app.add_subcommand("sample", "draw equilibrium samples (mcmc or cftp)"));
  add_common(app.add_subcommand("verify", "run the verification checks and write a report"));
  add_common(app.add_subcommand("oracle-compare",
                                "compare the simulator against the discrete oracle"));
  add_common(app.add_subcommand("gap", "fit autocorrelation decay rates for the battery"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad command line = bad input
  }

  glauber::CliOverrides overrides;
  overrides.seed = seed;
  overrides.threads = threads;
  overrides.out_dir = out_dir;
  return glauber::run_command(app.get_subcommands().front()->get_name(), config_path, overrides);
}
