// qss: verify threshold schemes, estimate compound-channel capacities, and run teleportation checks.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qss/error.hpp"

namespace {

void add_common(CLI::App* cmd, qss::cli::RunConfig& config, bool input_required) {
  auto* input = cmd->add_option("--input", config.input_path, "Input JSON file");
  if (input_required) input->required();
  cmd->add_option("--output", config.output_path, "Report path (default: stdout)");
  cmd->add_option("--seed", config.seed, "Seed for every random draw")->capture_default_str();
  cmd->add_option("--tolerance", config.tolerance, "Pass/fail tolerance");
  cmd->add_option("--format", config.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--n", config.n, "Tensor-power level for the product-input rate (1 or 2)")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  cmd->add_option("--trials", config.trials, "Random trials per check");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum secret sharing: scheme verification and capacity estimates"};
  app.require_subcommand(1);

  qss::cli::RunConfig config;
  auto* verify = app.add_subcommand("verify-scheme", "Check recovery and secrecy of a threshold scheme");
  auto* capacity = app.add_subcommand("capacity", "Max-min coherent information of a compound family");
  auto* sweep = app.add_subcommand("sweep", "Capacity over a range of one member's parameter");
  auto* teleport = app.add_subcommand("teleport-demo", "Teleport seeded states through a maximally entangled pair");
  add_common(verify, config, true);
  add_common(capacity, config, true);
  add_common(sweep, config, true);
  add_common(teleport, config, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qss::cli::kInputError;
  }

  try {
    if (*verify) return qss::cli::verify_scheme(config);
    if (*capacity) return qss::cli::capacity(config);
    if (*sweep) return qss::cli::sweep(config);
    return qss::cli::teleport_demo(config);
  } catch (const qss::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
  }
  return qss::cli::kInputError;
}
