// curvtrack <command> --config <file> [--out <dir>] [--threads N] [--seed N]

#include <CLI11.hpp>

#include <iostream>

#include "curvtrack/app/commands.hpp"
#include "curvtrack/app/config.hpp"
#include "curvtrack/errors.hpp"

int main(int argc, char** argv) {
  using namespace curvtrack::app;

  CLI::App cli{"Dynamical Berry curvature and Chern numbers of a driven qubit"};
  std::string command;
  std::string config_path;
  RunOptions opts;
  cli.add_option("command", command, "curvature | chern | evolve | map | singularities | validate")
      ->required();
  cli.add_option("-c,--config", config_path, "run configuration file");
  cli.add_option("-o,--out", opts.out_dir, "output directory")->capture_default_str();
  cli.add_option("-t,--threads", opts.threads, "worker threads for sweeps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cli.add_option("--seed", opts.seed, "reserved; all computations are deterministic");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Command cmd = parse_command(command);
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (cmd != Command::Validate) {
      std::cerr << "config error: --config is required for '" << command << "'\n";
      return kExitConfig;
    }
    if (cfg.command && *cfg.command != cmd) {
      std::cerr << "config error: command: file says '" << to_string(*cfg.command)
                << "' but '" << command << "' was requested\n";
      return kExitConfig;
    }
    cfg.command = cmd;
    return run(cfg, opts, std::cout, std::cerr);
  } catch (const curvtrack::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
