// Command-line front end. See README.md for the subcommands and config keys.
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "rwlab/commands.hpp"
#include "rwlab/config.hpp"
#include "rwlab/errors.hpp"

int main(int argc, char** argv) {
  using namespace rwlab;
  CLI::App app{"Regge-Wheeler decay laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (overrides outputs.dir)");
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the default)")
      ->check(CLI::NonNegativeNumber);

  for (const auto& name : cli::command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsageError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  cli::CommandContext ctx;
  ctx.out = &std::cout;
  ctx.err = &std::cerr;
  try {
    if (!config_path.empty()) {
      ctx.config = load_config(config_path);
    } else if (command != "decay-report") {
      std::cerr << "config error [--config]: a configuration file is required\n";
      return cli::kUsageError;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kUsageError;
  }
  ctx.out_dir = out_dir.empty() ? ctx.config.outputs.dir : out_dir;
  return cli::run_command(command, ctx);
}
