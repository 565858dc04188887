// Command line front end: loads a run configuration, applies the command
// line overrides, executes the command, and maps errors to exit codes
// (0 solved, 2 controlled refusal, 1 internal failure).
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "curlgs/config.hpp"
#include "curlgs/errors.hpp"
#include "curlgs/io.hpp"
#include "curlgs/run.hpp"

namespace {

int resolve_threads(std::optional<int> option) {
  if (option) return *option;
  if (const char* env = std::getenv("CURLGS_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw curlgs::ConfigError(
          std::string("CURLGS_THREADS is not an integer: ") + env);
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground states of semilinear curl-curl problems (curlgs " +
               curlgs::tool_version() + ")"};
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("command", command,
                 "eigs | ground | symmetric | check-nonlinearity | oracle")
      ->required();
  app.add_option("--config", config_path, "path to the run configuration")
      ->required();
  app.add_option("--out-dir", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads,
                 "worker threads (default: CURLGS_THREADS or 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    curlgs::RunConfig config = curlgs::load_config_file(config_path);
    if (command != curlgs::to_string(config.command)) {
      throw curlgs::ConfigError("config file " + config_path +
                                " sets command = " +
                                curlgs::to_string(config.command) +
                                " but the command line asked for " + command);
    }
    if (seed) {
      config.seed = *seed;
      config.solver.seed = *seed;
    }
    if (out_dir) {
      config.out_dir = *out_dir;
    }
    const int n_threads = resolve_threads(threads);
    if (n_threads < 1) {
      throw curlgs::ConfigError("thread count must be at least 1");
    }
    Eigen::setNbThreads(n_threads);

    const curlgs::RunResult result = curlgs::run(config);
    for (const std::string& artifact : result.artifacts) {
      std::cout << "wrote " << artifact << "\n";
    }
    if (!result.message.empty()) {
      std::cerr << "curlgs: " << result.message << "\n";
    }
    return result.exit_code;
  } catch (const curlgs::ConfigError& error) {
    std::cerr << "curlgs: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "curlgs: " << error.what() << "\n";
    return 1;
  }
}
