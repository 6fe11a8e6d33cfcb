#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kresling/errors.hpp"
#include "kresling_cli/commands.hpp"
#include "kresling_cli/config.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kBadConfig = 2, kNumerical = 3, kUnavailable = 4 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("kresling");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("KRESLING_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  namespace cli = kresling::cli;

  CLI::App app{"Kresling origami crawler: segment design, equilibrium paths and gait"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  unsigned jobs = 0;
  double delta_lt = -1;
  int cycles = 0;
  double rate = 0;
  app.add_option("command", command, "design|energy|path|cycle|gait|sweep|pattern")
      ->required()
      ->check(CLI::IsMember({"design", "energy", "path", "cycle", "gait", "sweep", "pattern"}));
  app.add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "sweep worker cap (0 = all cores)");
  app.add_option("--delta-lt", delta_lt, "total-length increment [mm] (0 = stroke/1000)");
  app.add_option("--cycles", cycles, "actuation cycles to simulate")->check(CLI::PositiveNumber);
  app.add_option("--rate", rate, "drive rate [mm/s]")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (out_dir.empty() && command != "design") {
    std::cerr << "error: --out is required for '" << command << "'\n";
    return kBadConfig;
  }

  try {
    cli::RunConfig config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    if (delta_lt >= 0) config.delta_lt_mm = delta_lt;
    if (cycles > 0) config.cycles = cycles;
    if (rate > 0) config.rate_mm_per_s = rate;
    cli::validate(config);

    const cli::CommandResult result = cli::run_command(command, config, {jobs});
    if (!out_dir.empty()) cli::write_atomically(out_dir, result.files);
    std::cout << result.report;
    return kOk;
  } catch (const kresling::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  } catch (const kresling::SolverError& e) {
    std::cerr << "solver failure: " << e.what();
    if (e.step_index()) std::cerr << " at continuation step " << *e.step_index();
    std::cerr << "\n  last iterate:";
    for (double x : e.last_iterate()) std::cerr << ' ' << x;
    std::cerr << '\n';
    return kNumerical;
  } catch (const kresling::RangeError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const kresling::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const kresling::UnavailableError& e) {
    std::cerr << "unavailable: " << e.what() << '\n';
    return kUnavailable;
  } catch (const kresling::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kUnavailable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
