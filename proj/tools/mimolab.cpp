// Command-line driver: configuration-driven experiment runner.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mimolab/errors.hpp"
#include "mimolab/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInsufficientData = 4;

int dispatch(const std::string& command, const std::string& config_path,
             unsigned workers_override) {
  mimolab::ExperimentConfig cfg = mimolab::load_experiment_config(config_path);
  if (workers_override > 0) {
    cfg.workers = workers_override;
  }
  if (command == "sweep") return mimolab::run_sweep(cfg, std::cout);
  if (command == "slope") return mimolab::run_slope(cfg, std::cout);
  if (command == "validate") return mimolab::run_validate(cfg, std::cout);
  if (command == "theory") return mimolab::run_theory(cfg, std::cout);
  if (command == "linksim") return mimolab::run_linksim(cfg, std::cout);
  throw mimolab::ConfigError("unknown subcommand '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mimolab: outage, symbol-error and diversity simulation for linearly "
      "precoded MIMO links"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers_override = 0;

  for (const auto& name :
       {"sweep", "slope", "validate", "theory", "linksim"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "flat JSON experiment config")
        ->required();
    sub->add_option("-w,--workers", workers_override,
                    "worker thread count (no effect on output values)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    return dispatch(command, config_path, workers_override);
  } catch (const mimolab::InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kExitInsufficientData;
  } catch (const mimolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mimolab::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mimolab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
