#include "dforms/cli/runner.hpp"
#include "dforms/cli/selfcheck.hpp"
#include "dforms/core/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace dforms;

int main(int argc, char** argv) {
  CLI::App app{"dforms: differential-form MHD solver with thermodynamic closures"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "integrate a scenario and write artifacts");
  run->add_option("config", run_path, "scenario TOML file")->required();

  std::string validate_path;
  int validate_samples = 200;
  std::uint64_t validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "check a closure for Onsager-Casimir and Curie consistency");
  validate->add_option("config", validate_path, "scenario or closure TOML file")->required();
  validate->add_option("--samples", validate_samples, "group samples")->check(CLI::Range(50, 100000));
  validate->add_option("--seed", validate_seed, "sampling seed");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the built-in invariant checks on small meshes");

  int curie_n = 3;
  int curie_samples = 200;
  std::uint64_t curie_seed = 1;
  auto* curie = app.add_subcommand("curie", "print the isotropic intertwiner tables");
  curie->add_option("--n", curie_n, "space dimension")->check(CLI::IsMember({2, 3}));
  curie->add_option("--samples", curie_samples, "group samples")->check(CLI::Range(50, 100000));
  curie->add_option("--seed", curie_seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      const auto sc = load_scenario(run_path);
      return run_scenario(sc, artifact_dir(run_path), std::cout);
    }
    if (*validate) {
      const auto sc = load_scenario(validate_path, ParseMode::ClosureOnly);
      const auto outcome = validate_scenario(sc, validate_samples, validate_seed);
      std::cout << outcome.json << "\n";
      return outcome.passed ? kExitOk : kExitValidation;
    }
    if (*selfcheck) {
      const auto results = run_selfcheck();
      print_selfcheck(std::cout, results);
      return all_passed(results) ? kExitOk : kExitValidation;
    }
    if (*curie) {
      std::cout << curie_report(curie_n, curie_samples, curie_seed) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ClosureError& e) {
    std::cerr << "closure error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const BoundaryError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
