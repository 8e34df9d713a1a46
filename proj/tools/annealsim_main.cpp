// Copyright 2026 The annealsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "annealsim/config.hpp"
#include "annealsim/experiments.hpp"
#include "annealsim/propagator.hpp"

namespace {

int report_config_error(const annealsim::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
  return 2;
}

int execute(const annealsim::ExperimentConfig& config, bool force, bool quiet) {
  annealsim::RunOptions options;
  options.force = force;
  options.log = quiet ? nullptr : &std::cerr;
  const annealsim::RunResult result = annealsim::run_experiment(config, options);
  std::cout << "wrote " << result.files.size() << " files to " << result.directory.string() << "\n";
  if (!result.warnings.empty()) std::cout << result.warnings.size() << " warning(s), see summary.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealsim: noisy quantum annealing with direct and boson-mediated couplings"};
  app.require_subcommand(1);

  std::string config_path;
  bool force = false;
  bool quiet = false;
  std::optional<std::size_t> workers;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file (TOML)")->required();
  run->add_flag("--force", force, "Write into a non-empty output directory");
  run->add_flag("-q,--quiet", quiet, "Suppress progress messages");
  run->add_option("--workers", workers, "Worker threads (overrides config and ANNEALSIM_WORKERS)");

  std::string recipe_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::string> out;
  bool print_config = false;
  auto* recipe = app.add_subcommand("recipe", "Run a bundled figure recipe");
  recipe->add_option("name", recipe_name, "Recipe name (see list-recipes)")->required();
  recipe->add_option("--seed", seed, "Master seed");
  recipe->add_option("--realizations", realizations, "Trajectories per ensemble");
  recipe->add_option("--out", out, "Output directory");
  recipe->add_option("--workers", workers, "Worker threads");
  recipe->add_flag("--force", force, "Write into a non-empty output directory");
  recipe->add_flag("-q,--quiet", quiet, "Suppress progress messages");
  recipe->add_flag("--print-config", print_config, "Print the recipe configuration instead of running it");

  auto* list = app.add_subcommand("list-recipes", "List bundled recipes");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config_path, "Config file (TOML)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& r : annealsim::recipes()) std::cout << r.description << "\n";
      return 0;
    }
    if (*validate) {
      const annealsim::ExperimentConfig c = annealsim::load_config(config_path);
      std::cout << "valid " << annealsim::experiment_kind_name(c.experiment) << " config '" << c.name
                << "', fingerprint " << c.fingerprint() << "\n";
      return 0;
    }
    if (*run) {
      annealsim::ExperimentConfig c = annealsim::load_config(config_path);
      if (workers) c.workers = *workers;
      return execute(c, force, quiet);
    }
    if (*recipe) {
      annealsim::RecipeOverrides o;
      o.seed = seed;
      o.realizations = realizations;
      o.output = out;
      o.workers = workers;
      const annealsim::ExperimentConfig c = annealsim::recipe_config(recipe_name, o);
      if (print_config) {
        std::cout << c.to_json().dump(2) << "\n";
        return 0;
      }
      return execute(c, force, quiet);
    }
  } catch (const annealsim::ConfigError& e) {
    return report_config_error(e);
  } catch (const annealsim::TrajectoryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
