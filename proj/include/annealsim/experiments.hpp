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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "annealsim/config.hpp"

namespace annealsim {

/// Version string recorded in every manifest.
std::string code_version();

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  /// Write into a non-empty output directory.
  bool force = false;
  /// Progress messages; null silences them.
  std::ostream* log = nullptr;
};

struct RunResult {
  std::filesystem::path directory;
  /// Paths relative to directory, in write order.
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  nlohmann::json summary;
};

/// Executes a validated configuration and writes CSV tables, summary.json
/// and manifest.json into config.output.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct Recipe {
  std::string name;
  std::string description;
  /// Configuration text; output, seed and realizations may be overridden.
  std::string toml;
};

const std::vector<Recipe>& recipes();
const Recipe& find_recipe(const std::string& name);

struct RecipeOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::string> output;
  std::optional<std::size_t> workers;
};

/// Recipe configuration with environment variables applied first and
/// explicit overrides last.
ExperimentConfig recipe_config(const std::string& name, const RecipeOverrides& overrides = {});

}  // namespace annealsim
