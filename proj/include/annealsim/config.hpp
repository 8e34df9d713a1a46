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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "annealsim/model.hpp"
#include "annealsim/noise.hpp"
#include "annealsim/observables.hpp"

namespace annealsim {

inline constexpr int kConfigSchema = 1;

enum class ExperimentKind {
  kStaticDecay,
  kAnnealingSweep,
  kGapScan,
  kNoiseValidation,
  kMatrixElements,
  kCalibrateRamp
};
ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

/// Invalid configuration; problems() lists every offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ModelSection {
  std::vector<ModelKind> kinds{ModelKind::kIsing, ModelKind::kSpinBoson};
  std::vector<std::size_t> lengths{3};
  int eta = 1;
  double omega0 = 1.0;
  double omega = 1.0;
  std::size_t cutoff = 8;
  Boundary boundary = Boundary::kPeriodic;
  /// "calibrated", "linear" or a path to a ramp CSV.
  std::string ramp = "calibrated";
  /// Chain length used to calibrate the ramp; 0 calibrates at each length.
  std::size_t ramp_length = 0;
  std::size_t ramp_intervals = 100;
};

struct NoiseSection {
  std::vector<Axis> axes{Axis::kX, Axis::kZ};
  double gamma = 0.2;
  NoiseCoupling coupling = NoiseCoupling::kUnitAmplitude;
  double dt = 0.1;
};

enum class FitWeights { kUniform, kInverseVariance };

struct StaticSection {
  double s = 0.25;
  double t_max = 200.0;
  std::vector<Observable> observables{Observable::kCorrelator, Observable::kBosonNumber, Observable::kOverlap,
                                      Observable::kErrorProbability};
  bool fit = true;
  FitWeights weights = FitWeights::kInverseVariance;
};

struct AnnealSection {
  std::vector<double> times{1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0};
  std::vector<Observable> observables{Observable::kErrorProbability, Observable::kOverlap,
                                      Observable::kBosonNumber, Observable::kCorrelator};
  bool fit = true;
  FitWeights weights = FitWeights::kInverseVariance;
};

struct GapSection {
  /// Spin-boson cutoffs to scan; empty means model.cutoff.
  std::vector<std::size_t> cutoffs;
  double x_min = 0.0;
  double x_max = 1.0;
  double coarse_step = 0.05;
  double fine_step = 0.01;
  double fine_halfwidth = 0.05;
  double golden_tolerance = 1e-5;
  bool sector_gap = true;
  /// When positive, lengths after the first scan only argmin +- this of the
  /// previous length.
  double bracket_halfwidth = 0.0;
};

struct NoiseValidationSection {
  std::vector<double> gammas{0.1, 0.2};
  /// Runs last this many theoretical decay times.
  double t_max_factor = 2.0;
  bool dt_halving = true;
  bool spectrum = true;
  /// Spectrum ensemble size; 0 uses the run's realizations.
  std::size_t spectrum_realizations = 0;
  double spectrum_duration = 1000.0;
  std::size_t spectrum_points = 60;
  /// Highest frequency in units of 1/tau.
  double spectrum_max_frequency = 0.3;
};

struct MatrixElementsSection {
  double s = 0.25;
  std::size_t levels = 40;
  std::size_t site = 0;
  double threshold = 0.5;
};

struct CalibrateSection {
  std::size_t intervals = 100;
  double tolerance = 1e-9;
};

/// A fully validated run description. Same config and seed give identical
/// numeric outputs.
struct ExperimentConfig {
  int schema = kConfigSchema;
  std::string name;
  ExperimentKind experiment = ExperimentKind::kStaticDecay;
  std::uint64_t seed = 1;
  std::size_t realizations = 500;
  std::size_t workers = 1;
  std::string output;
  std::size_t record_samples = 200;
  /// Blocks whose Hilbert space exceeds this are skipped with a warning.
  std::size_t max_dimension = 4000000;
  /// Directory relative ramp paths are resolved against.
  std::filesystem::path base_directory;

  ModelSection model;
  NoiseSection noise;
  StaticSection static_run;
  AnnealSection anneal;
  GapSection gap;
  NoiseValidationSection noise_validation;
  MatrixElementsSection matrix_elements;
  CalibrateSection calibrate;

  /// Canonical form with every default filled in.
  nlohmann::json to_json() const;
  /// Digest of to_json() without output and workers.
  std::string fingerprint() const;
  /// Resolved ramp file, if model.ramp names one.
  std::optional<std::filesystem::path> ramp_path() const;
};

/// Validates a parsed document; throws ConfigError listing all problems.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_directory = {});

/// Parses TOML text; syntax errors become a ConfigError.
ExperimentConfig config_from_toml(const std::string& text, const std::filesystem::path& base_directory = {});

/// Reads and validates a config file, then applies ANNEALSIM_OUT and
/// ANNEALSIM_WORKERS.
ExperimentConfig load_config(const std::filesystem::path& path);

void apply_environment(ExperimentConfig& config);

}  // namespace annealsim
