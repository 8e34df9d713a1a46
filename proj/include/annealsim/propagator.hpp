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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "annealsim/krylov.hpp"
#include "annealsim/model.hpp"
#include "annealsim/noise.hpp"
#include "annealsim/observables.hpp"

namespace annealsim {

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  /// records[t][k]: observable k at times[t].
  std::vector<std::vector<double>> records;
  std::uint64_t seed = 0;
  /// Accumulated |norm - 1| corrections over all steps.
  double norm_drift = 0.0;
  double max_renormalization = 0.0;
  std::size_t max_krylov_dimension = 0;
  /// Largest top-Fock-level probability seen at any step.
  double max_top_occupation = 0.0;
  Eigen::VectorXcd final_state;
};

/// Step indices at which to record: `samples` evenly spaced points over
/// [0, n_steps], always including both ends.
std::vector<std::size_t> record_steps(std::size_t n_steps, std::size_t samples = 200);
/// Steps 0, stride, 2 stride, ... and n_steps.
std::vector<std::size_t> strided_steps(std::size_t n_steps, std::size_t stride);

struct PropagationOptions {
  KrylovOptions krylov;
  std::size_t record_samples = 200;
  /// When nonzero, record every record_stride steps (and the last step)
  /// instead of record_samples evenly spaced samples.
  std::size_t record_stride = 0;
  /// Track the top Fock level at every step (not only at record times).
  bool track_cutoff = true;
};

/// Fixed-parameter evolution under H0 + sum_i f_i(t) V_i, with f_i piecewise
/// constant on the realization's steps (dt = tau_m). Starts from the noise-free
/// ground state of H0 unless `initial` is given.
Trajectory evolve_static(const SparseOperator& h0, const std::vector<SparseOperator>& noise_ops,
                         const NoiseRealization& realization, double t_max, const ObservableSet& observables,
                         const PropagationOptions& options = {},
                         const std::optional<Eigen::VectorXcd>& initial = std::nullopt);

/// Annealing passage s = t/T from 0 to 1. Step k uses the Hamiltonian at the
/// midpoint s_k = (k + 1/2) dt / T and noise value f_i on step k. The initial
/// state is the ground state at s = 0. Records use the supplied observables
/// (typically with the endpoint ground projector).
Trajectory evolve_annealing(const AnnealSpec& spec, const ScheduledHamiltonian& hamiltonian,
                            const NoiseRealization& realization, const ObservableSet& observables,
                            const PropagationOptions& options = {});

struct EnsembleStats {
  std::vector<double> times;
  std::vector<std::string> names;
  /// mean[k][t], standard_error[k][t] for observable k.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> standard_error;
  std::size_t count = 0;
  /// False when count < 2.
  bool errors_defined = false;
  std::string fingerprint;
  double max_norm_drift = 0.0;
  double max_top_occupation = 0.0;
  std::size_t max_krylov_dimension = 0;

  std::size_t index_of(const std::string& name) const;
  /// Final-time means over trajectories.
  double final_mean(const std::string& name) const;
  double final_error(const std::string& name) const;
};

class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(const std::string& what, std::size_t index, std::uint64_t seed)
      : std::runtime_error(what), index_(index), seed_(seed) {}
  std::size_t index() const { return index_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t index_;
  std::uint64_t seed_;
};

/// Produces trajectory `index` from its derived seed.
using TrajectoryTask = std::function<Trajectory(std::size_t index, std::uint64_t seed)>;

/// Runs n trajectories with seeds derive_seed(master_seed, index) on up to
/// `workers` threads, then reduces in index order so results do not depend on
/// scheduling. A failing trajectory aborts with its index and seed.
EnsembleStats run_ensemble(const TrajectoryTask& task, std::size_t n_real, std::uint64_t master_seed,
                           std::size_t workers, const std::string& fingerprint = {});

/// Ensemble statistics of already computed trajectories, reduced in order.
EnsembleStats aggregate(const std::vector<Trajectory>& trajectories, const std::string& fingerprint = {});

}  // namespace annealsim
