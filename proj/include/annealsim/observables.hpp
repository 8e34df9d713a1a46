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

#include <optional>
#include <string>
#include <vector>

#include "annealsim/model.hpp"
#include "annealsim/sparse_operator.hpp"

namespace annealsim {

/// Reduced state of the spin register, 2^L x 2^L.
struct SpinDensityMatrix {
  std::size_t n_spins = 0;
  Eigen::MatrixXcd rho;

  double trace() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
  /// tr(rho O) for an operator on the spin register.
  double expectation(const Eigen::MatrixXcd& op) const;
};

/// Partial trace over every bosonic mode.
SpinDensityMatrix reduce_to_spins(const StateVector& psi);
SpinDensityMatrix reduce_to_spins(const Eigen::VectorXcd& amplitudes, const SpaceLayout& layout);

/// sum over chain bonds of <sigma^a_i sigma^a_j>.
double correlator(const StateVector& psi, Boundary boundary, Axis axis = Axis::kX);
double correlator(const SpinDensityMatrix& rho, Boundary boundary, Axis axis = Axis::kX);

/// <sum_r b_r^dag b_r>.
double boson_number(const StateVector& psi);
/// Largest probability, over modes, of finding a mode at the cutoff level.
double top_level_occupation(const Eigen::VectorXcd& amplitudes, const SpaceLayout& layout);

/// top_level_occupation with the per-mode index lists built once.
class CutoffMonitor {
 public:
  CutoffMonitor() = default;
  explicit CutoffMonitor(const SpaceLayout& layout);
  double operator()(const Eigen::VectorXcd& amplitudes) const;
  bool active() const { return !indices_.empty(); }

 private:
  std::vector<std::vector<Eigen::Index>> indices_;
};

/// Mean over sites of <sigma^a_i>.
double mean_magnetization(const SpinDensityMatrix& rho, Axis axis);

/// Projector onto every eigenstate within `degeneracy_tol` of the lowest
/// eigenvalue of a spin-register Hamiltonian.
struct GroundProjector {
  Eigen::MatrixXcd projector;
  std::size_t rank = 0;
  double energy = 0.0;
};

GroundProjector ground_projector(const SparseOperator& h_target, double degeneracy_tol = 1e-8);
GroundProjector ground_projector(const IsingParams& target, double degeneracy_tol = 1e-8);

/// Y = tr(rho P_gs), clamped to [0, 1] against rounding.
double ground_overlap(const SpinDensityMatrix& rho, const GroundProjector& p);
/// 1 - Y.
double error_probability(const SpinDensityMatrix& rho, const GroundProjector& p);

/// Registry names: "C", "Nb", "Y", "Perr", "Mx", "Mz", "Ntop".
enum class Observable {
  kCorrelator,
  kBosonNumber,
  kOverlap,
  kErrorProbability,
  kMagnetizationX,
  kMagnetizationY,
  kMagnetizationZ,
  kTopLevel
};
Observable parse_observable(const std::string& name);
std::string observable_name(Observable o);

/// Fixed list of observables evaluated on full state vectors. Precomputes the
/// spin-space operators, occupation tables and projector once.
class ObservableSet {
 public:
  ObservableSet(const SpaceLayout& layout, Boundary boundary, std::vector<Observable> which,
                std::optional<GroundProjector> projector = std::nullopt);

  const std::vector<Observable>& observables() const { return which_; }
  std::vector<std::string> names() const;
  std::vector<double> evaluate(const Eigen::VectorXcd& psi) const;

 private:
  SpaceLayout layout_;
  std::vector<Observable> which_;
  std::optional<GroundProjector> projector_;
  Eigen::MatrixXcd correlator_op_;
  Eigen::MatrixXcd mag_x_;
  Eigen::MatrixXcd mag_y_;
  Eigen::MatrixXcd mag_z_;
  std::vector<double> occupation_;
  std::vector<std::vector<std::size_t>> top_indices_;
};

}  // namespace annealsim
