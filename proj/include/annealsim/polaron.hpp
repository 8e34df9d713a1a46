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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "annealsim/model.hpp"

namespace annealsim {

/// Laguerre polynomial L_k(x) by the three-term recurrence.
double laguerre(std::size_t k, double x);

/// Occupations (n_0, ..., n_{L_b - 1}) of the bosonic modes.
using BosonConfig = std::vector<std::size_t>;

/// Ising parameters of the projected polaron-frame Hamiltonian for one boson
/// configuration: h_i and J_ij = omega sum_r phi_ir phi_jr (symmetric, zero
/// diagonal).
struct EffectiveParams {
  std::vector<double> h;
  Eigen::MatrixXd J;
};

/// h^(n)_i = h_i exp(-2 sum_r phi_ir^2) prod_r L_{n_r}(4 phi_ir^2),
/// J^(n) = J^(0) for every n.
EffectiveParams effective_params(const BosonConfig& n, const std::vector<double>& h, const Eigen::MatrixXd& phi,
                                 double omega);

/// Same, taken from a spin-boson parameter set.
EffectiveParams effective_params(const BosonConfig& n, const SBParams& p);

/// Ising chain reproducing the projected Hamiltonian. The polaron shift
/// produces -omega (sum_i phi_ir sigma^x_i)^2 per mode, so each bond carries
/// -(J_ij + J_ji); the spin constant is dropped.
IsingParams effective_ising(const EffectiveParams& e, Boundary boundary);

/// h^(q)_i = (h0_i / L) sum_r [L_1(4 phi_ir^2) + 4 cos(q) phi_ir phi_i,r+1],
/// r + 1 taken mod L. phi must be square and circulant.
std::vector<double> momentum_field(double q, const std::vector<double>& h0, const Eigen::MatrixXd& phi);

/// Order-of-magnitude hybridization sqrt(s omega0 / omega) (1 - s) omega0.
double hybridization_estimate(double s, double omega0 = 1.0, double omega = 1.0);

struct MatrixElementRow {
  std::size_t index = 0;  // 1 = first excited state
  double energy = 0.0;    // above the ground state
  double boson_number = 0.0;
  /// <sum_r bt_r^dag bt_r> with bt_r = b_r + sum_i phi_ir sigma^x_i, the
  /// occupation seen in the polaron frame. NaN when phi was not supplied.
  double polaron_number = 0.0;
  double mx = 0.0;  // |<e| c sigma^x_site |g>|
  double mz = 0.0;  // |<e| c sigma^z_site |g>|
};

/// Noise matrix elements between the ground state of `h` and its `k` lowest
/// excited states, computed in the lab frame with eigenstates of h. The
/// noise amplitude c is 1/2 for NoiseCoupling::kHalfAmplitude.
std::vector<MatrixElementRow> noise_matrix_elements(const SparseOperator& h, std::size_t site, std::size_t k,
                                                    NoiseCoupling coupling = NoiseCoupling::kHalfAmplitude,
                                                    const std::optional<Eigen::MatrixXd>& phi = std::nullopt);

/// Sum_r bt_r^dag bt_r for bt_r = b_r + sum_i phi_ir sigma^x_i.
SparseOperator polaron_number_operator(const SpaceLayout& layout, const Eigen::MatrixXd& phi);

enum class BosonCharacter { kLab, kPolaron };

/// Sum of |M|^2 over rows whose boson number (lab or polaron frame) exceeds
/// the threshold.
double boson_excited_weight(const std::vector<MatrixElementRow>& rows, Axis axis, double threshold = 0.5,
                            BosonCharacter character = BosonCharacter::kLab);

void write_matrix_elements_csv(std::ostream& out, const std::vector<MatrixElementRow>& rows);

}  // namespace annealsim
