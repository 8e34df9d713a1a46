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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "annealsim/eigensolver.hpp"
#include "annealsim/model.hpp"

namespace annealsim {

struct GapOptions {
  /// Measure above the whole ground level (eigenvalues within tolerance of
  /// E0) instead of E1 - E0.
  bool above_degenerate = false;
  double degeneracy_tol = 1e-8;
  /// Restrict to one parity sector (see EigOptions::parity).
  std::optional<int> parity;
  /// Solver settings; parity above overrides eig.parity.
  EigOptions eig{};
};

/// Spectral gap of a Hermitian operator.
double gap(const SparseOperator& h, const GapOptions& options = {});

struct GapScan {
  ModelKind kind = ModelKind::kIsing;
  std::size_t length = 0;
  std::size_t cutoff = 0;
  /// Schedule parameter: s for the Ising chain, kappa for the spin-boson
  /// chain (any monotone ramp onto [0, 1] has the same minimum).
  std::vector<double> grid;
  std::vector<double> gaps;
  double minimum = 0.0;
  double argmin = 0.0;
};

struct GapScanOptions {
  /// Scanned interval of the schedule parameter.
  double x_min = 0.0;
  double x_max = 1.0;
  double coarse_step = 0.05;
  double fine_step = 0.01;
  /// Half-width of the fine grid around the coarse minimum.
  double fine_halfwidth = 0.05;
  double golden_tolerance = 1e-5;
  /// Gap inside the parity sector of the initial ground state ((-1)^L),
  /// which the passage never leaves. Otherwise the gap above the degenerate
  /// ground level in the full space.
  bool sector_gap = true;
  std::size_t workers = 1;
};

/// Coarse scan, local fine scan and golden-section refinement of the
/// passage gap.
GapScan minimum_gap_scan(const ChainModel& model, const GapScanOptions& options = {});

/// Hamiltonian of the chain at schedule parameter x (s or kappa), built
/// directly without cached terms.
SparseOperator chain_hamiltonian(const ChainModel& model, double x);

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> errors;
  /// sqrt(sum_i w_i r_i^2).
  double residual_norm = 0.0;
  bool converged = false;
  std::size_t points = 0;
  std::size_t iterations = 0;
  std::string message;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least squares Delta = a / L + b / L^2.
FitResult fit_gap_scaling(const std::vector<std::pair<double, double>>& points);

/// Y(t) = [(1 + a exp(-(t/T_q)^p)) / 2]^L.
double decay_law(double t, double a, double tq, double p, std::size_t length);

struct DecayFitOptions {
  std::optional<double> fix_a;
  /// Per-point standard errors; inverse-variance weights when non-empty.
  std::vector<double> sigma;
  std::vector<double> tq_starts{5.0, 20.0, 80.0, 320.0};
  std::vector<double> p_starts{0.4, 0.8, 1.2};
  std::size_t max_iterations = 500;
  double tolerance = 1e-12;
};

/// Bounded Levenberg-Marquardt fit of decay_law with a in (0, 1], T_q > 0,
/// p > 0, from every start in the grid; the best residual wins.
FitResult fit_decay(const std::vector<double>& times, const std::vector<double>& values, std::size_t length,
                    const DecayFitOptions& options = {});

/// One-parameter fit of y(t) = exp(-t / T) (the "T" parameter), optionally
/// inverse-variance weighted by sigma.
FitResult fit_exponential_decay(const std::vector<double>& times, const std::vector<double>& values,
                                const std::vector<double>& sigma = {});

/// Index where a P_error(T) curve starts to grow: its minimum.
std::size_t growth_region_start(const std::vector<double>& error_probability);

}  // namespace annealsim
