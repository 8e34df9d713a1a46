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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "annealsim/noise.hpp"
#include "annealsim/sparse_operator.hpp"

namespace annealsim {

enum class Boundary { kPeriodic, kOpen };
Boundary parse_boundary(const std::string& name);
std::string boundary_name(Boundary b);

enum class ModelKind { kIsing, kSpinBoson };
ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind k);

/// Nearest-neighbour bonds (i, i+1) of a chain, each listed once. Periodic
/// chains add (L-1, 0) and require L >= 3.
std::vector<std::pair<std::size_t, std::size_t>> chain_bonds(std::size_t length, Boundary boundary);

/// H = sum_i (h_i/2) sigma^z_i + sum_{i != j} J_ij sigma^x_i sigma^x_j, each
/// nonzero entry of J applied once.
struct IsingParams {
  std::vector<double> h;
  Eigen::MatrixXd J;
  Boundary boundary = Boundary::kPeriodic;

  std::size_t size() const { return h.size(); }
};

/// H = sum_i (h_i/2) sigma^z_i + sum_{ir} g_ir sigma^x_i (b_r + b_r^dag)
///     + omega sum_r b_r^dag b_r.
struct SBParams {
  std::vector<double> h;
  Eigen::MatrixXd g;  // spins x modes
  double omega = 1.0;
  std::size_t cutoff = 8;
  Boundary boundary = Boundary::kPeriodic;

  std::size_t n_spins() const { return h.size(); }
  std::size_t n_modes() const { return static_cast<std::size_t>(g.cols()); }
  /// phi_ir = g_ir / omega.
  Eigen::MatrixXd phi() const { return g / omega; }
  SpaceLayout layout() const { return {n_spins(), n_modes(), cutoff}; }
};

SparseOperator build_ising(const IsingParams& p, const SpaceLayout& layout);
SparseOperator build_spin_boson(const SBParams& p, const SpaceLayout& layout);

/// h_i = omega0 (1 - s), J_{i,i+1} = -eta omega0 s.
IsingParams ising_schedule(double s, std::size_t length, int eta, double omega0 = 1.0,
                           Boundary boundary = Boundary::kPeriodic);

/// h_i = omega0 (1 - kappa), g_ir = sqrt(omega0 omega kappa)(delta_ir + eta delta_{i,r+1}).
SBParams sb_schedule(double kappa, std::size_t length, int eta, double omega0 = 1.0, double omega = 1.0,
                     std::size_t cutoff = 8, Boundary boundary = Boundary::kPeriodic);

/// Monotone piecewise-linear map s -> kappa on [0, 1].
class RampTable {
 public:
  RampTable() : RampTable(linear()) {}
  RampTable(std::vector<double> s, std::vector<double> kappa);

  /// kappa(s) = s.
  static RampTable linear();

  double kappa(double s) const;
  const std::vector<double>& s_grid() const { return s_; }
  const std::vector<double>& kappa_grid() const { return kappa_; }
  bool is_linear() const;

  void write_csv(std::ostream& out) const;
  static RampTable read_csv(std::istream& in);

 private:
  std::vector<double> s_;
  std::vector<double> kappa_;
};

/// n + 1 evenly spaced points on [0, 1].
std::vector<double> uniform_grid(std::size_t intervals = 100);

struct CalibrationSettings {
  std::size_t length = 3;
  int eta = 1;
  double omega0 = 1.0;
  double omega = 1.0;
  std::size_t cutoff = 8;
  Boundary boundary = Boundary::kPeriodic;
  /// Bisection stops once |C_sb(kappa) - C_is(s)| is below this.
  double tolerance = 1e-9;
  /// Warn when C_sb changes by more than this between cutoff and cutoff-1.
  double cutoff_tolerance = 1e-4;
  std::size_t workers = 1;
};

struct Calibration {
  RampTable table;
  std::vector<std::string> warnings;
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, std::vector<std::pair<double, double>> curve)
      : std::runtime_error(what), curve_(std::move(curve)) {}
  /// (kappa, C_sb) samples that exposed the problem.
  const std::vector<std::pair<double, double>>& curve() const { return curve_; }

 private:
  std::vector<std::pair<double, double>> curve_;
};

/// Ground-state bond correlator sum_<ij> <sigma^x_i sigma^x_j> of each model.
double ising_ground_correlator(double s, const CalibrationSettings& settings);
double sb_ground_correlator(double kappa, const CalibrationSettings& settings);

struct PointCalibration {
  double kappa = 0.0;
  /// Empty unless the correlator is not converged in the cutoff.
  std::string warning;
};

/// kappa at a single s.
PointCalibration calibrate_point(double s, const CalibrationSettings& settings);

/// kappa(s) = C_sb^{-1}(C_is(s)) on the given grid by bisection.
Calibration calibrate_kappa(const std::vector<double>& s_grid, const CalibrationSettings& settings);

/// One operator c sigma^theta_i per spin (c = 1/2 or 1); modes carry no noise.
std::vector<SparseOperator> noise_coupling_operators(Axis axis, const SpaceLayout& layout,
                                                     NoiseCoupling coupling = NoiseCoupling::kHalfAmplitude);

/// Sum over chain bonds of sigma^a_i sigma^a_j.
SparseOperator bond_correlator_operator(const SpaceLayout& layout, Boundary boundary, Axis axis = Axis::kX);

/// Physical description of a chain experiment.
struct ChainModel {
  ModelKind kind = ModelKind::kIsing;
  std::size_t length = 3;
  int eta = 1;
  double omega0 = 1.0;
  double omega = 1.0;
  std::size_t cutoff = 8;
  Boundary boundary = Boundary::kPeriodic;

  SpaceLayout layout() const;
  void validate() const;
};

/// Schedule-parameterized Hamiltonian H(x) + sum_i f_i H_noise,i built from
/// cached structural operators. x is s for the Ising chain and kappa for the
/// spin-boson chain.
class ScheduledHamiltonian {
 public:
  ScheduledHamiltonian(const ChainModel& model, std::vector<SparseOperator> noise_ops = {});

  const ChainModel& model() const { return model_; }
  const SpaceLayout& layout() const { return combo_.layout(); }
  std::size_t noise_channels() const { return n_noise_; }

  /// Operator with the shared sparsity pattern, for assemble_into.
  SparseOperator make_target() const { return combo_.make_target(); }
  void assemble_into(double x, std::span<const double> noise, SparseOperator& target) const;
  SparseOperator at(double x) const;

 private:
  ChainModel model_;
  std::size_t n_structural_ = 0;
  std::size_t n_noise_ = 0;
  OperatorCombination combo_;
};

/// Ising chain at relative time s whose ground manifold defines success for
/// either model kind.
IsingParams target_ising(const ChainModel& model, double s);

/// Everything needed for an annealing passage.
struct AnnealSpec {
  ChainModel model;
  RampTable ramp = RampTable::linear();
  double total_time = 10.0;
  double dt = 0.1;
  Axis noise_axis = Axis::kX;
  double gamma = 0.0;
  NoiseCoupling coupling = NoiseCoupling::kHalfAmplitude;

  /// Schedule parameter passed to ScheduledHamiltonian at relative time s.
  double parameter(double s) const;
  std::size_t steps() const;
  /// total_time / steps(); equals dt when dt divides the total time.
  double step_duration() const { return total_time / static_cast<double>(steps()); }
  void validate() const;
};

}  // namespace annealsim
