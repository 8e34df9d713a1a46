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

#include "annealsim/observables.hpp"

#include <algorithm>
#include <cmath>

#include "annealsim/eigensolver.hpp"

namespace annealsim {

double SpinDensityMatrix::expectation(const Eigen::MatrixXcd& op) const {
  if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
    throw std::invalid_argument("spin operator dimension does not match the density matrix");
  }
  return (rho.cwiseProduct(op.transpose())).sum().real();
}

SpinDensityMatrix reduce_to_spins(const Eigen::VectorXcd& amplitudes, const SpaceLayout& layout) {
  if (static_cast<std::size_t>(amplitudes.size()) != layout.dim()) {
    throw std::invalid_argument("state size does not match layout " + layout.describe());
  }
  const auto ds = static_cast<Eigen::Index>(layout.spin_dim());
  const auto db = static_cast<Eigen::Index>(layout.boson_dim());
  // Spin index varies fastest: column b holds the spin amplitudes for boson
  // configuration b.
  Eigen::Map<const Eigen::MatrixXcd> m(amplitudes.data(), ds, db);
  SpinDensityMatrix out;
  out.n_spins = layout.n_spins;
  out.rho = m * m.adjoint();
  const double nrm = out.rho.trace().real();
  if (nrm > 0.0) out.rho /= nrm;
  return out;
}

SpinDensityMatrix reduce_to_spins(const StateVector& psi) { return reduce_to_spins(psi.amplitudes, psi.layout); }

namespace {

Eigen::MatrixXcd spin_register_operator(std::size_t n_spins, const std::vector<std::pair<std::size_t, std::size_t>>& bonds,
                                        Axis axis) {
  OperatorBuilder b(spin_layout(n_spins));
  for (auto [i, j] : bonds) b.add(1.0, {Factor::sigma(axis, i), Factor::sigma(axis, j)});
  return b.build().to_dense();
}

Eigen::MatrixXcd mean_sigma(std::size_t n_spins, Axis axis) {
  OperatorBuilder b(spin_layout(n_spins));
  for (std::size_t i = 0; i < n_spins; ++i) b.add(1.0 / static_cast<double>(n_spins), {Factor::sigma(axis, i)});
  return b.build().to_dense();
}

std::vector<std::pair<std::size_t, std::size_t>> bonds_for(std::size_t n, Boundary boundary) {
  if (n < 2) return {};
  if (boundary == Boundary::kPeriodic && n < 3) return chain_bonds(n, Boundary::kOpen);
  return chain_bonds(n, boundary);
}

}  // namespace

double correlator(const SpinDensityMatrix& rho, Boundary boundary, Axis axis) {
  auto bonds = bonds_for(rho.n_spins, boundary);
  if (bonds.empty()) return 0.0;
  return rho.expectation(spin_register_operator(rho.n_spins, bonds, axis));
}

double correlator(const StateVector& psi, Boundary boundary, Axis axis) {
  auto bonds = bonds_for(psi.layout.n_spins, boundary);
  if (bonds.empty()) return 0.0;
  OperatorBuilder b(psi.layout);
  for (auto [i, j] : bonds) b.add(1.0, {Factor::sigma(axis, i), Factor::sigma(axis, j)});
  return b.build().expectation(psi.amplitudes) / psi.amplitudes.squaredNorm();
}

double boson_number(const StateVector& psi) {
  if (psi.layout.n_modes == 0) throw std::invalid_argument("boson_number: layout has no modes");
  double total = 0.0;
  for (std::size_t idx = 0; idx < psi.layout.dim(); ++idx) {
    total += std::norm(psi.amplitudes[static_cast<Eigen::Index>(idx)]) *
             static_cast<double>(psi.layout.total_occupation(idx));
  }
  return total / psi.amplitudes.squaredNorm();
}

double top_level_occupation(const Eigen::VectorXcd& amplitudes, const SpaceLayout& layout) {
  double worst = 0.0;
  for (std::size_t r = 0; r < layout.n_modes; ++r) {
    double p = 0.0;
    for (std::size_t idx = 0; idx < layout.dim(); ++idx) {
      if (layout.occupation(idx, r) == layout.cutoff) p += std::norm(amplitudes[static_cast<Eigen::Index>(idx)]);
    }
    worst = std::max(worst, p);
  }
  return worst;
}

CutoffMonitor::CutoffMonitor(const SpaceLayout& layout) {
  if (layout.n_modes == 0) return;
  indices_.assign(layout.n_modes, {});
  for (std::size_t idx = 0; idx < layout.dim(); ++idx) {
    for (std::size_t r = 0; r < layout.n_modes; ++r) {
      if (layout.occupation(idx, r) == layout.cutoff) indices_[r].push_back(static_cast<Eigen::Index>(idx));
    }
  }
}

double CutoffMonitor::operator()(const Eigen::VectorXcd& amplitudes) const {
  double worst = 0.0;
  for (const auto& idxs : indices_) {
    double p = 0.0;
    for (Eigen::Index idx : idxs) p += std::norm(amplitudes[idx]);
    worst = std::max(worst, p);
  }
  return worst;
}

double mean_magnetization(const SpinDensityMatrix& rho, Axis axis) {
  return rho.expectation(mean_sigma(rho.n_spins, axis));
}

GroundProjector ground_projector(const SparseOperator& h, double tol) {
  if (h.layout().n_modes != 0) throw std::invalid_argument("ground_projector expects a spin-register Hamiltonian");
  const std::size_t dim = h.dim();
  std::size_t k = std::min<std::size_t>(4, dim);
  std::vector<EigenPair> eigs;
  for (;;) {
    eigs = extremal_eigs(h, k);
    const double e0 = eigs.front().value;
    const bool all_degenerate = eigs.back().value - e0 <= tol;
    if (!all_degenerate || k == dim) break;
    k = std::min(2 * k, dim);
  }
  GroundProjector out;
  out.energy = eigs.front().value;
  const auto d = static_cast<Eigen::Index>(dim);
  out.projector = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& e : eigs) {
    if (e.value - out.energy > tol) break;
    out.projector += e.vector * e.vector.adjoint();
    ++out.rank;
  }
  return out;
}

GroundProjector ground_projector(const IsingParams& target, double tol) {
  return ground_projector(build_ising(target, spin_layout(target.size())), tol);
}

double ground_overlap(const SpinDensityMatrix& rho, const GroundProjector& p) {
  if (rho.rho.rows() != p.projector.rows()) throw std::invalid_argument("projector dimension does not match rho");
  return std::clamp(rho.expectation(p.projector), 0.0, 1.0);
}

double error_probability(const SpinDensityMatrix& rho, const GroundProjector& p) {
  return 1.0 - ground_overlap(rho, p);
}

Observable parse_observable(const std::string& name) {
  if (name == "C") return Observable::kCorrelator;
  if (name == "Nb") return Observable::kBosonNumber;
  if (name == "Y") return Observable::kOverlap;
  if (name == "Perr") return Observable::kErrorProbability;
  if (name == "Mx") return Observable::kMagnetizationX;
  if (name == "My") return Observable::kMagnetizationY;
  if (name == "Mz") return Observable::kMagnetizationZ;
  if (name == "Ntop") return Observable::kTopLevel;
  throw std::invalid_argument("unknown observable '" + name + "' (known: C, Nb, Y, Perr, Mx, My, Mz, Ntop)");
}

std::string observable_name(Observable o) {
  switch (o) {
    case Observable::kCorrelator:
      return "C";
    case Observable::kBosonNumber:
      return "Nb";
    case Observable::kOverlap:
      return "Y";
    case Observable::kErrorProbability:
      return "Perr";
    case Observable::kMagnetizationX:
      return "Mx";
    case Observable::kMagnetizationY:
      return "My";
    case Observable::kMagnetizationZ:
      return "Mz";
    case Observable::kTopLevel:
      return "Ntop";
  }
  return "?";
}

ObservableSet::ObservableSet(const SpaceLayout& layout, Boundary boundary, std::vector<Observable> which,
                             std::optional<GroundProjector> projector)
    : layout_(layout), which_(std::move(which)), projector_(std::move(projector)) {
  validate_layout(layout_);
  const std::size_t ns = layout_.n_spins;
  bool need_projector = false;
  for (Observable o : which_) {
    switch (o) {
      case Observable::kCorrelator: {
        auto bonds = bonds_for(ns, boundary);
        correlator_op_ = bonds.empty() ? Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(layout_.spin_dim()),
                                                                static_cast<Eigen::Index>(layout_.spin_dim()))
                                       : spin_register_operator(ns, bonds, Axis::kX);
        break;
      }
      case Observable::kMagnetizationX:
        mag_x_ = mean_sigma(ns, Axis::kX);
        break;
      case Observable::kMagnetizationY:
        mag_y_ = mean_sigma(ns, Axis::kY);
        break;
      case Observable::kMagnetizationZ:
        mag_z_ = mean_sigma(ns, Axis::kZ);
        break;
      case Observable::kOverlap:
      case Observable::kErrorProbability:
        need_projector = true;
        break;
      case Observable::kBosonNumber:
        occupation_.resize(layout_.dim());
        for (std::size_t idx = 0; idx < layout_.dim(); ++idx) {
          occupation_[idx] = static_cast<double>(layout_.total_occupation(idx));
        }
        break;
      case Observable::kTopLevel:
        top_indices_.assign(layout_.n_modes, {});
        for (std::size_t r = 0; r < layout_.n_modes; ++r) {
          for (std::size_t idx = 0; idx < layout_.dim(); ++idx) {
            if (layout_.occupation(idx, r) == layout_.cutoff) top_indices_[r].push_back(idx);
          }
        }
        break;
    }
  }
  if (need_projector) {
    if (!projector_) throw std::invalid_argument("Y and Perr need a ground projector");
    if (static_cast<std::size_t>(projector_->projector.rows()) != layout_.spin_dim()) {
      throw std::invalid_argument("ground projector dimension does not match the spin register");
    }
  }
}

std::vector<std::string> ObservableSet::names() const {
  std::vector<std::string> out;
  for (Observable o : which_) out.push_back(observable_name(o));
  return out;
}

std::vector<double> ObservableSet::evaluate(const Eigen::VectorXcd& psi) const {
  std::vector<double> out;
  out.reserve(which_.size());
  bool have_rho = false;
  SpinDensityMatrix rho;
  auto get_rho = [&]() -> const SpinDensityMatrix& {
    if (!have_rho) {
      rho = reduce_to_spins(psi, layout_);
      have_rho = true;
    }
    return rho;
  };
  const double norm2 = psi.squaredNorm();
  for (Observable o : which_) {
    switch (o) {
      case Observable::kCorrelator:
        out.push_back(get_rho().expectation(correlator_op_));
        break;
      case Observable::kMagnetizationX:
        out.push_back(get_rho().expectation(mag_x_));
        break;
      case Observable::kMagnetizationY:
        out.push_back(get_rho().expectation(mag_y_));
        break;
      case Observable::kMagnetizationZ:
        out.push_back(get_rho().expectation(mag_z_));
        break;
      case Observable::kOverlap:
        out.push_back(ground_overlap(get_rho(), *projector_));
        break;
      case Observable::kErrorProbability:
        out.push_back(error_probability(get_rho(), *projector_));
        break;
      case Observable::kBosonNumber: {
        double total = 0.0;
        for (std::size_t idx = 0; idx < occupation_.size(); ++idx) {
          total += std::norm(psi[static_cast<Eigen::Index>(idx)]) * occupation_[idx];
        }
        out.push_back(total / norm2);
        break;
      }
      case Observable::kTopLevel: {
        double worst = 0.0;
        for (const auto& idxs : top_indices_) {
          double p = 0.0;
          for (std::size_t idx : idxs) p += std::norm(psi[static_cast<Eigen::Index>(idx)]);
          worst = std::max(worst, p / norm2);
        }
        out.push_back(worst);
        break;
      }
    }
  }
  return out;
}

}  // namespace annealsim
