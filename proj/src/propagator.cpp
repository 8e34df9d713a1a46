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

#include "annealsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "annealsim/eigensolver.hpp"
#include "annealsim/parallel.hpp"

namespace annealsim {

std::vector<std::size_t> record_steps(std::size_t n_steps, std::size_t samples) {
  if (samples < 2) samples = 2;
  std::vector<std::size_t> out;
  if (n_steps + 1 <= samples) {
    for (std::size_t k = 0; k <= n_steps; ++k) out.push_back(k);
    return out;
  }
  for (std::size_t j = 0; j < samples; ++j) {
    auto k = static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(n_steps) /
                                                   static_cast<double>(samples - 1)));
    if (out.empty() || k != out.back()) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> strided_steps(std::size_t n_steps, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("strided_steps: stride must be >= 1");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= n_steps; k += stride) out.push_back(k);
  if (out.back() != n_steps) out.push_back(n_steps);
  return out;
}

namespace {

std::size_t steps_for(double t_max, double tau) {
  const double ratio = t_max / tau;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

// Shared stepping loop: `assemble(k, H)` fills the Hamiltonian for step k.
template <typename Assemble>
Trajectory propagate(Eigen::VectorXcd psi, std::size_t n_steps, double dt, const SpaceLayout& layout,
                     SparseOperator h, Assemble&& assemble, const ObservableSet& observables,
                     const PropagationOptions& options) {
  Trajectory traj;
  traj.names = observables.names();
  const std::vector<std::size_t> rec = options.record_stride ? strided_steps(n_steps, options.record_stride)
                                                            : record_steps(n_steps, options.record_samples);
  traj.times.reserve(rec.size());
  traj.records.reserve(rec.size());
  std::size_t next = 0;
  auto maybe_record = [&](std::size_t k) {
    if (next < rec.size() && rec[next] == k) {
      traj.times.push_back(static_cast<double>(k) * dt);
      traj.records.push_back(observables.evaluate(psi));
      ++next;
    }
  };
  const CutoffMonitor monitor = options.track_cutoff ? CutoffMonitor(layout) : CutoffMonitor();
  const bool track = monitor.active();
  if (track) traj.max_top_occupation = monitor(psi);
  maybe_record(0);
  KrylovWorkspace ws;
  for (std::size_t k = 0; k < n_steps; ++k) {
    assemble(k, h);
    KrylovStats st = ws.step(h, psi, dt, options.krylov);
    traj.norm_drift += st.renormalization;
    traj.max_renormalization = std::max(traj.max_renormalization, st.renormalization);
    traj.max_krylov_dimension = std::max(traj.max_krylov_dimension, st.dimension);
    if (track) traj.max_top_occupation = std::max(traj.max_top_occupation, monitor(psi));
    maybe_record(k + 1);
  }
  traj.final_state = std::move(psi);
  return traj;
}

}  // namespace

Trajectory evolve_static(const SparseOperator& h0, const std::vector<SparseOperator>& noise_ops,
                         const NoiseRealization& realization, double t_max, const ObservableSet& observables,
                         const PropagationOptions& options, const std::optional<Eigen::VectorXcd>& initial) {
  if (!(t_max > 0.0)) throw std::invalid_argument("evolve_static: t_max must be > 0");
  if (realization.channels != noise_ops.size()) {
    throw std::invalid_argument("evolve_static: realization has " + std::to_string(realization.channels) +
                                " channels for " + std::to_string(noise_ops.size()) + " noise operators");
  }
  const double dt = realization.tau;
  const std::size_t n_steps = steps_for(t_max, dt);
  if (n_steps > realization.steps) throw std::invalid_argument("evolve_static: realization shorter than t_max");

  std::vector<SparseOperator> terms{h0};
  for (const auto& op : noise_ops) terms.push_back(op);
  OperatorCombination combo(std::move(terms));
  std::vector<double> coeff(combo.size(), 0.0);
  coeff[0] = 1.0;

  Eigen::VectorXcd psi;
  if (initial) {
    if (static_cast<std::size_t>(initial->size()) != h0.dim()) throw std::invalid_argument("initial state dimension");
    psi = *initial / initial->norm();
  } else {
    psi = ground_state(h0).vector;
  }
  auto assemble = [&](std::size_t k, SparseOperator& h) {
    for (std::size_t c = 0; c < noise_ops.size(); ++c) coeff[c + 1] = realization.at(c, k);
    combo.combine_into(coeff, h);
  };
  return propagate(std::move(psi), n_steps, dt, h0.layout(), combo.make_target(), assemble, observables, options);
}

Trajectory evolve_annealing(const AnnealSpec& spec, const ScheduledHamiltonian& hamiltonian,
                            const NoiseRealization& realization, const ObservableSet& observables,
                            const PropagationOptions& options) {
  spec.validate();
  const std::size_t n_steps = spec.steps();
  const double dt = spec.step_duration();
  if (realization.channels != hamiltonian.noise_channels()) {
    throw std::invalid_argument("evolve_annealing: noise channel count does not match the Hamiltonian");
  }
  if (realization.steps < n_steps || std::abs(realization.tau - dt) > 1e-9 * dt) {
    throw std::invalid_argument("evolve_annealing: realization must have step T/steps and cover the passage");
  }
  Eigen::VectorXcd psi = ground_state(hamiltonian.at(spec.parameter(0.0))).vector;
  std::vector<double> f(realization.channels, 0.0);
  auto assemble = [&](std::size_t k, SparseOperator& h) {
    const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(n_steps);
    for (std::size_t c = 0; c < f.size(); ++c) f[c] = realization.at(c, k);
    hamiltonian.assemble_into(spec.parameter(s_mid), f, h);
  };
  return propagate(std::move(psi), n_steps, dt, hamiltonian.layout(), hamiltonian.make_target(), assemble,
                   observables, options);
}

std::size_t EnsembleStats::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("observable '" + name + "' was not recorded");
  return static_cast<std::size_t>(it - names.begin());
}

double EnsembleStats::final_mean(const std::string& name) const { return mean[index_of(name)].back(); }

double EnsembleStats::final_error(const std::string& name) const { return standard_error[index_of(name)].back(); }

EnsembleStats aggregate(const std::vector<Trajectory>& trajs, const std::string& fingerprint) {
  if (trajs.empty()) throw std::invalid_argument("aggregate: no trajectories");
  EnsembleStats st;
  st.fingerprint = fingerprint;
  st.times = trajs.front().times;
  st.names = trajs.front().names;
  st.count = trajs.size();
  st.errors_defined = trajs.size() >= 2;
  const std::size_t nt = st.times.size();
  const std::size_t no = st.names.size();
  st.mean.assign(no, std::vector<double>(nt, 0.0));
  st.standard_error.assign(no, std::vector<double>(nt, 0.0));
  std::vector<std::vector<double>> sq(no, std::vector<double>(nt, 0.0));
  for (const auto& t : trajs) {
    if (t.times != st.times || t.names != st.names) {
      throw std::invalid_argument("aggregate: trajectories have different time grids or observables");
    }
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t k = 0; k < no; ++k) st.mean[k][i] += t.records[i][k];
    }
    st.max_norm_drift = std::max(st.max_norm_drift, t.norm_drift);
    st.max_top_occupation = std::max(st.max_top_occupation, t.max_top_occupation);
    st.max_krylov_dimension = std::max(st.max_krylov_dimension, t.max_krylov_dimension);
  }
  const double n = static_cast<double>(trajs.size());
  for (auto& row : st.mean)
    for (double& v : row) v /= n;
  // Two-pass variance for accuracy.
  for (const auto& t : trajs) {
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t k = 0; k < no; ++k) {
        const double d = t.records[i][k] - st.mean[k][i];
        sq[k][i] += d * d;
      }
    }
  }
  for (std::size_t k = 0; k < no; ++k) {
    for (std::size_t i = 0; i < nt; ++i) {
      st.standard_error[k][i] = st.errors_defined ? std::sqrt(sq[k][i] / (n - 1.0) / n)
                                                  : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return st;
}

EnsembleStats run_ensemble(const TrajectoryTask& task, std::size_t n_real, std::uint64_t master_seed,
                           std::size_t workers, const std::string& fingerprint) {
  if (n_real == 0) throw std::invalid_argument("run_ensemble: need at least one trajectory");
  std::vector<Trajectory> trajs(n_real);
  parallel_for(n_real, workers, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, i);
    try {
      Trajectory t = task(i, seed);
      t.seed = seed;
      t.final_state.resize(0);
      trajs[i] = std::move(t);
    } catch (const TrajectoryError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "trajectory " << i << " (seed " << seed << ") failed: " << e.what();
      throw TrajectoryError(msg.str(), i, seed);
    }
  });
  return aggregate(trajs, fingerprint);
}

}  // namespace annealsim
