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
#include <iosfwd>
#include <string>
#include <vector>

#include "annealsim/space.hpp"

namespace annealsim {

/// Prefactor c of the stochastic term c * f_i(t) sigma_i^theta.
enum class NoiseCoupling {
  kHalfAmplitude,  // c = 1/2
  kUnitAmplitude,  // c = 1
};

double coupling_scale(NoiseCoupling coupling);
NoiseCoupling parse_noise_coupling(const std::string& name);
std::string noise_coupling_name(NoiseCoupling coupling);

/// Physical coupling angle: x -> pi/2, z -> 0. Throws for y.
double axis_angle(Axis axis);

/// Mixes a master seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct NoiseSpec {
  double gamma = 0.1;
  double tau = 0.1;  // step duration tau_m
  double omega0 = 1.0;
  Axis axis = Axis::kX;
  std::size_t channels = 1;

  /// sqrt(gamma^2 / (tau omega0)).
  double step_std() const;
  void validate() const;
};

/// Piecewise-constant sample paths, stored step-major:
/// values[step * channels + channel].
struct NoiseRealization {
  double tau = 0.0;
  double duration = 0.0;
  std::size_t steps = 0;
  std::size_t channels = 0;
  std::vector<double> values;

  double at(std::size_t channel, std::size_t step) const { return values[step * channels + channel]; }
  /// Value on the step containing time t (clamped to the last step).
  double at_time(std::size_t channel, double t) const;
  std::vector<double> channel(std::size_t c) const;
};

/// ceil(T / tau) steps per channel, each channel drawn from its own
/// mt19937_64 stream seeded by derive_seed(seed, channel).
NoiseRealization sample_noise(const NoiseSpec& spec, double duration, std::uint64_t seed);

/// Zero realization (noise-free runs).
NoiseRealization zero_noise(std::size_t channels, double tau, double duration);

/// Averages consecutive groups of `factor` steps. Coarsening a realization
/// sampled at tau/factor yields one distributed exactly as a realization at tau.
NoiseRealization coarsen(const NoiseRealization& fine, std::size_t factor);

/// Scales every value (gamma -> scale * gamma for a fixed stream).
NoiseRealization scaled(const NoiseRealization& r, double scale);

/// gamma^2/(2 pi omega0) * sin(omega tau)/(omega tau).
double power_spectrum_theory(double omega, const NoiseSpec& spec);

/// Spectrum of the piecewise-constant process itself,
/// gamma^2/(2 pi omega0) * sinc^2(omega tau / 2). Agrees with
/// power_spectrum_theory to first order in omega tau.
double power_spectrum_exact(double omega, const NoiseSpec& spec);

struct SpectrumEstimate {
  std::vector<double> omega;
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::size_t samples = 0;
};

/// Averaged periodogram |int_0^T f(t) e^{i omega t} dt|^2 / (2 pi T) of the
/// continuous piecewise-constant signal, over realizations and channels.
/// Requires at least 100 realizations.
SpectrumEstimate estimate_spectrum(const std::vector<NoiseRealization>& realizations,
                                   const std::vector<double>& omega_grid);

struct CoherenceTimes {
  double t1;
  double t2_star;
  double t2;
};

/// White-noise relaxation and dephasing times for a qubit (omega0/2) sigma^z
/// driven by c f(t) sigma^theta:
///   1/T1 = sin^2(theta) (2c)^2 gamma^2 / (2 omega0),
///   1/T2* = cos^2(theta) (2c)^2 gamma^2 / (2 omega0),
///   1/T2 = 1/T2* + 1/(2 T1).
/// Vanishing rates give infinite times.
CoherenceTimes coherence_times_theory(double theta, double gamma, double omega0 = 1.0,
                                      NoiseCoupling coupling = NoiseCoupling::kHalfAmplitude);

/// Header line plus one row per step (channels as columns).
void write_realization_csv(const NoiseRealization& r, double gamma, std::ostream& out);

}  // namespace annealsim
