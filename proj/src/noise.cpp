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

#include "annealsim/noise.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace annealsim {

double coupling_scale(NoiseCoupling coupling) {
  return coupling == NoiseCoupling::kUnitAmplitude ? 1.0 : 0.5;
}

NoiseCoupling parse_noise_coupling(const std::string& name) {
  if (name == "half") return NoiseCoupling::kHalfAmplitude;
  if (name == "unit") return NoiseCoupling::kUnitAmplitude;
  throw std::invalid_argument("noise coupling must be 'half' or 'unit', got '" + name + "'");
}

std::string noise_coupling_name(NoiseCoupling coupling) {
  return coupling == NoiseCoupling::kUnitAmplitude ? "unit" : "half";
}

double axis_angle(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return std::numbers::pi / 2;
    case Axis::kZ:
      return 0.0;
    default:
      throw std::invalid_argument("noise axis must be x or z");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NoiseSpec::step_std() const { return std::sqrt(gamma * gamma / (tau * omega0)); }

void NoiseSpec::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("noise strength gamma must be >= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("noise step tau must be > 0");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (channels == 0) throw std::invalid_argument("noise needs at least one channel");
  if (axis == Axis::kY) throw std::invalid_argument("noise axis must be x or z");
}

double NoiseRealization::at_time(std::size_t channel, double t) const {
  if (steps == 0) return 0.0;
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t / tau)));
  return at(channel, std::min(k, steps - 1));
}

std::vector<double> NoiseRealization::channel(std::size_t c) const {
  if (c >= channels) throw std::out_of_range("noise channel out of range");
  std::vector<double> out(steps);
  for (std::size_t k = 0; k < steps; ++k) out[k] = at(c, k);
  return out;
}

namespace {

std::size_t step_count(double duration, double tau) {
  if (!(duration > 0.0)) throw std::invalid_argument("noise duration must be > 0");
  double ratio = duration / tau;
  double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

NoiseRealization sample_noise(const NoiseSpec& spec, double duration, std::uint64_t seed) {
  spec.validate();
  NoiseRealization r;
  r.tau = spec.tau;
  r.duration = duration;
  r.steps = step_count(duration, spec.tau);
  r.channels = spec.channels;
  r.values.assign(r.steps * r.channels, 0.0);
  const double sd = spec.step_std();
  for (std::size_t c = 0; c < r.channels; ++c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < r.steps; ++k) r.values[k * r.channels + c] = sd * normal(rng);
  }
  return r;
}

NoiseRealization zero_noise(std::size_t channels, double tau, double duration) {
  if (!(tau > 0.0)) throw std::invalid_argument("noise step tau must be > 0");
  NoiseRealization r;
  r.tau = tau;
  r.duration = duration;
  r.steps = step_count(duration, tau);
  r.channels = channels;
  r.values.assign(r.steps * channels, 0.0);
  return r;
}

NoiseRealization coarsen(const NoiseRealization& fine, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("coarsening factor must be >= 1");
  if (fine.steps % factor != 0) throw std::invalid_argument("step count is not a multiple of the coarsening factor");
  NoiseRealization r;
  r.tau = fine.tau * static_cast<double>(factor);
  r.duration = fine.duration;
  r.steps = fine.steps / factor;
  r.channels = fine.channels;
  r.values.assign(r.steps * r.channels, 0.0);
  for (std::size_t k = 0; k < r.steps; ++k) {
    for (std::size_t c = 0; c < r.channels; ++c) {
      double sum = 0.0;
      for (std::size_t j = 0; j < factor; ++j) sum += fine.at(c, k * factor + j);
      r.values[k * r.channels + c] = sum / static_cast<double>(factor);
    }
  }
  return r;
}

NoiseRealization scaled(const NoiseRealization& r, double scale) {
  NoiseRealization out = r;
  for (double& v : out.values) v *= scale;
  return out;
}

double power_spectrum_theory(double omega, const NoiseSpec& spec) {
  double flat = spec.gamma * spec.gamma / (2.0 * std::numbers::pi * spec.omega0);
  double x = omega * spec.tau;
  if (std::abs(x) < 1e-6) return flat * (1.0 - x * x / 6.0);
  return flat * std::sin(x) / x;
}

double power_spectrum_exact(double omega, const NoiseSpec& spec) {
  double flat = spec.gamma * spec.gamma / (2.0 * std::numbers::pi * spec.omega0);
  double x = 0.5 * omega * spec.tau;
  double s = std::abs(x) < 1e-6 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return flat * s * s;
}

SpectrumEstimate estimate_spectrum(const std::vector<NoiseRealization>& realizations,
                                   const std::vector<double>& omega_grid) {
  if (realizations.size() < 100) {
    throw std::invalid_argument("spectrum estimation needs at least 100 realizations, got " +
                                std::to_string(realizations.size()));
  }
  const auto& ref = realizations.front();
  for (const auto& r : realizations) {
    if (r.steps != ref.steps || r.channels != ref.channels || r.tau != ref.tau) {
      throw std::invalid_argument("realizations must share step, length and channel count");
    }
  }
  SpectrumEstimate est;
  est.omega = omega_grid;
  est.mean.assign(omega_grid.size(), 0.0);
  est.standard_error.assign(omega_grid.size(), 0.0);
  est.samples = realizations.size() * ref.channels;
  const double duration = ref.tau * static_cast<double>(ref.steps);
  const double n = static_cast<double>(est.samples);

  for (std::size_t w = 0; w < omega_grid.size(); ++w) {
    const double omega = omega_grid[w];
    // Integral of e^{i omega t} over one step, times the phase advance per step.
    cplx step_kernel;
    if (std::abs(omega * ref.tau) < 1e-12) {
      step_kernel = ref.tau;
    } else {
      step_kernel = (std::exp(cplx(0.0, omega * ref.tau)) - 1.0) / cplx(0.0, omega);
    }
    const cplx advance = std::exp(cplx(0.0, omega * ref.tau));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : realizations) {
      for (std::size_t c = 0; c < r.channels; ++c) {
        cplx acc = 0.0;
        cplx phase = 1.0;
        for (std::size_t k = 0; k < r.steps; ++k) {
          acc += r.at(c, k) * phase;
          phase *= advance;
          if ((k & 255) == 255) phase /= std::abs(phase);
        }
        double p = std::norm(acc * step_kernel) / (2.0 * std::numbers::pi * duration);
        sum += p;
        sum_sq += p * p;
      }
    }
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    est.mean[w] = mean;
    est.standard_error[w] = std::sqrt(var / n);
  }
  return est;
}

CoherenceTimes coherence_times_theory(double theta, double gamma, double omega0, NoiseCoupling coupling) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  const double c = coupling_scale(coupling);
  const double base = 4.0 * c * c * gamma * gamma / (2.0 * omega0);
  const double s = std::sin(theta);
  const double co = std::cos(theta);
  // Treat rounding residue of sin/cos at the pure axes as exact zeros.
  const double rate1 = std::abs(s) < 1e-12 ? 0.0 : s * s * base;
  const double rate2 = std::abs(co) < 1e-12 ? 0.0 : co * co * base;
  constexpr double inf = std::numeric_limits<double>::infinity();
  CoherenceTimes out;
  out.t1 = rate1 > 0.0 ? 1.0 / rate1 : inf;
  out.t2_star = rate2 > 0.0 ? 1.0 / rate2 : inf;
  double rate_t2 = rate2 + 0.5 * rate1;
  out.t2 = rate_t2 > 0.0 ? 1.0 / rate_t2 : inf;
  return out;
}

void write_realization_csv(const NoiseRealization& r, double gamma, std::ostream& out) {
  out << "# gamma=" << std::setprecision(17) << gamma << " tau=" << r.tau << " T=" << r.duration
      << " channels=" << r.channels << '\n';
  out << "step";
  for (std::size_t c = 0; c < r.channels; ++c) out << ",f" << c;
  out << '\n';
  for (std::size_t k = 0; k < r.steps; ++k) {
    out << k;
    for (std::size_t c = 0; c < r.channels; ++c) out << ',' << r.at(c, k);
    out << '\n';
  }
}

}  // namespace annealsim
