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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "annealsim/noise.hpp"

namespace annealsim {
namespace {

NoiseSpec spec_with(double gamma, std::size_t channels = 1) {
  NoiseSpec s;
  s.gamma = gamma;
  s.tau = 0.1;
  s.channels = channels;
  return s;
}

TEST(SampleNoise, VarianceAndMean) {
  NoiseSpec spec = spec_with(0.2);
  NoiseRealization r = sample_noise(spec, 1e5, 17);
  ASSERT_EQ(r.steps, 1000000u);
  double sum = 0.0, sq = 0.0;
  for (double v : r.values) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(r.values.size());
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  const double expect = 0.04 / 0.1;
  EXPECT_NEAR(var / expect, 1.0, 0.01);
  EXPECT_LT(std::abs(mean), 5.0 * std::sqrt(expect / n));
}

TEST(SampleNoise, DeterministicAndStepCount) {
  NoiseSpec spec = spec_with(0.1, 3);
  NoiseRealization a = sample_noise(spec, 5.0, 99);
  NoiseRealization b = sample_noise(spec, 5.0, 99);
  EXPECT_EQ(a.steps, 50u);
  EXPECT_EQ(a.values, b.values);
  NoiseRealization c = sample_noise(spec, 5.05, 99);
  EXPECT_EQ(c.steps, 51u);
  NoiseRealization d = sample_noise(spec, 5.0, 100);
  EXPECT_NE(a.values, d.values);
}

TEST(SampleNoise, AutocorrelationAndCrossCorrelation) {
  NoiseSpec spec = spec_with(0.3, 2);
  NoiseRealization r = sample_noise(spec, 2e4, 5);
  const double var = spec.step_std() * spec.step_std();
  const double n = static_cast<double>(r.steps);
  double lag0 = 0.0, lag1 = 0.0, cross = 0.0;
  for (std::size_t k = 0; k < r.steps; ++k) {
    lag0 += r.at(0, k) * r.at(0, k);
    if (k + 1 < r.steps) lag1 += r.at(0, k) * r.at(0, k + 1);
    cross += r.at(0, k) * r.at(1, k);
  }
  const double sigma = var / std::sqrt(n);
  EXPECT_NEAR(lag0 / n, var, 5.0 * std::sqrt(2.0) * sigma);
  EXPECT_LT(std::abs(lag1 / n), 5.0 * sigma);
  EXPECT_LT(std::abs(cross / n), 5.0 * sigma);
}

TEST(SampleNoise, RejectsInvalidSpec) {
  EXPECT_THROW(sample_noise(spec_with(-0.1), 1.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_noise(spec_with(0.1), 0.0, 1), std::invalid_argument);
  NoiseSpec y = spec_with(0.1);
  y.axis = Axis::kY;
  EXPECT_THROW(sample_noise(y, 1.0, 1), std::invalid_argument);
}

TEST(Coarsen, PairAverageHasCoarseStatistics) {
  NoiseSpec fine = spec_with(0.2);
  fine.tau = 0.05;
  NoiseRealization f = sample_noise(fine, 2e4, 8);
  NoiseRealization c = coarsen(f, 2);
  EXPECT_EQ(c.steps, f.steps / 2);
  EXPECT_DOUBLE_EQ(c.tau, 0.1);
  EXPECT_DOUBLE_EQ(c.at(0, 3), 0.5 * (f.at(0, 6) + f.at(0, 7)));
  double sq = 0.0;
  for (double v : c.values) sq += v * v;
  EXPECT_NEAR(sq / static_cast<double>(c.steps) / (0.04 / 0.1), 1.0, 0.03);
  EXPECT_THROW(coarsen(sample_noise(fine, 0.15, 1), 2), std::invalid_argument);
}

TEST(PowerSpectrumTheory, Values) {
  NoiseSpec spec = spec_with(0.2);
  EXPECT_NEAR(power_spectrum_theory(0.0, spec), 0.04 / (2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(power_spectrum_theory(0.0, spec), 6.366e-3, 1e-6);
  EXPECT_NEAR(power_spectrum_theory(std::numbers::pi / spec.tau, spec), 0.0, 1e-15);
  EXPECT_NEAR(power_spectrum_theory(1.0 / spec.tau, spec) / power_spectrum_theory(0.0, spec), std::sin(1.0), 1e-14);
  EXPECT_NEAR(power_spectrum_exact(0.3 / spec.tau, spec) / power_spectrum_theory(0.3 / spec.tau, spec), 1.0, 0.01);
}

std::vector<NoiseRealization> ensemble(double gamma, std::size_t count, std::uint64_t seed) {
  std::vector<NoiseRealization> out;
  NoiseSpec spec = spec_with(gamma, 2);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_noise(spec, 50.0, derive_seed(seed, i)));
  return out;
}

TEST(EstimateSpectrum, MatchesTheoryAtLowFrequency) {
  auto rs = ensemble(0.2, 1000, 3);
  std::vector<double> grid;
  for (int k = 0; k <= 6; ++k) grid.push_back(0.5 * k);  // up to 0.3 / tau
  SpectrumEstimate est = estimate_spectrum(rs, grid);
  EXPECT_EQ(est.samples, 2000u);
  NoiseSpec spec = spec_with(0.2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double ratio = est.mean[k] / power_spectrum_theory(grid[k], spec);
    EXPECT_NEAR(ratio, 1.0, 0.1) << "omega=" << grid[k];
  }
}

TEST(EstimateSpectrum, ZeroAndScaling) {
  auto rs = ensemble(0.1, 120, 4);
  std::vector<NoiseRealization> zeros, doubled;
  for (const auto& r : rs) {
    zeros.push_back(scaled(r, 0.0));
    doubled.push_back(scaled(r, 2.0));
  }
  std::vector<double> grid{0.0, 1.0, 2.5};
  SpectrumEstimate z = estimate_spectrum(zeros, grid);
  for (double v : z.mean) EXPECT_EQ(v, 0.0);
  SpectrumEstimate a = estimate_spectrum(rs, grid);
  SpectrumEstimate b = estimate_spectrum(doubled, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(b.mean[k] / a.mean[k], 4.0, 0.2);
}

TEST(EstimateSpectrum, NeedsHundredRealizations) {
  auto rs = ensemble(0.1, 99, 5);
  EXPECT_THROW(estimate_spectrum(rs, {0.0}), std::invalid_argument);
}

TEST(CoherenceTimes, TransverseNoise) {
  CoherenceTimes t = coherence_times_theory(std::numbers::pi / 2, 0.1);
  EXPECT_NEAR(t.t1, 200.0, 1e-9);
  EXPECT_TRUE(std::isinf(t.t2_star));
  EXPECT_NEAR(t.t2, 400.0, 1e-9);
}

TEST(CoherenceTimes, LongitudinalNoise) {
  CoherenceTimes t = coherence_times_theory(0.0, 0.2);
  EXPECT_NEAR(t.t2_star, 50.0, 1e-9);
  EXPECT_TRUE(std::isinf(t.t1));
  EXPECT_NEAR(t.t2, 50.0, 1e-9);
}

TEST(CoherenceTimes, ZeroNoiseAndUnitCoupling) {
  CoherenceTimes z = coherence_times_theory(0.7, 0.0);
  EXPECT_TRUE(std::isinf(z.t1) && std::isinf(z.t2_star) && std::isinf(z.t2));
  // Unit-amplitude coupling: omega0 T1 = omega0 T2 = 1 / (2 gamma^2).
  const double g = 0.2;
  EXPECT_NEAR(coherence_times_theory(std::numbers::pi / 2, g, 1.0, NoiseCoupling::kUnitAmplitude).t1, 1 / (2 * g * g), 1e-9);
  EXPECT_NEAR(coherence_times_theory(0.0, g, 1.0, NoiseCoupling::kUnitAmplitude).t2, 1 / (2 * g * g), 1e-9);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(NoiseCsv, HeaderAndRows) {
  NoiseRealization r = sample_noise(spec_with(0.1, 2), 0.3, 1);
  std::ostringstream out;
  write_realization_csv(r, 0.1, out);
  std::string text = out.str();
  EXPECT_EQ(text.rfind("# gamma=0.1", 0), 0u);
  EXPECT_NE(text.find("step,f0,f1"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

}  // namespace
}  // namespace annealsim
