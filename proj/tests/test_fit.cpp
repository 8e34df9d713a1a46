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
#include <random>

#include "annealsim/fit.hpp"
#include "dense_oracle.hpp"

namespace annealsim {
namespace {

// Dense periodic Ising chain at schedule s, restricted to the parity sector
// (-1)^L, lowest two eigenvalues.
double dense_sector_gap(std::size_t L, double s) {
  oracle::Space sp{L, 0, 0};
  oracle::Mat H = oracle::Mat::Zero(sp.dim_identity().rows(), sp.dim_identity().cols());
  for (std::size_t i = 0; i < L; ++i) {
    H += 0.5 * (1.0 - s) * sp.sigma(i, 'z');
    H += -s * sp.sigma(i, 'x') * sp.sigma((i + 1) % L, 'x');
  }
  std::vector<Eigen::Index> idx;
  const int want = (L % 2 == 0) ? 1 : -1;
  for (Eigen::Index b = 0; b < H.rows(); ++b) {
    int parity = 1;
    for (std::size_t i = 0; i < L; ++i)
      if ((b >> i) & 1) parity = -parity;
    if (parity == want) idx.push_back(b);
  }
  oracle::Mat sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = H(idx[a], idx[b]);
  Eigen::VectorXd ev = oracle::eigenvalues(sub);
  return ev[1] - ev[0];
}

double dense_minimum_gap(std::size_t L) {
  double best_s = 0.0, best = 1e300;
  for (int k = 0; k <= 1000; ++k) {
    const double s = k / 1000.0;
    const double g = dense_sector_gap(L, s);
    if (g < best) {
      best = g;
      best_s = s;
    }
  }
  double a = std::max(0.0, best_s - 1e-3), b = std::min(1.0, best_s + 1e-3);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-9) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (dense_sector_gap(L, c) < dense_sector_gap(L, d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return dense_sector_gap(L, 0.5 * (a + b));
}

TEST(Gap, SingleQubit) {
  IsingParams p{{1.0}, Eigen::MatrixXd::Zero(1, 1), Boundary::kOpen};
  EXPECT_NEAR(gap(build_ising(p, spin_layout(1))), 1.0, 1e-10);
}

TEST(Gap, AboveDegenerateLevel) {
  IsingParams p{{0.0, 0.0}, Eigen::MatrixXd::Zero(2, 2), Boundary::kOpen};
  p.J(0, 1) = 1.0;
  const SparseOperator h = build_ising(p, spin_layout(2));
  EXPECT_NEAR(gap(h), 0.0, 1e-9);
  GapOptions o;
  o.above_degenerate = true;
  EXPECT_NEAR(gap(h, o), 2.0, 1e-9);
}

TEST(GapScan, MatchesDenseOracleForFourSpins) {
  ChainModel m;
  m.length = 4;
  GapScanOptions o;
  o.golden_tolerance = 1e-7;
  const GapScan scan = minimum_gap_scan(m, o);
  EXPECT_NEAR(scan.minimum, dense_minimum_gap(4), 1e-9);
  for (std::size_t i = 0; i < scan.grid.size(); i += 7) {
    EXPECT_NEAR(scan.gaps[i], dense_sector_gap(4, scan.grid[i]), 1e-9);
  }
  for (std::size_t i = 1; i < scan.grid.size(); ++i) EXPECT_GT(scan.grid[i], scan.grid[i - 1]);
}

TEST(GapScan, FineGridNearMinimum) {
  ChainModel m;
  const GapScan scan = minimum_gap_scan(m);
  for (std::size_t i = 1; i < scan.grid.size(); ++i) {
    if (std::abs(scan.grid[i] - scan.argmin) < 0.04 && std::abs(scan.grid[i - 1] - scan.argmin) < 0.04) EXPECT_LE(scan.grid[i] - scan.grid[i - 1], 0.01 + 1e-12);
  }
}

TEST(GapScan, IsingMinimumDecreasesWithSize) {
  double prev = 1e9;
  for (std::size_t L = 3; L <= 7; ++L) {
    ChainModel m;
    m.length = L;
    const double g = minimum_gap_scan(m).minimum;
    EXPECT_LT(g, prev) << "L=" << L;
    prev = g;
  }
}

TEST(GapScan, SpinBosonSmallChain) {
  ChainModel m;
  m.kind = ModelKind::kSpinBoson;
  m.cutoff = 2;
  const GapScan scan = minimum_gap_scan(m);
  EXPECT_GT(scan.minimum, 0.0);
  EXPECT_LT(scan.minimum, 1.0);
  EXPECT_EQ(scan.cutoff, 2u);
}

TEST(GapScaling, ExactData) {
  std::vector<std::pair<double, double>> pts;
  for (int L = 3; L <= 8; ++L) pts.emplace_back(L, 5.0 / L - 0.3 / (L * L));
  FitResult f = fit_gap_scaling(pts);
  EXPECT_NEAR(f.value("a"), 5.0, 1e-10);
  EXPECT_NEAR(f.value("b"), -0.3, 1e-10);
  EXPECT_LT(f.residual_norm, 1e-12);
}

TEST(GapScaling, TwoPointsInterpolate) {
  FitResult f = fit_gap_scaling({{3.0, 1.2}, {5.0, 0.8}});
  EXPECT_NEAR(f.value("a") / 3.0 + f.value("b") / 9.0, 1.2, 1e-12);
  EXPECT_NEAR(f.value("a") / 5.0 + f.value("b") / 25.0, 0.8, 1e-12);
  EXPECT_LT(f.residual_norm, 1e-12);
}

TEST(GapScaling, NoisyDataRecoversSlope) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 0.01);
  int within = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (int L = 3; L <= 10; ++L) pts.emplace_back(L, (5.0 / L - 0.3 / (L * L)) * (1.0 + n(rng)));
    if (std::abs(fit_gap_scaling(pts).value("a") / 5.0 - 1.0) < 0.05) ++within;
  }
  EXPECT_GE(within, 190);
}

TEST(GapScaling, RankDeficientThrows) {
  EXPECT_THROW(fit_gap_scaling({{3.0, 1.0}, {3.0, 1.1}, {3.0, 0.9}}), FitError);
  EXPECT_THROW(fit_gap_scaling({{3.0, 1.0}}), FitError);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

TEST(DecayFit, RoundTripWithNoise) {
  const auto t = linspace(0.0, 100.0, 101);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 0.005);
  std::vector<double> y;
  for (double ti : t) y.push_back(std::min(1.0, decay_law(ti, 1.0, 15.41, 0.86, 3) * (1.0 + n(rng))));
  FitResult f = fit_decay(t, y, 3);
  EXPECT_NEAR(f.value("a"), 1.0, 0.03);
  EXPECT_NEAR(f.value("Tq") / 15.41, 1.0, 0.03);
  EXPECT_NEAR(f.value("p") / 0.86, 1.0, 0.03);
  for (double e : f.errors) EXPECT_TRUE(std::isfinite(e));
}

TEST(DecayFit, InteriorAmplitude) {
  const auto t = linspace(0.0, 400.0, 81);
  std::vector<double> y;
  for (double ti : t) y.push_back(decay_law(ti, 0.8, 58.3, 0.47, 3));
  FitResult f = fit_decay(t, y, 3);
  EXPECT_NEAR(f.value("a"), 0.8, 1e-6);
  EXPECT_NEAR(f.value("Tq"), 58.3, 1e-4);
  EXPECT_NEAR(f.value("p"), 0.47, 1e-6);
}

TEST(DecayFit, FlatDataRejected) {
  const auto t = linspace(0.0, 50.0, 20);
  std::vector<double> y(t.size(), 1.0);
  DecayFitOptions o;
  o.fix_a = 1.0;
  EXPECT_THROW(fit_decay(t, y, 3, o), FitError);
}

TEST(DecayFit, RescalingTimeScalesTq) {
  const auto t = linspace(0.0, 80.0, 41);
  std::vector<double> y, t2;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.003);
  for (double ti : t) y.push_back(std::clamp(decay_law(ti, 0.9, 12.0, 0.7, 2) + n(rng), 1e-6, 1.0));
  for (double ti : t) t2.push_back(3.7 * ti);
  FitResult f1 = fit_decay(t, y, 2), f2 = fit_decay(t2, y, 2);
  EXPECT_NEAR(f2.value("Tq") / f1.value("Tq"), 3.7, 3.7e-6);
  EXPECT_NEAR(f2.value("p"), f1.value("p"), 1e-6);
}

TEST(DecayFit, WeightsAndFixedAmplitude) {
  const auto t = linspace(0.0, 60.0, 31);
  std::vector<double> y, s;
  for (double ti : t) {
    y.push_back(decay_law(ti, 1.0, 20.0, 1.1, 3));
    s.push_back(0.01 + 0.001 * ti);
  }
  DecayFitOptions o;
  o.fix_a = 1.0;
  o.sigma = s;
  FitResult f = fit_decay(t, y, 3, o);
  EXPECT_EQ(f.names, (std::vector<std::string>{"Tq", "p"}));
  EXPECT_NEAR(f.value("Tq"), 20.0, 1e-6);
  EXPECT_NEAR(f.value("p"), 1.1, 1e-6);
}

TEST(DecayFit, InputValidation) {
  EXPECT_THROW(fit_decay({0, 1, 2}, {1, 0.9, 0.8}, 3), FitError);
  EXPECT_THROW(fit_decay({0, 1, 2, 3, 4, 5}, {1, 0.9, 0.8, 0.7, 0.0, 0.5}, 3), FitError);
}

TEST(GrowthRegion, StartsAtMinimum) {
  EXPECT_EQ(growth_region_start({0.5, 0.3, 0.2, 0.25, 0.6}), 2u);
}

// Optimum with a on its upper bound; reference from an independent
// trust-region least-squares solve.
TEST(FitDecay, ConvergesWithAmplitudeOnBound) {
  const std::vector<double> t{5, 10, 20, 30, 50, 75, 100, 150, 200, 300, 500, 750, 1000};
  const std::vector<double> perr{0.225, 0.255, 0.389, 0.443, 0.619, 0.694, 0.666,
                                 0.759, 0.766, 0.719, 0.735, 0.801, 0.666};
  std::vector<double> y;
  for (double v : perr) y.push_back(1.0 - v);
  const FitResult f = fit_decay(t, y, 3);
  EXPECT_TRUE(f.converged);
  EXPECT_DOUBLE_EQ(f.value("a"), 1.0);
  EXPECT_NEAR(f.value("Tq"), 131.372, 0.01);
  EXPECT_NEAR(f.value("p"), 0.49018, 1e-4);
  EXPECT_NEAR(f.residual_norm * f.residual_norm, 0.0691424345, 1e-8);
}

}  // namespace
}  // namespace annealsim
