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
#include <sstream>

#include "annealsim/eigensolver.hpp"
#include "annealsim/model.hpp"
#include "dense_oracle.hpp"

namespace annealsim {
namespace {

Eigen::VectorXd dense_spectrum(const SparseOperator& op) { return oracle::eigenvalues(op.to_dense()); }

TEST(BuildIsing, SingleSpinField) {
  IsingParams p{{1.0}, Eigen::MatrixXd::Zero(1, 1), Boundary::kOpen};
  auto ev = dense_spectrum(build_ising(p, spin_layout(1)));
  EXPECT_NEAR(ev[0], -0.5, 1e-15);
  EXPECT_NEAR(ev[1], 0.5, 1e-15);
}

TEST(BuildIsing, TwoSpinCoupling) {
  IsingParams p{{0.0, 0.0}, Eigen::MatrixXd::Zero(2, 2), Boundary::kOpen};
  p.J(0, 1) = 1.0;
  auto ev = dense_spectrum(build_ising(p, spin_layout(2)));
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], -1.0, 1e-14);
  EXPECT_NEAR(ev[2], 1.0, 1e-14);
  EXPECT_NEAR(ev[3], 1.0, 1e-14);
}

TEST(BuildIsing, OpenFerroEndpoint) {
  IsingParams p = ising_schedule(1.0, 3, 1, 1.0, Boundary::kOpen);
  SparseOperator h = build_ising(p, spin_layout(3));
  auto eigs = extremal_eigs(h, 3);
  EXPECT_NEAR(eigs[0].value, -2.0, 1e-10);
  EXPECT_NEAR(eigs[1].value, -2.0, 1e-10);
  EXPECT_GT(eigs[2].value, -2.0 + 1.0);
}

TEST(BuildIsing, MatchesKroneckerOracle) {
  oracle::Space sp{4, 0, 0};
  IsingParams p{{0.3, -0.7, 1.1, 0.2}, Eigen::MatrixXd::Zero(4, 4), Boundary::kOpen};
  p.J(0, 1) = 0.4;
  p.J(2, 0) = -0.9;
  p.J(3, 2) = 0.25;
  oracle::Mat dense = oracle::Mat::Zero(16, 16);
  for (std::size_t i = 0; i < 4; ++i) dense += 0.5 * p.h[i] * sp.sigma(i, 'z');
  dense += 0.4 * sp.sigma(0, 'x') * sp.sigma(1, 'x');
  dense += -0.9 * sp.sigma(2, 'x') * sp.sigma(0, 'x');
  dense += 0.25 * sp.sigma(3, 'x') * sp.sigma(2, 'x');
  SparseOperator h = build_ising(p, spin_layout(4));
  EXPECT_LT((h.to_dense() - dense).norm(), 1e-14);
  EXPECT_EQ(h.hermitian_defect(), 0.0);
}

TEST(BuildIsing, DimensionMismatch) {
  IsingParams p = ising_schedule(0.5, 3, 1);
  EXPECT_THROW(build_ising(p, spin_layout(4)), std::invalid_argument);
  EXPECT_THROW(build_ising(p, SpaceLayout{3, 1, 2}), std::invalid_argument);
}

TEST(BuildSpinBoson, DecoupledSpectrum) {
  SBParams p{{0.8}, Eigen::MatrixXd::Zero(1, 1), 1.3, 3, Boundary::kOpen};
  auto ev = dense_spectrum(build_spin_boson(p, p.layout()));
  std::vector<double> expect;
  for (double e : {-0.4, 0.4})
    for (int n = 0; n <= 3; ++n) expect.push_back(e + 1.3 * n);
  std::sort(expect.begin(), expect.end());
  for (std::size_t k = 0; k < expect.size(); ++k) EXPECT_NEAR(ev[static_cast<Eigen::Index>(k)], expect[k], 1e-13);
}

TEST(BuildSpinBoson, DisplacedOscillatorGroundEnergy) {
  const double g = 0.6, w = 1.0;
  SBParams p{{0.0}, Eigen::MatrixXd::Constant(1, 1, g), w, 30, Boundary::kOpen};
  EigenPair gs = ground_state(build_spin_boson(p, p.layout()));
  EXPECT_NEAR(gs.value, -g * g / w, 1e-10);
}

TEST(BuildSpinBoson, FullSpectrumMatchesDenseOracle) {
  const double g = 0.3;
  SBParams p{{1.0}, Eigen::MatrixXd::Constant(1, 1, g), 1.0, 8, Boundary::kOpen};
  oracle::Space sp{1, 1, 8};
  oracle::Mat dense = 0.5 * sp.sigma(0, 'z') + g * sp.sigma(0, 'x') * (sp.b(0) + sp.b(0).adjoint()) +
                      sp.b(0).adjoint() * sp.b(0);
  auto ref = oracle::eigenvalues(dense);
  SparseOperator h = build_spin_boson(p, p.layout());
  EXPECT_EQ(h.hermitian_defect(), 0.0);
  auto eigs = extremal_eigs(h, 18);
  for (Eigen::Index k = 0; k < 18; ++k) EXPECT_NEAR(eigs[static_cast<std::size_t>(k)].value, ref[k], 1e-9);
}

TEST(BuildSpinBoson, LayoutMismatch) {
  SBParams p = sb_schedule(0.3, 3, 1, 1.0, 1.0, 2);
  EXPECT_THROW(build_spin_boson(p, SpaceLayout{3, 3, 3}), std::invalid_argument);
}

TEST(IsingSchedule, Endpoints) {
  IsingParams p0 = ising_schedule(0.0, 3, 1);
  for (double h : p0.h) EXPECT_EQ(h, 1.0);
  EXPECT_EQ(p0.J.cwiseAbs().maxCoeff(), 0.0);
  IsingParams p1 = ising_schedule(1.0, 3, 1);
  for (double h : p1.h) EXPECT_EQ(h, 0.0);
  EXPECT_EQ(p1.J(0, 1), -1.0);
  EXPECT_EQ(p1.J(1, 2), -1.0);
  EXPECT_EQ(p1.J(2, 0), -1.0);
  EXPECT_EQ(p1.J(1, 0), 0.0);
  IsingParams q = ising_schedule(0.25, 4, 1);
  EXPECT_DOUBLE_EQ(q.h[2], 0.75);
  EXPECT_DOUBLE_EQ(q.J(2, 3), -0.25);
  IsingParams af = ising_schedule(0.25, 4, -1);
  EXPECT_DOUBLE_EQ(af.J(2, 3), 0.25);
}

TEST(IsingSchedule, RangeAndPeriodicPairRejected) {
  EXPECT_THROW(ising_schedule(1.2, 3, 1), std::out_of_range);
  EXPECT_THROW(ising_schedule(-0.1, 3, 1), std::out_of_range);
  EXPECT_THROW(ising_schedule(0.5, 2, 1, 1.0, Boundary::kPeriodic), std::invalid_argument);
  EXPECT_NO_THROW(ising_schedule(0.5, 2, 1, 1.0, Boundary::kOpen));
  EXPECT_THROW(sb_schedule(0.5, 2, 1, 1.0, 1.0, 2, Boundary::kPeriodic), std::invalid_argument);
  EXPECT_THROW(ising_schedule(0.5, 3, 2), std::invalid_argument);
}

TEST(SbSchedule, DecoupledAtZero) {
  SBParams p = sb_schedule(0.0, 3, 1);
  EXPECT_EQ(p.g.cwiseAbs().maxCoeff(), 0.0);
  for (double h : p.h) EXPECT_EQ(h, 1.0);
}

TEST(SbSchedule, HalfKappaCouplings) {
  SBParams p = sb_schedule(0.5, 4, 1);
  Eigen::MatrixXd phi = p.phi();
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(phi(i, i), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(phi(i, (i + 3) % 4), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(phi.row(i).squaredNorm(), 1.0, 1e-15);
    // J0_{i,i+1} = omega sum_r phi_ir phi_{i+1,r}
    EXPECT_NEAR(p.omega * phi.row(i).dot(phi.row((i + 1) % 4)), 0.5, 1e-15);
  }
}

TEST(SbSchedule, LinearRampReproducesDirectCoupling) {
  for (int eta : {1, -1}) {
    for (Boundary b : {Boundary::kPeriodic, Boundary::kOpen}) {
      for (double s : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        const double kappa = RampTable::linear().kappa(s);
        SBParams p = sb_schedule(kappa, 5, eta, 1.0, 1.0, 2, b);
        Eigen::MatrixXd phi = p.phi();
        for (auto [i, j] : chain_bonds(5, b)) {
          double j0 = p.omega * phi.row(static_cast<Eigen::Index>(i)).dot(phi.row(static_cast<Eigen::Index>(j)));
          EXPECT_NEAR(j0, eta * s, 1e-12);
        }
      }
    }
  }
}

TEST(SbSchedule, OpenChainLastModeCouplesOnce) {
  SBParams p = sb_schedule(0.4, 3, 1, 1.0, 1.0, 2, Boundary::kOpen);
  EXPECT_EQ(p.n_modes(), 3u);
  EXPECT_EQ(p.g(0, 2), 0.0);
  EXPECT_GT(p.g(2, 2), 0.0);
  EXPECT_GT(p.g(2, 1), 0.0);
}

TEST(RampTable, LinearAndInterpolation) {
  RampTable lin = RampTable::linear();
  EXPECT_TRUE(lin.is_linear());
  EXPECT_DOUBLE_EQ(lin.kappa(0.37), 0.37);
  RampTable t({0.0, 0.5, 1.0}, {0.0, 0.2, 1.0});
  EXPECT_FALSE(t.is_linear());
  EXPECT_DOUBLE_EQ(t.kappa(0.25), 0.1);
  EXPECT_DOUBLE_EQ(t.kappa(0.75), 0.6);
  EXPECT_DOUBLE_EQ(t.kappa(1.0), 1.0);
  EXPECT_THROW(t.kappa(1.5), std::out_of_range);
}

TEST(RampTable, Validation) {
  EXPECT_THROW(RampTable({0.0, 0.5, 1.0}, {0.0, 0.6, 0.5}), std::invalid_argument);
  EXPECT_THROW(RampTable({0.0, 1.0}, {0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(RampTable({0.0, 0.9}, {0.0, 1.0}), std::invalid_argument);
}

TEST(RampTable, CsvRoundTrip) {
  RampTable t({0.0, 0.3, 1.0}, {0.0, 0.123456789012345, 1.0});
  std::stringstream ss;
  t.write_csv(ss);
  RampTable back = RampTable::read_csv(ss);
  ASSERT_EQ(back.s_grid().size(), 3u);
  EXPECT_EQ(back.kappa_grid()[1], 0.123456789012345);
  std::stringstream bad("s,kappa\n0,0\nfoo\n");
  EXPECT_THROW(RampTable::read_csv(bad), std::invalid_argument);
}

TEST(Calibration, IsingCorrelatorRegression) {
  CalibrationSettings st;
  // Dense ground state of the periodic L=3 chain at s=0.25.
  EXPECT_NEAR(ising_ground_correlator(0.25, st), 1.377964473009, 1e-9);
  EXPECT_NEAR(ising_ground_correlator(0.0, st), 0.0, 1e-12);
}

TEST(Calibration, FrozenKappaAtQuarter) {
  CalibrationSettings st;
  st.cutoff = 8;
  Calibration cal = calibrate_kappa({0.0, 0.25, 1.0}, st);
  EXPECT_EQ(cal.table.kappa(0.0), 0.0);
  // Independent dense/ARPACK bisection for L=3, periodic, cutoff 8.
  EXPECT_NEAR(cal.table.kappa(0.25), 0.1126842835, 1e-8);
  EXPECT_NEAR(sb_ground_correlator(cal.table.kappa(0.25), st), ising_ground_correlator(0.25, st), 1e-6);
}

TEST(Calibration, AntiferroIsMonotoneAndMatches) {
  CalibrationSettings st;
  st.eta = -1;
  st.cutoff = 4;
  st.boundary = Boundary::kOpen;
  st.length = 2;
  Calibration cal = calibrate_kappa({0.0, 0.3, 0.6, 1.0}, st);
  for (double s : {0.3, 0.6}) {
    EXPECT_NEAR(sb_ground_correlator(cal.table.kappa(s), st), ising_ground_correlator(s, st), 1e-6);
  }
  EXPECT_LE(cal.table.kappa(0.3), cal.table.kappa(0.6));
}

TEST(Calibration, LowCutoffWarns) {
  CalibrationSettings st;
  st.cutoff = 2;
  Calibration cal = calibrate_kappa({0.0, 0.5, 1.0}, st);
  EXPECT_FALSE(cal.warnings.empty());
}

TEST(NoiseCoupling, Operators) {
  auto z = noise_coupling_operators(Axis::kZ, spin_layout(1));
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].coeff(0, 0), cplx(0.5));
  EXPECT_EQ(z[0].coeff(1, 1), cplx(-0.5));
  auto x = noise_coupling_operators(Axis::kX, spin_layout(2));
  ASSERT_EQ(x.size(), 2u);
  for (const auto& op : x) {
    auto ev = dense_spectrum(op);
    EXPECT_NEAR(ev[0], -0.5, 1e-15);
    EXPECT_NEAR(ev[3], 0.5, 1e-15);
  }
  Eigen::MatrixXcd a = x[0].to_dense(), b = x[1].to_dense();
  EXPECT_LT((a * b - b * a).norm(), 1e-15);
  auto unit = noise_coupling_operators(Axis::kX, SpaceLayout{2, 2, 2}, NoiseCoupling::kUnitAmplitude);
  EXPECT_EQ(unit[1].coeff(0, 2), cplx(1.0));
  EXPECT_THROW(noise_coupling_operators(Axis::kY, spin_layout(1)), std::invalid_argument);
}

TEST(ScheduledHamiltonian, MatchesDirectBuilders) {
  for (ModelKind kind : {ModelKind::kIsing, ModelKind::kSpinBoson}) {
    for (int eta : {1, -1}) {
      ChainModel m;
      m.kind = kind;
      m.eta = eta;
      m.cutoff = 3;
      m.omega = 1.4;
      m.omega0 = 0.9;
      auto noise = noise_coupling_operators(Axis::kX, m.layout());
      ScheduledHamiltonian sh(m, noise);
      SparseOperator target = sh.make_target();
      std::vector<double> f{0.3, -0.2, 0.7};
      for (double x : {0.0, 0.2, 0.9}) {
        sh.assemble_into(x, f, target);
        SparseOperator expect = kind == ModelKind::kIsing
                                    ? build_ising(ising_schedule(x, 3, eta, 0.9), m.layout())
                                    : build_spin_boson(sb_schedule(x, 3, eta, 0.9, 1.4, 3), m.layout());
        for (std::size_t i = 0; i < 3; ++i) expect = expect + noise[i] * f[i];
        EXPECT_LT((target.to_dense() - expect.to_dense()).norm(), 1e-13);
      }
    }
  }
}

TEST(AnnealSpec, ParameterAndSteps) {
  AnnealSpec spec;
  spec.model.kind = ModelKind::kSpinBoson;
  spec.ramp = RampTable({0.0, 0.5, 1.0}, {0.0, 0.2, 1.0});
  spec.total_time = 12.3;
  spec.dt = 0.1;
  EXPECT_EQ(spec.steps(), 123u);
  EXPECT_DOUBLE_EQ(spec.parameter(0.25), 0.1);
  spec.model.kind = ModelKind::kIsing;
  EXPECT_DOUBLE_EQ(spec.parameter(0.25), 0.25);
  spec.total_time = -1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace annealsim
