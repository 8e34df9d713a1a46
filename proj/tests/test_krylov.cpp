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

#include "annealsim/krylov.hpp"
#include "dense_oracle.hpp"
#include "test_util.hpp"

namespace annealsim {
namespace {

TEST(KrylovStep, SingleQubitPrecession) {
  auto l = spin_layout(1);
  SparseOperator h = spin_operator(0, Axis::kZ, l) * 0.5;
  SparseOperator x = spin_operator(0, Axis::kX, l);
  Eigen::VectorXcd psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  KrylovWorkspace ws;
  const double dt = 0.1;
  double worst = 0.0;
  for (int k = 1; k <= 500; ++k) {
    ws.step(h, psi, dt);
    worst = std::max(worst, std::abs(x.expectation(psi) - std::cos(k * dt)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(KrylovStep, ZeroHamiltonianLeavesStateUnchanged) {
  SpaceLayout l{2, 1, 2};
  StateVector psi = StateVector::random(l, 2);
  StateVector out = krylov_step(SparseOperator::zero(l), psi, 0.1);
  EXPECT_LT((out.amplitudes - psi.amplitudes).norm(), 1e-15);
}

TEST(KrylovStep, RandomHermitianMatchesDenseExponential) {
  SpaceLayout l = spin_layout(6);
  for (unsigned seed = 1; seed <= 4; ++seed) {
    oracle::Mat h = oracle::random_hermitian(64, seed) * 0.2;
    SparseOperator op = testing_util::from_dense(h, l);
    oracle::Vec psi = oracle::random_state(64, seed + 10);
    for (double dt : {0.1, 0.5}) {
      StateVector in(l, psi);
      StateVector out = krylov_step(op, in, dt);
      oracle::Vec ref = oracle::expm_i(h, dt) * psi;
      EXPECT_LT((out.amplitudes - ref).cwiseAbs().maxCoeff(), 1e-9) << "seed " << seed << " dt " << dt;
      EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    }
  }
}

TEST(KrylovStep, RealOperatorComplexState) {
  SpaceLayout l{2, 2, 3};
  oracle::Space sp{2, 2, 3};
  OperatorBuilder b(l);
  b.add(0.5, {Factor::sigma(Axis::kZ, 0)});
  b.add(0.5, {Factor::sigma(Axis::kZ, 1)});
  for (std::size_t i = 0; i < 2; ++i) {
    b.add(0.6, {Factor::sigma(Axis::kX, i), Factor::annihilate(i)});
    b.add(0.6, {Factor::sigma(Axis::kX, i), Factor::create(i)});
  }
  b.add(1.0, {Factor::number(0)});
  b.add(1.0, {Factor::number(1)});
  SparseOperator h = b.build();
  oracle::Vec psi = oracle::random_state(static_cast<Eigen::Index>(l.dim()), 3);
  oracle::Mat u = oracle::expm_i(h.to_dense(), 0.1);
  StateVector s(l, psi);
  KrylovWorkspace ws;
  for (int k = 0; k < 20; ++k) {
    ws.step(h, s.amplitudes, 0.1);
    psi = u * psi;
  }
  EXPECT_LT((s.amplitudes - psi).norm(), 1e-9);
}

TEST(KrylovStep, ReportsFailureAtCeiling) {
  SpaceLayout l = spin_layout(6);
  oracle::Mat h = oracle::random_hermitian(64, 9) * 5.0;
  SparseOperator op = testing_util::from_dense(h, l);
  Eigen::VectorXcd psi = oracle::random_state(64, 1);
  KrylovOptions opt;
  opt.m_start = 4;
  opt.m_max = 6;
  KrylovWorkspace ws;
  EXPECT_THROW(ws.step(op, psi, 1.0, opt), KrylovError);
}

TEST(KrylovStep, StatsAreReported) {
  SpaceLayout l = spin_layout(6);
  oracle::Mat h = oracle::random_hermitian(64, 5) * 0.2;
  SparseOperator op = testing_util::from_dense(h, l);
  Eigen::VectorXcd psi = oracle::random_state(64, 2);
  KrylovWorkspace ws;
  KrylovStats st = ws.step(op, psi, 0.1);
  EXPECT_GE(st.dimension, 2u);
  EXPECT_LE(st.error_estimate, 1e-10);
  EXPECT_LT(st.renormalization, 1e-10);
}

}  // namespace
}  // namespace annealsim
