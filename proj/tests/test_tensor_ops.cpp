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

#include "annealsim/eigensolver.hpp"
#include "annealsim/sparse_operator.hpp"
#include "dense_oracle.hpp"
#include "test_util.hpp"

namespace annealsim {
namespace {

TEST(SpaceLayout, DimensionAndDecomposition) {
  SpaceLayout l{2, 3, 2};
  EXPECT_EQ(l.dim(), 4u * 27u);
  EXPECT_EQ(l.mode_stride(0), 4u);
  EXPECT_EQ(l.mode_stride(2), 36u);
  for (std::size_t idx = 0; idx < l.dim(); ++idx) {
    std::size_t rebuilt = 0;
    for (std::size_t i = 0; i < l.n_spins; ++i) rebuilt += static_cast<std::size_t>(l.spin_bit(idx, i)) << i;
    for (std::size_t r = 0; r < l.n_modes; ++r) rebuilt += l.occupation(idx, r) * l.mode_stride(r);
    EXPECT_EQ(rebuilt, idx);
  }
}

TEST(SpaceLayout, RejectsBadLayouts) {
  EXPECT_THROW(validate_layout({0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(validate_layout({1, 2, 0}), std::invalid_argument);
  EXPECT_NO_THROW(validate_layout({1, 0, 0}));
}

TEST(SpinOperator, SigmaZSingleSpin) {
  SparseOperator z = spin_operator(0, Axis::kZ, spin_layout(1));
  EXPECT_EQ(z.coeff(0, 0), cplx(1.0));
  EXPECT_EQ(z.coeff(1, 1), cplx(-1.0));
  EXPECT_EQ(z.coeff(0, 1), cplx(0.0));
}

TEST(SpinOperator, SigmaXFlipsUp) {
  auto l = spin_layout(1);
  StateVector out = apply(spin_operator(0, Axis::kX, l), StateVector::basis(l, 0));
  EXPECT_NEAR(std::abs(out.amplitudes[1] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitudes[0]), 0.0, 1e-15);
}

TEST(SpinOperator, SquareHasTraceDim) {
  auto l = spin_layout(2);
  SparseOperator z1 = spin_operator(1, Axis::kZ, l);
  EXPECT_NEAR(z1.compose(z1).to_dense().trace().real(), 4.0, 1e-15);
}

TEST(SpinOperator, MatchesKroneckerOracle) {
  SpaceLayout l{3, 2, 2};
  oracle::Space sp{3, 2, 2};
  for (std::size_t site = 0; site < 3; ++site) {
    for (char a : {'x', 'y', 'z'}) {
      Axis axis = a == 'x' ? Axis::kX : a == 'y' ? Axis::kY : Axis::kZ;
      EXPECT_LT((spin_operator(site, axis, l).to_dense() - sp.sigma(site, a)).norm(), 1e-15) << site << a;
    }
  }
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_LT((boson_operator(r, BosonKind::kAnnihilate, l).to_dense() - sp.b(r)).norm(), 1e-14);
    EXPECT_LT((boson_operator(r, BosonKind::kCreate, l).to_dense() - sp.b(r).adjoint()).norm(), 1e-14);
  }
}

TEST(SpinOperator, RejectsOutOfRange) {
  EXPECT_THROW(spin_operator(2, Axis::kX, spin_layout(2)), std::out_of_range);
  EXPECT_THROW(boson_operator(1, BosonKind::kNumber, SpaceLayout{1, 1, 2}), std::out_of_range);
}

TEST(BosonOperator, NumberSpectrum) {
  SpaceLayout l{0, 1, 2};
  auto ev = oracle::eigenvalues(boson_operator(0, BosonKind::kNumber, l).to_dense());
  EXPECT_NEAR(ev[0], 0.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
  EXPECT_NEAR(ev[2], 2.0, 1e-14);
}

TEST(BosonOperator, AnnihilateVacuumIsZero) {
  SpaceLayout l{1, 1, 3};
  StateVector out = apply(boson_operator(0, BosonKind::kAnnihilate, l), StateVector::basis(l, 0));
  EXPECT_EQ(out.amplitudes.norm(), 0.0);
}

TEST(BosonOperator, CreateAnnihilateIsNumber) {
  SpaceLayout l{1, 2, 4};
  SparseOperator a = boson_operator(1, BosonKind::kAnnihilate, l);
  SparseOperator ad = boson_operator(1, BosonKind::kCreate, l);
  SparseOperator n = boson_operator(1, BosonKind::kNumber, l);
  EXPECT_LT((ad.compose(a).to_dense() - n.to_dense()).norm(), 1e-13);
  SparseOperator x = boson_operator(1, BosonKind::kPosition, l);
  EXPECT_LT((x.to_dense() - (a + ad).to_dense()).norm(), 1e-15);
}

TEST(Apply, IdentityAndLayoutMismatch) {
  SpaceLayout l{2, 1, 2};
  StateVector psi = StateVector::random(l, 3);
  StateVector out = apply(SparseOperator::identity(l), psi);
  EXPECT_LT((out.amplitudes - psi.amplitudes).norm(), 1e-15);
  EXPECT_THROW(apply(SparseOperator::identity(spin_layout(3)), psi), std::invalid_argument);
}

TEST(Apply, RandomHermitianMatchesDenseProduct) {
  SpaceLayout l = spin_layout(3);
  oracle::Mat h = oracle::random_hermitian(8, 11);
  SparseOperator op = testing_util::from_dense(h, l);
  StateVector psi = StateVector::random(l, 5);
  StateVector out = apply(op, psi);
  EXPECT_LT((out.amplitudes - h * psi.amplitudes).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Embeddings, DisjointFactorsCommute) {
  SpaceLayout l{3, 2, 3};
  std::vector<SparseOperator> ops;
  for (std::size_t i = 0; i < 3; ++i)
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) ops.push_back(spin_operator(i, a, l));
  for (std::size_t r = 0; r < 2; ++r) ops.push_back(boson_operator(r, BosonKind::kAnnihilate, l));
  StateVector psi = StateVector::random(l, 9);
  auto site_of = [](std::size_t k) { return k < 9 ? static_cast<int>(k / 3) : static_cast<int>(10 + k); };
  for (std::size_t p = 0; p < ops.size(); ++p) {
    for (std::size_t q = 0; q < ops.size(); ++q) {
      if (site_of(p) == site_of(q)) continue;
      StateVector ab = apply(ops[p], apply(ops[q], psi));
      StateVector ba = apply(ops[q], apply(ops[p], psi));
      EXPECT_LT((ab.amplitudes - ba.amplitudes).norm(), 1e-12);
    }
  }
}

TEST(Builder, HermitianPairsAreExactMirrors) {
  SpaceLayout l{2, 2, 3};
  OperatorBuilder b(l);
  b.add(0.37, {Factor::sigma(Axis::kX, 0), Factor::annihilate(1)});
  b.add(0.37, {Factor::sigma(Axis::kX, 0), Factor::create(1)});
  b.add(0.2, {Factor::sigma(Axis::kY, 1)});
  b.add(0.9, {Factor::number(0)});
  SparseOperator h = b.build();
  EXPECT_EQ(h.hermitian_defect(), 0.0);
  EXPECT_FALSE(h.is_real());
}

TEST(OperatorCombination, MatchesDirectSum) {
  SpaceLayout l{2, 1, 3};
  std::vector<SparseOperator> terms{spin_operator(0, Axis::kZ, l), spin_operator(1, Axis::kX, l),
                                    boson_operator(0, BosonKind::kPosition, l), boson_operator(0, BosonKind::kNumber, l)};
  OperatorCombination combo(terms);
  std::vector<double> c{0.3, -1.1, 0.45, 2.0};
  SparseOperator target = combo.make_target();
  combo.combine_into(c, target);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(l.dim()), static_cast<Eigen::Index>(l.dim()));
  for (std::size_t k = 0; k < terms.size(); ++k) expect += c[k] * terms[k].to_dense();
  EXPECT_LT((target.to_dense() - expect).norm(), 1e-14);
  std::vector<double> c2{0.0, 0.0, 1.0, 0.0};
  combo.combine_into(c2, target);
  EXPECT_LT((target.to_dense() - terms[2].to_dense()).norm(), 1e-15);
}

TEST(ExtremalEigs, SingleSpinHalfSigmaZ) {
  SparseOperator h = spin_operator(0, Axis::kZ, spin_layout(1)) * 0.5;
  auto eigs = extremal_eigs(h, 2);
  ASSERT_EQ(eigs.size(), 2u);
  EXPECT_NEAR(eigs[0].value, -0.5, 1e-12);
  EXPECT_NEAR(eigs[1].value, 0.5, 1e-12);
}

TEST(ExtremalEigs, TwoSpinXXIsTwofoldDegenerate) {
  auto l = spin_layout(2);
  OperatorBuilder b(l);
  b.add(1.0, {Factor::sigma(Axis::kX, 0), Factor::sigma(Axis::kX, 1)});
  auto eigs = extremal_eigs(b.build(), 2);
  EXPECT_NEAR(eigs[0].value, -1.0, 1e-10);
  EXPECT_NEAR(eigs[1].value, -1.0, 1e-10);
  EXPECT_NEAR(std::abs(eigs[0].vector.dot(eigs[1].vector)), 0.0, 1e-10);
}

TEST(ExtremalEigs, RandomTwelveDimMatchesDense) {
  SpaceLayout l{2, 1, 2};
  for (unsigned seed = 1; seed <= 5; ++seed) {
    oracle::Mat h = oracle::random_hermitian(12, seed);
    auto ref = oracle::eigenvalues(h);
    SparseOperator op = testing_util::from_dense(h, l);
    auto eigs = extremal_eigs(op, 5);
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(eigs[k].value, ref[static_cast<Eigen::Index>(k)], 1e-9);
      Eigen::VectorXcd r = h * eigs[k].vector - eigs[k].value * eigs[k].vector;
      EXPECT_LT(r.norm(), 1e-9 * h.norm());
      for (std::size_t j = 0; j < k; ++j) EXPECT_LT(std::abs(eigs[j].vector.dot(eigs[k].vector)), 1e-10);
    }
  }
}

TEST(ExtremalEigs, LargerRealOperatorWithRestarts) {
  SpaceLayout l{4, 2, 3};
  oracle::Space sp{4, 2, 3};
  OperatorBuilder b(l);
  oracle::Mat dense = oracle::Mat::Zero(static_cast<Eigen::Index>(l.dim()), static_cast<Eigen::Index>(l.dim()));
  for (std::size_t i = 0; i < 4; ++i) {
    b.add(0.3 + 0.1 * static_cast<double>(i), {Factor::sigma(Axis::kZ, i)});
    dense += (0.3 + 0.1 * static_cast<double>(i)) * sp.sigma(i, 'z');
    std::size_t r = i % 2;
    b.add(0.4, {Factor::sigma(Axis::kX, i), Factor::annihilate(r)});
    b.add(0.4, {Factor::sigma(Axis::kX, i), Factor::create(r)});
    dense += 0.4 * sp.sigma(i, 'x') * (sp.b(r) + sp.b(r).adjoint());
  }
  for (std::size_t r = 0; r < 2; ++r) {
    b.add(1.0, {Factor::number(r)});
    dense += sp.b(r).adjoint() * sp.b(r);
  }
  SparseOperator h = b.build();
  ASSERT_TRUE(h.is_real());
  EigOptions opt;
  opt.max_basis = 12;
  auto eigs = extremal_eigs(h, 6, opt);
  auto ref = oracle::eigenvalues(dense);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(eigs[k].value, ref[static_cast<Eigen::Index>(k)], 1e-9);
}

TEST(ExtremalEigs, ParitySector) {
  // Transverse-field chain: parity-restricted lowest levels match the dense
  // spectrum restricted to the same sector.
  SpaceLayout l = spin_layout(4);
  oracle::Space sp{4, 0, 0};
  OperatorBuilder b(l);
  oracle::Mat dense = oracle::Mat::Zero(16, 16);
  for (std::size_t i = 0; i < 4; ++i) {
    b.add(0.5, {Factor::sigma(Axis::kZ, i)});
    dense += 0.5 * sp.sigma(i, 'z');
    b.add(-0.7, {Factor::sigma(Axis::kX, i), Factor::sigma(Axis::kX, (i + 1) % 4)});
    dense += -0.7 * sp.sigma(i, 'x') * sp.sigma((i + 1) % 4, 'x');
  }
  SparseOperator h = b.build();
  for (int sector : {1, -1}) {
    std::vector<Eigen::Index> idx;
    for (std::size_t k = 0; k < 16; ++k)
      if (l.parity(k) == sector) idx.push_back(static_cast<Eigen::Index>(k));
    oracle::Mat block(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t c = 0; c < idx.size(); ++c) block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = dense(idx[a], idx[c]);
    auto ref = oracle::eigenvalues(block);
    EigOptions opt;
    opt.parity = sector;
    auto eigs = extremal_eigs(h, 3, opt);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(eigs[k].value, ref[static_cast<Eigen::Index>(k)], 1e-9);
  }
}

TEST(ExtremalEigs, ParityLeakIsRejected) {
  SparseOperator x = spin_operator(0, Axis::kX, spin_layout(2));
  EigOptions opt;
  opt.parity = 1;
  EXPECT_THROW(extremal_eigs(x, 1, opt), std::invalid_argument);
}

TEST(ExtremalEigs, NonConvergenceReportsResiduals) {
  SpaceLayout l{2, 2, 4};
  oracle::Mat h = oracle::random_hermitian(static_cast<Eigen::Index>(l.dim()), 4);
  EigOptions opt;
  opt.max_basis = 4;
  opt.max_restarts = 1;
  opt.tolerance = 1e-15;
  try {
    extremal_eigs(testing_util::from_dense(h, l), 2, opt);
    FAIL() << "expected EigenSolverError";
  } catch (const EigenSolverError& e) {
    EXPECT_EQ(e.residuals().size(), 2u);
  }
}

}  // namespace
}  // namespace annealsim
