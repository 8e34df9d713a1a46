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

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "annealsim/space.hpp"

namespace annealsim {

enum class BosonKind { kAnnihilate, kCreate, kNumber, kPosition };

/// One local factor of a product operator. Every factor maps a basis state to
/// at most one basis state, so a product of factors contributes at most one
/// entry per row.
struct Factor {
  enum class Kind { kSigmaX, kSigmaY, kSigmaZ, kAnnihilate, kCreate, kNumber };
  Kind kind;
  std::size_t target;  // spin site or mode index

  static Factor sigma(Axis axis, std::size_t site);
  static Factor annihilate(std::size_t mode) { return {Kind::kAnnihilate, mode}; }
  static Factor create(std::size_t mode) { return {Kind::kCreate, mode}; }
  static Factor number(std::size_t mode) { return {Kind::kNumber, mode}; }
};

/// coeff * f_0 f_1 ... f_k (f_0 applied last).
struct ProductTerm {
  cplx coeff;
  std::vector<Factor> factors;
};

class SparseOperator;

/// Accumulates product terms and assembles them into compressed storage row by
/// row. Duplicate entries are summed; Hermitian pairs built from the same
/// integer occupations produce bit-identical mirrored values.
class OperatorBuilder {
 public:
  explicit OperatorBuilder(SpaceLayout layout);

  OperatorBuilder& add(cplx coeff, std::vector<Factor> factors);
  OperatorBuilder& add_identity(cplx coeff) { return add(coeff, {}); }

  const SpaceLayout& layout() const { return layout_; }
  std::size_t term_count() const { return terms_.size(); }

  SparseOperator build() const;

 private:
  SpaceLayout layout_;
  std::vector<ProductTerm> terms_;
};

/// Complex sparse matrix on a SpaceLayout, stored as separate compressed
/// real and imaginary parts so that real Hamiltonians cost real arithmetic.
class SparseOperator {
 public:
  using RealMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

  SparseOperator() = default;
  SparseOperator(SpaceLayout layout, RealMatrix re, RealMatrix im);

  static SparseOperator identity(const SpaceLayout& layout);
  static SparseOperator zero(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }
  std::size_t dim() const { return layout_.dim(); }
  std::size_t nnz() const;
  bool is_real() const { return im_.nonZeros() == 0; }

  const RealMatrix& real_part() const { return re_; }
  const RealMatrix& imag_part() const { return im_; }
  RealMatrix& mutable_real_part() { return re_; }
  RealMatrix& mutable_imag_part() { return im_; }

  cplx coeff(std::size_t row, std::size_t col) const;

  /// max |H_ij - conj(H_ji)|.
  double hermitian_defect() const;
  /// Max absolute row sum; an upper bound on the spectral norm.
  double norm_bound() const;

  Eigen::MatrixXcd to_dense() const;

  /// y = A x.
  void multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  /// y = A x for real operators only.
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  double expectation(const Eigen::VectorXcd& psi) const;

  SparseOperator operator+(const SparseOperator& other) const;
  SparseOperator operator*(double scale) const;
  SparseOperator adjoint() const;
  /// Matrix product this * other.
  SparseOperator compose(const SparseOperator& other) const;

 private:
  SpaceLayout layout_;
  RealMatrix re_;
  RealMatrix im_;
};

struct StateVector {
  SpaceLayout layout;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  StateVector(SpaceLayout l, Eigen::VectorXcd a);

  static StateVector basis(const SpaceLayout& layout, std::size_t index);
  /// Normalized state with i.i.d. complex Gaussian amplitudes.
  static StateVector random(const SpaceLayout& layout, std::uint64_t seed);

  double norm() const { return amplitudes.norm(); }
  void normalize();
};

SparseOperator spin_operator(std::size_t site, Axis axis, const SpaceLayout& layout);
SparseOperator boson_operator(std::size_t mode, BosonKind kind, const SpaceLayout& layout);

/// op * psi.
StateVector apply(const SparseOperator& op, const StateVector& psi);

/// Linear combination sum_k c_k O_k of fixed operators with real coefficients,
/// evaluated on the union sparsity pattern so that recombination touches only
/// stored values.
class OperatorCombination {
 public:
  explicit OperatorCombination(std::vector<SparseOperator> terms);

  std::size_t size() const { return terms_.size(); }
  const SpaceLayout& layout() const { return layout_; }
  const SparseOperator& term(std::size_t k) const { return terms_[k]; }

  /// Operator with the union pattern and zero values, ready for combine_into.
  SparseOperator make_target() const;
  void combine_into(std::span<const double> coeffs, SparseOperator& target) const;
  SparseOperator combine(std::span<const double> coeffs) const;

 private:
  SpaceLayout layout_;
  std::vector<SparseOperator> terms_;
  SparseOperator::RealMatrix pattern_;
  bool any_imag_ = false;
  // Each term's stored entries as (position in pattern_, value).
  struct Scatter {
    std::vector<int> position;
    std::vector<double> value;
  };
  std::vector<Scatter> re_values_;
  std::vector<Scatter> im_values_;
};

}  // namespace annealsim
