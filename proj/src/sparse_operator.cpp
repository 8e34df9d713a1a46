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

#include "annealsim/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace annealsim {

namespace {

struct RowEntry {
  std::size_t col;
  cplx value;
};

// Applies the row action of `f`: finds the column c with F[row, c] != 0.
// Returns false when the row of F is empty.
bool row_action(const SpaceLayout& layout, const Factor& f, std::size_t row, std::size_t& col,
                cplx& amp) {
  using K = Factor::Kind;
  switch (f.kind) {
    case K::kSigmaX:
      col = row ^ (std::size_t{1} << f.target);
      return true;
    case K::kSigmaY: {
      int bit = layout.spin_bit(row, f.target);
      col = row ^ (std::size_t{1} << f.target);
      amp *= bit == 0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
      return true;
    }
    case K::kSigmaZ:
      col = row;
      if (layout.spin_bit(row, f.target) == 1) amp = -amp;
      return true;
    case K::kAnnihilate: {
      std::size_t n = layout.occupation(row, f.target);
      if (n + 1 > layout.cutoff) return false;
      col = row + layout.mode_stride(f.target);
      amp *= std::sqrt(static_cast<double>(n + 1));
      return true;
    }
    case K::kCreate: {
      std::size_t n = layout.occupation(row, f.target);
      if (n == 0) return false;
      col = row - layout.mode_stride(f.target);
      amp *= std::sqrt(static_cast<double>(n));
      return true;
    }
    case K::kNumber: {
      std::size_t n = layout.occupation(row, f.target);
      col = row;
      amp *= static_cast<double>(n);
      return n != 0;
    }
  }
  return false;
}

void check_factor(const SpaceLayout& layout, const Factor& f) {
  using K = Factor::Kind;
  bool spin = f.kind == K::kSigmaX || f.kind == K::kSigmaY || f.kind == K::kSigmaZ;
  if (spin && f.target >= layout.n_spins) {
    throw std::out_of_range("spin site " + std::to_string(f.target) + " out of range for " +
                            layout.describe());
  }
  if (!spin && f.target >= layout.n_modes) {
    throw std::out_of_range("mode " + std::to_string(f.target) + " out of range for " +
                            layout.describe());
  }
}

// Collects the merged, column-sorted entries of one row.
void collect_row(const SpaceLayout& layout, const std::vector<ProductTerm>& terms, std::size_t row,
                 std::vector<RowEntry>& out) {
  out.clear();
  for (const auto& term : terms) {
    std::size_t cur = row;
    cplx amp = 1.0;
    bool alive = true;
    for (const auto& f : term.factors) {
      std::size_t next = 0;
      if (!row_action(layout, f, cur, next, amp)) {
        alive = false;
        break;
      }
      cur = next;
    }
    if (alive) out.push_back({cur, term.coeff * amp});
  }
  std::sort(out.begin(), out.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
  std::size_t w = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (w > 0 && out[w - 1].col == out[k].col) {
      out[w - 1].value += out[k].value;
    } else {
      out[w++] = out[k];
    }
  }
  out.resize(w);
}

void check_same_layout(const SpaceLayout& a, const SpaceLayout& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": layout mismatch (" + a.describe() + " vs " +
                                b.describe() + ")");
  }
}

}  // namespace

Factor Factor::sigma(Axis axis, std::size_t site) {
  switch (axis) {
    case Axis::kX:
      return {Kind::kSigmaX, site};
    case Axis::kY:
      return {Kind::kSigmaY, site};
    case Axis::kZ:
      return {Kind::kSigmaZ, site};
  }
  return {Kind::kSigmaZ, site};
}

OperatorBuilder::OperatorBuilder(SpaceLayout layout) : layout_(layout) { validate_layout(layout_); }

OperatorBuilder& OperatorBuilder::add(cplx coeff, std::vector<Factor> factors) {
  for (const auto& f : factors) check_factor(layout_, f);
  if (coeff != cplx(0.0)) terms_.push_back({coeff, std::move(factors)});
  return *this;
}

SparseOperator OperatorBuilder::build() const {
  const std::size_t dim = layout_.dim();
  std::vector<RowEntry> row;
  std::vector<int> re_count(dim + 1, 0);
  std::vector<int> im_count(dim + 1, 0);
  std::size_t re_nnz = 0;
  std::size_t im_nnz = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    collect_row(layout_, terms_, r, row);
    for (const auto& e : row) {
      if (e.value.real() != 0.0) ++re_nnz;
      if (e.value.imag() != 0.0) ++im_nnz;
    }
    re_count[r + 1] = static_cast<int>(re_nnz);
    im_count[r + 1] = static_cast<int>(im_nnz);
  }

  SparseOperator::RealMatrix re(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  SparseOperator::RealMatrix im(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  re.resizeNonZeros(static_cast<Eigen::Index>(re_nnz));
  im.resizeNonZeros(static_cast<Eigen::Index>(im_nnz));
  std::copy(re_count.begin(), re_count.end(), re.outerIndexPtr());
  std::copy(im_count.begin(), im_count.end(), im.outerIndexPtr());
  std::size_t pr = 0;
  std::size_t pi = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    collect_row(layout_, terms_, r, row);
    for (const auto& e : row) {
      if (e.value.real() != 0.0) {
        re.innerIndexPtr()[pr] = static_cast<int>(e.col);
        re.valuePtr()[pr++] = e.value.real();
      }
      if (e.value.imag() != 0.0) {
        im.innerIndexPtr()[pi] = static_cast<int>(e.col);
        im.valuePtr()[pi++] = e.value.imag();
      }
    }
  }
  return SparseOperator(layout_, std::move(re), std::move(im));
}

SparseOperator::SparseOperator(SpaceLayout layout, RealMatrix re, RealMatrix im)
    : layout_(layout), re_(std::move(re)), im_(std::move(im)) {
  const auto d = static_cast<Eigen::Index>(layout_.dim());
  if (re_.rows() == 0 && re_.cols() == 0) re_.resize(d, d);
  if (im_.rows() == 0 && im_.cols() == 0) im_.resize(d, d);
  if (re_.rows() != d || re_.cols() != d || im_.rows() != d || im_.cols() != d) {
    throw std::invalid_argument("operator dimension does not match layout " + layout_.describe());
  }
  re_.makeCompressed();
  im_.makeCompressed();
}

SparseOperator SparseOperator::identity(const SpaceLayout& layout) {
  return OperatorBuilder(layout).add_identity(1.0).build();
}

SparseOperator SparseOperator::zero(const SpaceLayout& layout) {
  validate_layout(layout);
  return SparseOperator(layout, RealMatrix(), RealMatrix());
}

std::size_t SparseOperator::nnz() const {
  return static_cast<std::size_t>(re_.nonZeros() + im_.nonZeros());
}

cplx SparseOperator::coeff(std::size_t row, std::size_t col) const {
  auto r = static_cast<Eigen::Index>(row);
  auto c = static_cast<Eigen::Index>(col);
  return {re_.coeff(r, c), im_.coeff(r, c)};
}

double SparseOperator::hermitian_defect() const {
  RealMatrix dre = re_ - RealMatrix(re_.transpose());
  RealMatrix dim = im_ + RealMatrix(im_.transpose());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < dre.nonZeros(); ++k) worst = std::max(worst, std::abs(dre.valuePtr()[k]));
  for (Eigen::Index k = 0; k < dim.nonZeros(); ++k) worst = std::max(worst, std::abs(dim.valuePtr()[k]));
  return worst;
}

double SparseOperator::norm_bound() const {
  double best = 0.0;
  for (Eigen::Index r = 0; r < re_.rows(); ++r) {
    double sum = 0.0;
    for (int p = re_.outerIndexPtr()[r]; p < re_.outerIndexPtr()[r + 1]; ++p) sum += std::abs(re_.valuePtr()[p]);
    for (int p = im_.outerIndexPtr()[r]; p < im_.outerIndexPtr()[r + 1]; ++p) sum += std::abs(im_.valuePtr()[p]);
    best = std::max(best, sum);
  }
  return best;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXd(re_).cast<cplx>();
  out += cplx(0.0, 1.0) * Eigen::MatrixXd(im_).cast<cplx>();
  return out;
}

void SparseOperator::multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const auto n = re_.rows();
  if (x.size() != n) throw std::invalid_argument("multiply: vector size does not match operator");
  y.resize(n);
  const int* outer = re_.outerIndexPtr();
  const int* inner = re_.innerIndexPtr();
  const double* val = re_.valuePtr();
  const cplx* xs = x.data();
  for (Eigen::Index r = 0; r < n; ++r) {
    double sr = 0.0;
    double si = 0.0;
    for (int p = outer[r]; p < outer[r + 1]; ++p) {
      const cplx& v = xs[inner[p]];
      sr += val[p] * v.real();
      si += val[p] * v.imag();
    }
    y[r] = cplx(sr, si);
  }
  if (im_.nonZeros() == 0) return;
  outer = im_.outerIndexPtr();
  inner = im_.innerIndexPtr();
  val = im_.valuePtr();
  for (Eigen::Index r = 0; r < n; ++r) {
    double sr = 0.0;
    double si = 0.0;
    for (int p = outer[r]; p < outer[r + 1]; ++p) {
      const cplx& v = xs[inner[p]];
      sr -= val[p] * v.imag();
      si += val[p] * v.real();
    }
    y[r] += cplx(sr, si);
  }
}

void SparseOperator::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (!is_real()) throw std::logic_error("real multiply requested on a complex operator");
  const auto n = re_.rows();
  if (x.size() != n) throw std::invalid_argument("multiply: vector size does not match operator");
  y.resize(n);
  const int* outer = re_.outerIndexPtr();
  const int* inner = re_.innerIndexPtr();
  const double* val = re_.valuePtr();
  const double* xs = x.data();
  for (Eigen::Index r = 0; r < n; ++r) {
    double s = 0.0;
    for (int p = outer[r]; p < outer[r + 1]; ++p) s += val[p] * xs[inner[p]];
    y[r] = s;
  }
}

double SparseOperator::expectation(const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd tmp;
  multiply(psi, tmp);
  return psi.dot(tmp).real();
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
  check_same_layout(layout_, other.layout_, "operator+");
  RealMatrix re = re_ + other.re_;
  RealMatrix im = im_ + other.im_;
  re.prune(0.0);
  im.prune(0.0);
  return SparseOperator(layout_, std::move(re), std::move(im));
}

SparseOperator SparseOperator::operator*(double scale) const {
  RealMatrix re = re_ * scale;
  RealMatrix im = im_ * scale;
  re.prune(0.0);
  im.prune(0.0);
  return SparseOperator(layout_, std::move(re), std::move(im));
}

SparseOperator SparseOperator::adjoint() const {
  RealMatrix re = re_.transpose();
  RealMatrix im = -RealMatrix(im_.transpose());
  return SparseOperator(layout_, std::move(re), std::move(im));
}

SparseOperator SparseOperator::compose(const SparseOperator& other) const {
  check_same_layout(layout_, other.layout_, "compose");
  RealMatrix re = (re_ * other.re_).pruned();
  RealMatrix im = (re_ * other.im_).pruned();
  if (im_.nonZeros() > 0) {
    re = (re - RealMatrix(im_ * other.im_)).pruned();
    im = (im + RealMatrix(im_ * other.re_)).pruned();
  }
  re.prune(0.0);
  im.prune(0.0);
  return SparseOperator(layout_, std::move(re), std::move(im));
}

StateVector::StateVector(SpaceLayout l, Eigen::VectorXcd a) : layout(l), amplitudes(std::move(a)) {
  if (static_cast<std::size_t>(amplitudes.size()) != layout.dim()) {
    throw std::invalid_argument("state size does not match layout " + layout.describe());
  }
}

StateVector StateVector::basis(const SpaceLayout& layout, std::size_t index) {
  validate_layout(layout);
  if (index >= layout.dim()) throw std::out_of_range("basis index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim()));
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return {layout, std::move(a)};
}

StateVector StateVector::random(const SpaceLayout& layout, std::uint64_t seed) {
  validate_layout(layout);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd a(static_cast<Eigen::Index>(layout.dim()));
  for (auto& z : a) z = cplx(normal(rng), normal(rng));
  StateVector s(layout, std::move(a));
  s.normalize();
  return s;
}

void StateVector::normalize() {
  double n = amplitudes.norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  amplitudes /= n;
}

SparseOperator spin_operator(std::size_t site, Axis axis, const SpaceLayout& layout) {
  if (site >= layout.n_spins) {
    throw std::out_of_range("spin site " + std::to_string(site) + " out of range for " + layout.describe());
  }
  return OperatorBuilder(layout).add(1.0, {Factor::sigma(axis, site)}).build();
}

SparseOperator boson_operator(std::size_t mode, BosonKind kind, const SpaceLayout& layout) {
  if (mode >= layout.n_modes) {
    throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " + layout.describe());
  }
  OperatorBuilder b(layout);
  switch (kind) {
    case BosonKind::kAnnihilate:
      b.add(1.0, {Factor::annihilate(mode)});
      break;
    case BosonKind::kCreate:
      b.add(1.0, {Factor::create(mode)});
      break;
    case BosonKind::kNumber:
      b.add(1.0, {Factor::number(mode)});
      break;
    case BosonKind::kPosition:
      b.add(1.0, {Factor::annihilate(mode)}).add(1.0, {Factor::create(mode)});
      break;
  }
  return b.build();
}

StateVector apply(const SparseOperator& op, const StateVector& psi) {
  check_same_layout(op.layout(), psi.layout, "apply");
  StateVector out;
  out.layout = psi.layout;
  op.multiply(psi.amplitudes, out.amplitudes);
  return out;
}

OperatorCombination::OperatorCombination(std::vector<SparseOperator> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("OperatorCombination needs at least one term");
  layout_ = terms_.front().layout();
  const auto d = static_cast<Eigen::Index>(layout_.dim());
  pattern_.resize(d, d);
  for (const auto& t : terms_) {
    check_same_layout(layout_, t.layout(), "OperatorCombination");
    SparseOperator::RealMatrix ones_re = t.real_part();
    SparseOperator::RealMatrix ones_im = t.imag_part();
    for (Eigen::Index k = 0; k < ones_re.nonZeros(); ++k) ones_re.valuePtr()[k] = 1.0;
    for (Eigen::Index k = 0; k < ones_im.nonZeros(); ++k) ones_im.valuePtr()[k] = 1.0;
    pattern_ = SparseOperator::RealMatrix(pattern_ + ones_re + ones_im);
    any_imag_ = any_imag_ || !t.is_real();
  }
  pattern_.makeCompressed();

  auto align = [this](const SparseOperator::RealMatrix& m) {
    Scatter out;
    out.position.reserve(static_cast<std::size_t>(m.nonZeros()));
    out.value.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      int p = pattern_.outerIndexPtr()[r];
      for (int q = m.outerIndexPtr()[r]; q < m.outerIndexPtr()[r + 1]; ++q) {
        while (pattern_.innerIndexPtr()[p] != m.innerIndexPtr()[q]) ++p;
        out.position.push_back(p);
        out.value.push_back(m.valuePtr()[q]);
      }
    }
    return out;
  };
  for (const auto& t : terms_) {
    re_values_.push_back(align(t.real_part()));
    im_values_.push_back(any_imag_ ? align(t.imag_part()) : Scatter{});
  }
}

SparseOperator OperatorCombination::make_target() const {
  SparseOperator::RealMatrix re = pattern_;
  std::fill(re.valuePtr(), re.valuePtr() + re.nonZeros(), 0.0);
  SparseOperator::RealMatrix im;
  if (any_imag_) im = re;
  return SparseOperator(layout_, std::move(re), std::move(im));
}

void OperatorCombination::combine_into(std::span<const double> coeffs, SparseOperator& target) const {
  if (coeffs.size() != terms_.size()) throw std::invalid_argument("coefficient count mismatch");
  auto& re = target.mutable_real_part();
  if (re.nonZeros() != pattern_.nonZeros()) {
    throw std::invalid_argument("combine_into: target was not created by make_target");
  }
  auto scatter = [&](const std::vector<Scatter>& parts, double* out) {
    std::fill(out, out + pattern_.nonZeros(), 0.0);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const double c = coeffs[k];
      if (c == 0.0) continue;
      const int* pos = parts[k].position.data();
      const double* v = parts[k].value.data();
      const std::size_t n = parts[k].value.size();
      for (std::size_t p = 0; p < n; ++p) out[pos[p]] += c * v[p];
    }
  };
  scatter(re_values_, re.valuePtr());
  if (any_imag_) scatter(im_values_, target.mutable_imag_part().valuePtr());
}

SparseOperator OperatorCombination::combine(std::span<const double> coeffs) const {
  SparseOperator out = make_target();
  combine_into(coeffs, out);
  return out;
}

}  // namespace annealsim
