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

#include "annealsim/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace annealsim {

namespace {

template <typename Scalar>
struct Problem {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const SparseOperator& op;
  Eigen::VectorXd mask;  // empty when unrestricted
  std::size_t available = 0;
  std::mt19937_64 rng;

  void apply(const Vec& x, Vec& y) const { op.multiply(x, y); }

  void restrict_to_sector(Vec& v) const {
    if (mask.size() > 0) v = v.cwiseProduct(mask.cast<Scalar>());
  }

  Vec random_vector() {
    std::normal_distribution<double> normal;
    Vec v(static_cast<Eigen::Index>(op.dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        v[i] = normal(rng);
      } else {
        v[i] = Scalar(normal(rng), normal(rng));
      }
    }
    restrict_to_sector(v);
    return v;
  }
};

// Classical Gram-Schmidt applied twice against basis columns [0, cols) and the
// locked vectors. Returns the accumulated projection coefficients on the basis.
template <typename Scalar, typename Vec, typename Mat>
Vec orthogonalize(const Mat& basis, Eigen::Index cols, const Mat& locked, Vec& w) {
  Vec h = Vec::Zero(cols);
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) {
      Vec c = locked.adjoint() * w;
      w.noalias() -= locked * c;
    }
    if (cols > 0) {
      Vec c = basis.leftCols(cols).adjoint() * w;
      w.noalias() -= basis.leftCols(cols) * c;
      h += c;
    }
  }
  return h;
}

struct RitzResult {
  std::vector<double> values;
  std::vector<double> residuals;
  bool exhausted = false;
};

// Thick-restart Lanczos for the `nwant` lowest eigenpairs in the complement of
// `locked`. Vectors are returned as the leading columns of `out`.
template <typename Scalar>
RitzResult thick_restart_lanczos(Problem<Scalar>& pb, const typename Problem<Scalar>::Mat& locked,
                                 std::size_t nwant, const EigOptions& opt,
                                 typename Problem<Scalar>::Mat& out) {
  using Vec = typename Problem<Scalar>::Vec;
  using Mat = typename Problem<Scalar>::Mat;
  const auto n = static_cast<Eigen::Index>(pb.op.dim());
  const std::size_t space = pb.available - static_cast<std::size_t>(locked.cols());
  nwant = std::min(nwant, space);
  std::size_t m = opt.max_basis ? opt.max_basis : std::max<std::size_t>(2 * nwant + 20, 30);
  m = std::max(m, nwant + 2);
  m = std::min(m, space);

  Mat basis(n, static_cast<Eigen::Index>(m + 1));
  Mat proj = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

  auto fresh_direction = [&](Eigen::Index cols) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vec v = pb.random_vector();
      orthogonalize<Scalar>(basis, cols, locked, v);
      double nv = v.norm();
      if (nv > 1e-8) return Vec(v / nv);
    }
    throw EigenSolverError("unable to generate a new Lanczos direction", {});
  };

  basis.col(0) = fresh_direction(0);
  std::size_t kept = 0;
  double anorm = 0.0;
  double beta_last = 0.0;
  bool leak_checked = pb.mask.size() == 0;
  Vec w(n);
  RitzResult result;

  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    std::size_t filled = m;
    bool exhausted = false;
    for (std::size_t j = kept; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      Vec v = basis.col(jj);
      pb.apply(v, w);
      if (!leak_checked) {
        Vec outside = w - w.cwiseProduct(pb.mask.template cast<Scalar>());
        if (outside.norm() > 1e-10 * std::max(1.0, w.norm())) {
          throw std::invalid_argument("operator does not conserve the requested parity sector");
        }
        leak_checked = true;
      }
      pb.restrict_to_sector(w);
      Vec h = orthogonalize<Scalar>(basis, jj + 1, locked, w);
      for (Eigen::Index i = 0; i <= jj; ++i) {
        proj(i, jj) = h[i];
        proj(jj, i) = Eigen::numext::conj(h[i]);
      }
      proj(jj, jj) = Scalar(std::real(h[jj]));
      double beta = w.norm();
      anorm = std::max(anorm, std::abs(std::real(h[jj])) + beta);
      if (j + 1 == space) {
        filled = j + 1;
        exhausted = true;
        beta_last = 0.0;
        break;
      }
      if (beta <= 1e-12 * std::max(anorm, 1e-300)) {
        // Invariant subspace: continue with a fresh orthogonal direction.
        basis.col(jj + 1) = fresh_direction(jj + 1);
        beta_last = 0.0;
      } else {
        basis.col(jj + 1) = w / beta;
        beta_last = beta;
      }
    }

    const auto f = static_cast<Eigen::Index>(filled);
    Eigen::SelfAdjointEigenSolver<Mat> es(proj.topLeftCorner(f, f));
    const Eigen::VectorXd theta = es.eigenvalues();
    const Mat& y = es.eigenvectors();
    anorm = std::max({anorm, std::abs(theta[0]), std::abs(theta[f - 1])});

    result.values.assign(nwant, 0.0);
    result.residuals.assign(nwant, 0.0);
    bool converged = true;
    for (std::size_t i = 0; i < nwant; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      result.values[i] = theta[ii];
      result.residuals[i] = exhausted ? 0.0 : beta_last * std::abs(y(f - 1, ii));
      if (result.residuals[i] > opt.tolerance * anorm) converged = false;
    }

    if (converged || exhausted) {
      result.exhausted = exhausted;
      out = basis.leftCols(f) * y.leftCols(static_cast<Eigen::Index>(nwant));
      return result;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    std::size_t keep = std::min(nwant + (filled - nwant) / 2, filled - 1);
    keep = std::max(keep, nwant);
    const auto kk = static_cast<Eigen::Index>(keep);
    Mat ritz = basis.leftCols(f) * y.leftCols(kk);
    basis.col(kk) = basis.col(f);
    basis.leftCols(kk) = ritz;
    proj.setZero();
    for (Eigen::Index i = 0; i < kk; ++i) proj(i, i) = Scalar(theta[i]);
    kept = keep;
  }

  std::ostringstream msg;
  msg << "Lanczos did not converge after " << opt.max_restarts << " restarts; residuals:";
  for (double r : result.residuals) msg << ' ' << r;
  throw EigenSolverError(msg.str(), result.residuals);
}

template <typename Scalar>
std::vector<EigenPair> solve(const SparseOperator& op, std::size_t k, const EigOptions& opt) {
  using Mat = typename Problem<Scalar>::Mat;
  Problem<Scalar> pb{op, Eigen::VectorXd(), op.dim(), std::mt19937_64(opt.seed)};
  if (opt.parity) {
    if (*opt.parity != 1 && *opt.parity != -1) throw std::invalid_argument("parity sector must be +1 or -1");
    pb.mask.resize(static_cast<Eigen::Index>(op.dim()));
    pb.available = 0;
    for (std::size_t i = 0; i < op.dim(); ++i) {
      bool in = op.layout().parity(i) == *opt.parity;
      pb.mask[static_cast<Eigen::Index>(i)] = in ? 1.0 : 0.0;
      pb.available += in ? 1 : 0;
    }
  }
  if (k == 0) return {};
  if (k > pb.available) throw std::invalid_argument("requested more eigenpairs than the space dimension");

  Mat locked(static_cast<Eigen::Index>(op.dim()), 0);
  Mat vecs;
  RitzResult first = thick_restart_lanczos(pb, locked, k, opt, vecs);
  std::vector<double> values = first.values;
  Mat found = vecs;

  if (opt.resolve_degeneracy && !first.exhausted && k < pb.available) {
    double scale = std::max({1.0, std::abs(values.front()), std::abs(values.back())});
    for (std::size_t guard = 0; guard < k + 4; ++guard) {
      Mat extra;
      RitzResult more = thick_restart_lanczos(pb, found, 1, opt, extra);
      if (more.values.empty() || more.values[0] >= values.back() - 1e-9 * scale) break;
      // A missed copy below the current top: swap it in.
      values.back() = more.values[0];
      found.col(found.cols() - 1) = extra.col(0);
      std::vector<std::size_t> order(values.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      Mat sorted(found.rows(), found.cols());
      std::vector<double> sv(values.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.col(static_cast<Eigen::Index>(i)) = found.col(static_cast<Eigen::Index>(order[i]));
        sv[i] = values[order[i]];
      }
      found = std::move(sorted);
      values = std::move(sv);
    }
  }

  std::vector<EigenPair> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXcd v = found.col(static_cast<Eigen::Index>(i)).template cast<cplx>();
    out.push_back({values[i], std::move(v)});
  }
  return out;
}

}  // namespace

std::vector<EigenPair> extremal_eigs(const SparseOperator& op, std::size_t k, const EigOptions& options) {
  if (op.is_real()) return solve<double>(op, k, options);
  return solve<cplx>(op, k, options);
}

EigenPair ground_state(const SparseOperator& op, const EigOptions& options) {
  EigOptions opt = options;
  opt.resolve_degeneracy = false;
  return extremal_eigs(op, 1, opt).front();
}

}  // namespace annealsim
