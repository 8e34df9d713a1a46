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

#include "annealsim/krylov.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace annealsim {

namespace {

// exp(-i T dt) e_0 for the leading m x m block of a real symmetric
// tridiagonal matrix.
Eigen::VectorXcd tridiagonal_propagate(const std::vector<double>& alpha, const std::vector<double>& beta,
                                       std::size_t m, double dt) {
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::VectorXd diag(n), off(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) off[i] = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd coeff(n);
  for (Eigen::Index k = 0; k < n; ++k) coeff[k] = std::exp(cplx(0.0, -es.eigenvalues()[k] * dt)) * q(0, k);
  return q.cast<cplx>() * coeff;
}

}  // namespace

KrylovStats KrylovWorkspace::step(const SparseOperator& h, Eigen::VectorXcd& psi, double dt,
                                  const KrylovOptions& opt) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (psi.size() != n) throw std::invalid_argument("krylov step: state dimension does not match the operator");
  if (opt.m_start < 2 || opt.m_max < opt.m_start) throw std::invalid_argument("krylov step: need 2 <= m_start <= m_max");
  KrylovStats stats;
  if (dt == 0.0) return stats;

  const double psi_norm = psi.norm();
  if (!(psi_norm > 0.0)) throw std::invalid_argument("krylov step: zero state");
  const std::size_t m_cap = std::min<std::size_t>(opt.m_max, static_cast<std::size_t>(n));
  if (basis_.rows() != n || static_cast<std::size_t>(basis_.cols()) < m_cap + 1) {
    basis_.resize(n, static_cast<Eigen::Index>(m_cap + 1));
  }
  w_.resize(n);

  std::vector<double> alpha, beta;
  alpha.reserve(m_cap);
  beta.reserve(m_cap);
  basis_.col(0) = psi / psi_norm;

  std::size_t check_at = std::min(opt.m_start, m_cap);
  Eigen::VectorXcd y;
  for (std::size_t j = 0; j < m_cap; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    v_ = basis_.col(jj);
    h.multiply(v_, w_);
    const double a = std::real(basis_.col(jj).dot(w_));
    w_ -= a * basis_.col(jj);
    if (j > 0) w_ -= beta[j - 1] * basis_.col(jj - 1);
    double correction = 0.0;
    if (opt.full_reorthogonalization) {
      Eigen::VectorXcd c = basis_.leftCols(jj + 1).adjoint() * w_;
      w_.noalias() -= basis_.leftCols(jj + 1) * c;
      correction = std::real(c[jj]);
    } else {
      const cplx c = basis_.col(jj).dot(w_);
      w_ -= c * basis_.col(jj);
      correction = std::real(c);
    }
    alpha.push_back(a + correction);
    const double b = w_.norm();
    beta.push_back(b);

    const std::size_t m = j + 1;
    const double scale = std::max(1.0, std::abs(alpha.back()));
    const bool breakdown = b <= 1e-14 * scale;
    if (breakdown || m == static_cast<std::size_t>(n)) {
      y = tridiagonal_propagate(alpha, beta, m, dt);
      stats.dimension = m;
      stats.error_estimate = 0.0;
      break;
    }
    basis_.col(jj + 1) = w_ / b;
    if (m >= check_at) {
      y = tridiagonal_propagate(alpha, beta, m, dt);
      const double est = b * std::abs(y[jj]);
      stats.dimension = m;
      stats.error_estimate = est;
      if (est <= opt.tolerance) break;
      if (m == m_cap) {
        std::ostringstream msg;
        msg << "Krylov step did not reach tolerance " << opt.tolerance << " with m=" << m << " (estimate " << est
            << ", dt=" << dt << ")";
        throw KrylovError(msg.str(), est);
      }
      check_at = std::min(m + 2, m_cap);
    }
  }

  const auto m = static_cast<Eigen::Index>(stats.dimension);
  psi.noalias() = basis_.leftCols(m) * y.head(m);
  const double out_norm = psi.norm();
  stats.renormalization = std::abs(out_norm - 1.0);
  psi *= psi_norm / out_norm;
  return stats;
}

StateVector krylov_step(const SparseOperator& h, const StateVector& psi, double dt, std::size_t m) {
  if (!(psi.layout == h.layout())) throw std::invalid_argument("krylov step: layout mismatch");
  KrylovOptions opt;
  opt.m_start = m;
  opt.m_max = std::max(opt.m_max, m);
  KrylovWorkspace ws;
  StateVector out = psi;
  ws.step(h, out.amplitudes, dt, opt);
  return out;
}

}  // namespace annealsim
