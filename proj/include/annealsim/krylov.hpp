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

#include <stdexcept>

#include "annealsim/sparse_operator.hpp"

namespace annealsim {

struct KrylovOptions {
  std::size_t m_start = 12;
  std::size_t m_max = 64;
  /// Target for the a-posteriori error estimate of one step.
  double tolerance = 1e-10;
  /// Orthogonalize every new vector against the whole basis. Off by default:
  /// short-time Lanczos exponentials stay accurate with local
  /// orthogonalization, and the full pass costs O(m^2 n).
  bool full_reorthogonalization = false;
};

struct KrylovStats {
  std::size_t dimension = 0;
  double error_estimate = 0.0;
  /// | ||psi'|| - 1 | before renormalization.
  double renormalization = 0.0;
};

class KrylovError : public std::runtime_error {
 public:
  KrylovError(const std::string& what, double estimate) : std::runtime_error(what), estimate_(estimate) {}
  double error_estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Reusable buffers for repeated steps on one dimension. Not thread-safe;
/// give each trajectory its own workspace.
class KrylovWorkspace {
 public:
  KrylovWorkspace() = default;

  /// psi <- exp(-i H dt) psi by Lanczos with an adaptively grown basis.
  /// psi must be normalized; the result is renormalized.
  KrylovStats step(const SparseOperator& h, Eigen::VectorXcd& psi, double dt, const KrylovOptions& options = {});

 private:
  Eigen::MatrixXcd basis_;
  Eigen::VectorXcd v_;
  Eigen::VectorXcd w_;
};

/// Convenience wrapper: returns exp(-i H dt) psi with a starting Krylov
/// dimension m (grown adaptively up to the default ceiling).
StateVector krylov_step(const SparseOperator& h, const StateVector& psi, double dt, std::size_t m = 12);

}  // namespace annealsim
