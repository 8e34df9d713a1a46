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

#include <optional>
#include <stdexcept>
#include <vector>

#include "annealsim/sparse_operator.hpp"

namespace annealsim {

struct EigenPair {
  double value;
  Eigen::VectorXcd vector;
};

struct EigOptions {
  /// Converged when ||A x - theta x|| <= tolerance * ||A||_est.
  double tolerance = 1e-10;
  /// Krylov basis size before a thick restart; 0 picks max(2k + 20, 30).
  std::size_t max_basis = 0;
  std::size_t max_restarts = 2000;
  std::uint64_t seed = 0x5eed5eedULL;
  /// After convergence, search the orthogonal complement for missed copies of
  /// degenerate eigenvalues.
  bool resolve_degeneracy = true;
  /// Restrict the search to one eigenspace (+1 or -1) of the layout parity
  /// prod sigma^z (-1)^N. The operator must commute with it.
  std::optional<int> parity;
};

class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Lowest `k` eigenpairs of a Hermitian operator by thick-restart Lanczos with
/// full reorthogonalization. Values ascending, vectors orthonormal. Inside a
/// degenerate eigenspace the basis is arbitrary.
std::vector<EigenPair> extremal_eigs(const SparseOperator& op, std::size_t k, const EigOptions& options = {});

/// Lowest eigenpair.
EigenPair ground_state(const SparseOperator& op, const EigOptions& options = {});

}  // namespace annealsim
