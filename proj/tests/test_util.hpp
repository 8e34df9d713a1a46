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

#include "annealsim/sparse_operator.hpp"

namespace testing_util {

/// Wraps a dense matrix as a SparseOperator on the given layout.
inline annealsim::SparseOperator from_dense(const Eigen::MatrixXcd& m, const annealsim::SpaceLayout& layout) {
  Eigen::MatrixXd re = m.real();
  Eigen::MatrixXd im = m.imag();
  annealsim::SparseOperator::RealMatrix sre = re.sparseView();
  annealsim::SparseOperator::RealMatrix sim = im.sparseView();
  sre.makeCompressed();
  sim.makeCompressed();
  return annealsim::SparseOperator(layout, sre, sim);
}

}  // namespace testing_util
