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


#include "annealsim/polaron.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "annealsim/eigensolver.hpp"
#include "annealsim/observables.hpp"

namespace annealsim {

double laguerre(std::size_t k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (std::size_t j = 1; j < k; ++j) {
    const double jd = static_cast<double>(j);
    const double next = ((2.0 * jd + 1.0 - x) * cur - jd * prev) / (jd + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

EffectiveParams effective_params(const BosonConfig& n, const std::vector<double>& h, const Eigen::MatrixXd& phi,
                                 double omega) {
  const auto ns = static_cast<Eigen::Index>(h.size());
  if (phi.rows() != ns) throw std::invalid_argument("effective_params: phi must have one row per spin");
  if (n.size() != static_cast<std::size_t>(phi.cols())) {
    throw std::invalid_argument("effective_params: boson configuration needs one occupation per mode");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("effective_params: omega must be > 0");
  EffectiveParams out;
  out.h.resize(h.size());
  for (Eigen::Index i = 0; i < ns; ++i) {
    double value = h[static_cast<std::size_t>(i)] * std::exp(-2.0 * phi.row(i).squaredNorm());
    for (Eigen::Index r = 0; r < phi.cols(); ++r) {
      value *= laguerre(n[static_cast<std::size_t>(r)], 4.0 * phi(i, r) * phi(i, r));
    }
    out.h[static_cast<std::size_t>(i)] = value;
  }
  out.J = omega * phi * phi.transpose();
  out.J.diagonal().setZero();
  return out;
}

EffectiveParams effective_params(const BosonConfig& n, const SBParams& p) {
  return effective_params(n, p.h, p.phi(), p.omega);
}

IsingParams effective_ising(const EffectiveParams& e, Boundary boundary) {
  IsingParams out;
  out.h = e.h;
  out.boundary = boundary;
  const auto ns = static_cast<Eigen::Index>(e.h.size());
  out.J = Eigen::MatrixXd::Zero(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = i + 1; j < ns; ++j) out.J(i, j) = -(e.J(i, j) + e.J(j, i));
  }
  return out;
}

std::vector<double> momentum_field(double q, const std::vector<double>& h0, const Eigen::MatrixXd& phi) {
  const auto L = static_cast<Eigen::Index>(h0.size());
  if (L == 0 || phi.rows() != L || phi.cols() != L) {
    throw std::invalid_argument("momentum_field: phi must be L x L with L = number of fields");
  }
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index r = 0; r < L; ++r) {
      if (std::abs(phi(i, r) - phi((i + 1) % L, (r + 1) % L)) > 1e-12) {
        throw std::invalid_argument("momentum_field: phi is not translation invariant (periodic chain required)");
      }
    }
  }
  std::vector<double> out(h0.size());
  for (Eigen::Index i = 0; i < L; ++i) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < L; ++r) {
      sum += laguerre(1, 4.0 * phi(i, r) * phi(i, r)) + 4.0 * std::cos(q) * phi(i, r) * phi(i, (r + 1) % L);
    }
    out[static_cast<std::size_t>(i)] = h0[static_cast<std::size_t>(i)] / static_cast<double>(L) * sum;
  }
  return out;
}

double hybridization_estimate(double s, double omega0, double omega) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("hybridization_estimate: s must lie in [0, 1]");
  if (!(omega > 0.0)) throw std::invalid_argument("hybridization_estimate: omega must be > 0");
  return std::sqrt(s * omega0 / omega) * (1.0 - s) * omega0;
}

SparseOperator polaron_number_operator(const SpaceLayout& layout, const Eigen::MatrixXd& phi) {
  if (phi.rows() != static_cast<Eigen::Index>(layout.n_spins) || phi.cols() != static_cast<Eigen::Index>(layout.n_modes)) {
    throw std::invalid_argument("polaron_number_operator: phi must be spins x modes");
  }
  OperatorBuilder b(layout);
  for (std::size_t r = 0; r < layout.n_modes; ++r) {
    const auto rr = static_cast<Eigen::Index>(r);
    b.add(1.0, {Factor::number(r)});
    for (std::size_t i = 0; i < layout.n_spins; ++i) {
      const double p = phi(static_cast<Eigen::Index>(i), rr);
      if (p == 0.0) continue;
      b.add(p, {Factor::sigma(Axis::kX, i), Factor::annihilate(r)});
      b.add(p, {Factor::sigma(Axis::kX, i), Factor::create(r)});
      for (std::size_t j = 0; j < layout.n_spins; ++j) {
        const double q = phi(static_cast<Eigen::Index>(j), rr);
        if (q == 0.0) continue;
        if (i == j) {
          b.add_identity(p * q);
        } else {
          b.add(p * q, {Factor::sigma(Axis::kX, i), Factor::sigma(Axis::kX, j)});
        }
      }
    }
  }
  return b.build();
}

std::vector<MatrixElementRow> noise_matrix_elements(const SparseOperator& h, std::size_t site, std::size_t k,
                                                    NoiseCoupling coupling, const std::optional<Eigen::MatrixXd>& phi) {
  const SpaceLayout& layout = h.layout();
  if (site >= layout.n_spins) throw std::out_of_range("noise_matrix_elements: site out of range");
  if (k == 0 || k + 1 > h.dim()) throw std::invalid_argument("noise_matrix_elements: need 1 <= k < dim");
  const auto eigs = extremal_eigs(h, k + 1);
  const double c = coupling_scale(coupling);
  const SparseOperator sx = spin_operator(site, Axis::kX, layout) * c;
  const SparseOperator sz = spin_operator(site, Axis::kZ, layout) * c;
  std::optional<SparseOperator> polaron;
  if (phi) polaron = polaron_number_operator(layout, *phi);
  Eigen::VectorXcd gx, gz;
  sx.multiply(eigs.front().vector, gx);
  sz.multiply(eigs.front().vector, gz);
  std::vector<MatrixElementRow> rows;
  for (std::size_t e = 1; e < eigs.size(); ++e) {
    MatrixElementRow row;
    row.index = e;
    row.energy = eigs[e].value - eigs.front().value;
    row.boson_number = layout.n_modes > 0 ? boson_number(StateVector{layout, eigs[e].vector}) : 0.0;
    row.polaron_number =
        polaron ? polaron->expectation(eigs[e].vector) : std::numeric_limits<double>::quiet_NaN();
    row.mx = std::abs(eigs[e].vector.dot(gx));
    row.mz = std::abs(eigs[e].vector.dot(gz));
    rows.push_back(row);
  }
  return rows;
}

double boson_excited_weight(const std::vector<MatrixElementRow>& rows, Axis axis, double threshold,
                            BosonCharacter character) {
  if (axis == Axis::kY) throw std::invalid_argument("boson_excited_weight: axis must be x or z");
  double total = 0.0;
  for (const auto& r : rows) {
    const double n = character == BosonCharacter::kLab ? r.boson_number : r.polaron_number;
    if (std::isnan(n)) throw std::invalid_argument("boson_excited_weight: polaron numbers were not computed");
    if (n <= threshold) continue;
    const double m = axis == Axis::kX ? r.mx : r.mz;
    total += m * m;
  }
  return total;
}

void write_matrix_elements_csv(std::ostream& out, const std::vector<MatrixElementRow>& rows) {
  const auto old = out.precision(17);
  out << "index,energy,boson_number,polaron_number,abs_mx,abs_mz\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.energy << ',' << r.boson_number << ',' << r.polaron_number << ',' << r.mx << ','
        << r.mz << '\n';
  }
  out.precision(old);
}

}  // namespace annealsim
