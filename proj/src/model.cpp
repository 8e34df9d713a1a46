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

#include "annealsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "annealsim/eigensolver.hpp"
#include "annealsim/parallel.hpp"

namespace annealsim {

Boundary parse_boundary(const std::string& name) {
  if (name == "periodic") return Boundary::kPeriodic;
  if (name == "open") return Boundary::kOpen;
  throw std::invalid_argument("boundary must be 'periodic' or 'open', got '" + name + "'");
}

std::string boundary_name(Boundary b) { return b == Boundary::kPeriodic ? "periodic" : "open"; }

ModelKind parse_model_kind(const std::string& name) {
  if (name == "ising") return ModelKind::kIsing;
  if (name == "spin_boson" || name == "sb") return ModelKind::kSpinBoson;
  throw std::invalid_argument("model must be 'ising' or 'spin_boson', got '" + name + "'");
}

std::string model_kind_name(ModelKind k) { return k == ModelKind::kIsing ? "ising" : "spin_boson"; }

std::vector<std::pair<std::size_t, std::size_t>> chain_bonds(std::size_t length, Boundary boundary) {
  if (length == 0) throw std::invalid_argument("chain length must be >= 1");
  if (boundary == Boundary::kPeriodic && length < 3) {
    throw std::invalid_argument("periodic chains need at least 3 sites (L=" + std::to_string(length) +
                                " would double-count bonds)");
  }
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for (std::size_t i = 0; i + 1 < length; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::kPeriodic) bonds.emplace_back(length - 1, 0);
  return bonds;
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " contains a non-finite value");
  }
}

void check_eta(int eta) {
  if (eta != 1 && eta != -1) throw std::invalid_argument("eta must be +1 (ferro) or -1 (antiferro)");
}

void check_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0, 1], got " << s;
    throw std::out_of_range(msg.str());
  }
}

}  // namespace

SparseOperator build_ising(const IsingParams& p, const SpaceLayout& layout) {
  const std::size_t n = p.size();
  if (layout.n_modes != 0) throw std::invalid_argument("build_ising: layout must have no modes");
  if (layout.n_spins != n) {
    throw std::invalid_argument("build_ising: layout has " + std::to_string(layout.n_spins) +
                                " spins but parameters describe " + std::to_string(n));
  }
  if (static_cast<std::size_t>(p.J.rows()) != n || static_cast<std::size_t>(p.J.cols()) != n) {
    throw std::invalid_argument("build_ising: J must be L x L");
  }
  check_finite(p.h, "h");
  if (!p.J.allFinite()) throw std::invalid_argument("J contains a non-finite value");

  OperatorBuilder b(layout);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.h[i] != 0.0) b.add(0.5 * p.h[i], {Factor::sigma(Axis::kZ, i)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v == 0.0) continue;
      if (i == j) {
        b.add_identity(v);
      } else {
        b.add(v, {Factor::sigma(Axis::kX, i), Factor::sigma(Axis::kX, j)});
      }
    }
  }
  return b.build();
}

SparseOperator build_spin_boson(const SBParams& p, const SpaceLayout& layout) {
  const std::size_t ns = p.n_spins();
  const std::size_t nb = p.n_modes();
  if (static_cast<std::size_t>(p.g.rows()) != ns) throw std::invalid_argument("build_spin_boson: g must have L_s rows");
  if (layout.n_spins != ns || layout.n_modes != nb || layout.cutoff != p.cutoff) {
    throw std::invalid_argument("build_spin_boson: layout " + layout.describe() + " does not match parameters " +
                                p.layout().describe());
  }
  if (!(p.omega > 0.0)) throw std::invalid_argument("mode frequency omega must be > 0");
  check_finite(p.h, "h");
  if (!p.g.allFinite()) throw std::invalid_argument("g contains a non-finite value");

  OperatorBuilder b(layout);
  for (std::size_t i = 0; i < ns; ++i) {
    if (p.h[i] != 0.0) b.add(0.5 * p.h[i], {Factor::sigma(Axis::kZ, i)});
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t r = 0; r < nb; ++r) {
      const double g = p.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
      if (g == 0.0) continue;
      b.add(g, {Factor::sigma(Axis::kX, i), Factor::annihilate(r)});
      b.add(g, {Factor::sigma(Axis::kX, i), Factor::create(r)});
    }
  }
  for (std::size_t r = 0; r < nb; ++r) b.add(p.omega, {Factor::number(r)});
  return b.build();
}

IsingParams ising_schedule(double s, std::size_t length, int eta, double omega0, Boundary boundary) {
  check_unit_interval(s, "s");
  check_eta(eta);
  IsingParams p;
  p.boundary = boundary;
  p.h.assign(length, omega0 * (1.0 - s));
  const auto n = static_cast<Eigen::Index>(length);
  p.J = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : chain_bonds(length, boundary)) {
    p.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -eta * omega0 * s;
  }
  return p;
}

SBParams sb_schedule(double kappa, std::size_t length, int eta, double omega0, double omega, std::size_t cutoff,
                     Boundary boundary) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::out_of_range("kappa must be finite and >= 0");
  check_eta(eta);
  if (!(omega > 0.0)) throw std::invalid_argument("mode frequency omega must be > 0");
  chain_bonds(length, boundary);  // rejects periodic chains shorter than 3
  SBParams p;
  p.boundary = boundary;
  p.omega = omega;
  p.cutoff = cutoff;
  p.h.assign(length, omega0 * (1.0 - kappa));
  const auto n = static_cast<Eigen::Index>(length);
  p.g = Eigen::MatrixXd::Zero(n, n);
  const double g0 = std::sqrt(omega0 * omega * kappa);
  for (Eigen::Index r = 0; r < n; ++r) {
    p.g(r, r) += g0;
    Eigen::Index i = r + 1;
    if (i == n) {
      if (boundary == Boundary::kOpen) continue;
      i = 0;
    }
    p.g(i, r) += eta * g0;
  }
  return p;
}

RampTable::RampTable(std::vector<double> s, std::vector<double> kappa) : s_(std::move(s)), kappa_(std::move(kappa)) {
  if (s_.size() != kappa_.size()) throw std::invalid_argument("ramp table columns differ in length");
  if (s_.size() < 2) throw std::invalid_argument("ramp table needs at least two points");
  if (std::abs(s_.front()) > 1e-12 || std::abs(s_.back() - 1.0) > 1e-12) {
    throw std::invalid_argument("ramp table must span s = 0 .. 1");
  }
  if (std::abs(kappa_.front()) > 1e-12) throw std::invalid_argument("ramp table must have kappa(0) = 0");
  for (std::size_t i = 1; i < s_.size(); ++i) {
    if (!(s_[i] > s_[i - 1])) throw std::invalid_argument("ramp table s values must increase strictly");
    if (!(kappa_[i] >= kappa_[i - 1])) {
      std::ostringstream msg;
      msg << "ramp table kappa decreases between s=" << s_[i - 1] << " and s=" << s_[i];
      throw std::invalid_argument(msg.str());
    }
  }
  s_.front() = 0.0;
  s_.back() = 1.0;
  kappa_.front() = 0.0;
}

RampTable RampTable::linear() { return RampTable({0.0, 1.0}, {0.0, 1.0}); }

double RampTable::kappa(double s) const {
  if (s < 0.0 && s > -1e-12) s = 0.0;
  if (s > 1.0 && s < 1.0 + 1e-12) s = 1.0;
  check_unit_interval(s, "s");
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  if (it == s_.end()) return kappa_.back();
  const std::size_t hi = static_cast<std::size_t>(it - s_.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return kappa_[lo] + w * (kappa_[hi] - kappa_[lo]);
}

bool RampTable::is_linear() const {
  for (std::size_t i = 0; i < s_.size(); ++i) {
    if (std::abs(s_[i] - kappa_[i]) > 1e-15) return false;
  }
  return true;
}

void RampTable::write_csv(std::ostream& out) const {
  out << "s,kappa\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s_.size(); ++i) out << s_[i] << ',' << kappa_[i] << '\n';
}

RampTable RampTable::read_csv(std::istream& in) {
  std::vector<double> s, k;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("s,", 0) == 0) continue;
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(row >> a >> comma >> b) || comma != ',') {
      throw std::invalid_argument("ramp CSV line " + std::to_string(lineno) + " is not 's,kappa': " + line);
    }
    s.push_back(a);
    k.push_back(b);
  }
  return RampTable(std::move(s), std::move(k));
}

std::vector<double> uniform_grid(std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("grid needs at least one interval");
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = static_cast<double>(i) / static_cast<double>(intervals);
  return g;
}

SparseOperator bond_correlator_operator(const SpaceLayout& layout, Boundary boundary, Axis axis) {
  OperatorBuilder b(layout);
  for (auto [i, j] : chain_bonds(layout.n_spins, boundary)) b.add(1.0, {Factor::sigma(axis, i), Factor::sigma(axis, j)});
  return b.build();
}

namespace {

EigOptions sector_options(std::size_t length) {
  EigOptions opt;
  // The s = 0 ground state has every spin down and no bosons.
  opt.parity = (length % 2 == 0) ? 1 : -1;
  opt.tolerance = 1e-12;
  return opt;
}

}  // namespace

double ising_ground_correlator(double s, const CalibrationSettings& st) {
  IsingParams p = ising_schedule(s, st.length, st.eta, st.omega0, st.boundary);
  SpaceLayout layout = spin_layout(st.length);
  SparseOperator h = build_ising(p, layout);
  EigenPair gs = ground_state(h, sector_options(st.length));
  return bond_correlator_operator(layout, st.boundary).expectation(gs.vector);
}

double sb_ground_correlator(double kappa, const CalibrationSettings& st) {
  SBParams p = sb_schedule(kappa, st.length, st.eta, st.omega0, st.omega, st.cutoff, st.boundary);
  SpaceLayout layout = p.layout();
  SparseOperator h = build_spin_boson(p, layout);
  EigenPair gs = ground_state(h, sector_options(st.length));
  return bond_correlator_operator(layout, st.boundary).expectation(gs.vector);
}

namespace {

constexpr std::size_t kCoarse = 20;

// eta * C_sb on a coarse kappa grid: brackets and the monotonicity check.
struct CoarseCurve {
  std::vector<double> kappa;
  std::vector<double> value;
  std::vector<std::pair<double, double>> curve;
};

CoarseCurve coarse_curve(const CalibrationSettings& st) {
  const double sign = static_cast<double>(st.eta);
  CoarseCurve c;
  c.kappa = uniform_grid(kCoarse);
  c.value.resize(c.kappa.size());
  parallel_for(c.kappa.size(), st.workers,
               [&](std::size_t j) { c.value[j] = sign * sb_ground_correlator(c.kappa[j], st); });
  for (std::size_t j = 0; j < c.kappa.size(); ++j) c.curve.emplace_back(c.kappa[j], sign * c.value[j]);
  for (std::size_t j = 1; j < c.kappa.size(); ++j) {
    if (c.value[j] < c.value[j - 1] - 1e-9) {
      std::ostringstream msg;
      msg << "spin-boson correlator is not monotone in kappa near kappa=" << c.kappa[j];
      throw CalibrationError(msg.str(), c.curve);
    }
  }
  return c;
}

PointCalibration solve_point(double s, const CalibrationSettings& st, const CoarseCurve& coarse) {
  PointCalibration out;
  if (s == 0.0) return out;
  if (s == 1.0) {
    out.kappa = 1.0;
    return out;
  }
  const double sign = static_cast<double>(st.eta);
  const double target = sign * ising_ground_correlator(s, st);
  auto f = [&](double k) { return sign * sb_ground_correlator(k, st); };
  const auto& cf = coarse.value;
  const auto& ck = coarse.kappa;
  if (target < cf.front() - st.tolerance || target > cf.back() + st.tolerance) {
    std::ostringstream msg;
    msg << "target correlator " << sign * target << " at s=" << s << " lies outside the spin-boson range";
    throw CalibrationError(msg.str(), coarse.curve);
  }
  std::size_t j = 0;
  while (j + 1 < kCoarse && cf[j + 1] < target) ++j;
  double lo = ck[j], hi = ck[j + 1];
  double k = 0.5 * (lo + hi);
  if (std::abs(cf[j] - target) <= st.tolerance) {
    k = lo;
  } else if (std::abs(cf[j + 1] - target) <= st.tolerance) {
    k = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      k = 0.5 * (lo + hi);
      const double fk = f(k);
      if (std::abs(fk - target) <= st.tolerance || hi - lo < 1e-14) break;
      if (fk < target) {
        lo = k;
      } else {
        hi = k;
      }
    }
  }
  out.kappa = k;
  CalibrationSettings lower = st;
  lower.cutoff = st.cutoff - 1;
  const double shift = std::abs(sb_ground_correlator(k, st) - sb_ground_correlator(k, lower));
  if (shift > st.cutoff_tolerance) {
    std::ostringstream msg;
    msg << "correlator not converged in the boson cutoff at s=" << s << ": cutoff " << st.cutoff << " vs "
        << lower.cutoff << " differ by " << shift;
    out.warning = msg.str();
  }
  return out;
}

}  // namespace

PointCalibration calibrate_point(double s, const CalibrationSettings& st) {
  check_eta(st.eta);
  check_unit_interval(s, "calibration point");
  if (st.cutoff < 2) throw std::invalid_argument("calibration needs cutoff >= 2 for the convergence check");
  if (s == 0.0 || s == 1.0) return solve_point(s, st, {});
  return solve_point(s, st, coarse_curve(st));
}

Calibration calibrate_kappa(const std::vector<double>& s_grid, const CalibrationSettings& st) {
  check_eta(st.eta);
  if (st.cutoff < 2) throw std::invalid_argument("calibration needs cutoff >= 2 for the convergence check");
  if (s_grid.size() < 2) throw std::invalid_argument("calibration grid needs at least two points");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    check_unit_interval(s_grid[i], "calibration grid point");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw std::invalid_argument("calibration grid must increase strictly");
  }
  if (s_grid.front() != 0.0 || s_grid.back() != 1.0) throw std::invalid_argument("calibration grid must span 0 .. 1");
  const CoarseCurve coarse = coarse_curve(st);

  std::vector<PointCalibration> points(s_grid.size());
  parallel_for(s_grid.size(), st.workers, [&](std::size_t idx) { points[idx] = solve_point(s_grid[idx], st, coarse); });

  Calibration out;
  std::vector<double> kappa;
  for (auto& p : points) {
    kappa.push_back(p.kappa);
    if (!p.warning.empty()) out.warnings.push_back(std::move(p.warning));
  }
  // Bisection noise can break monotonicity by a hair; repair within tolerance.
  for (std::size_t i = 1; i < kappa.size(); ++i) {
    if (kappa[i] < kappa[i - 1]) {
      if (kappa[i - 1] - kappa[i] > 1e-6) {
        std::ostringstream msg;
        msg << "calibrated ramp is not monotone between s=" << s_grid[i - 1] << " and s=" << s_grid[i];
        throw CalibrationError(msg.str(), coarse.curve);
      }
      kappa[i] = kappa[i - 1];
    }
  }
  out.table = RampTable(s_grid, kappa);
  return out;
}

std::vector<SparseOperator> noise_coupling_operators(Axis axis, const SpaceLayout& layout, NoiseCoupling coupling) {
  if (axis == Axis::kY) throw std::invalid_argument("noise axis must be x or z");
  const double c = coupling_scale(coupling);
  std::vector<SparseOperator> ops;
  ops.reserve(layout.n_spins);
  for (std::size_t i = 0; i < layout.n_spins; ++i) {
    OperatorBuilder b(layout);
    b.add(c, {Factor::sigma(axis, i)});
    ops.push_back(b.build());
  }
  return ops;
}

SpaceLayout ChainModel::layout() const {
  if (kind == ModelKind::kIsing) return spin_layout(length);
  return {length, length, cutoff};
}

void ChainModel::validate() const {
  check_eta(eta);
  if (length == 0) throw std::invalid_argument("chain length must be >= 1");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  if (kind == ModelKind::kSpinBoson && cutoff == 0) throw std::invalid_argument("spin-boson model needs cutoff >= 1");
  chain_bonds(length, boundary);
  validate_layout(layout());
}

namespace {

std::vector<SparseOperator> structural_terms(const ChainModel& m) {
  m.validate();
  const SpaceLayout layout = m.layout();
  std::vector<SparseOperator> terms;
  OperatorBuilder field(layout);
  for (std::size_t i = 0; i < m.length; ++i) field.add(0.5, {Factor::sigma(Axis::kZ, i)});
  terms.push_back(field.build());
  if (m.kind == ModelKind::kIsing) {
    terms.push_back(bond_correlator_operator(layout, m.boundary, Axis::kX));
    return terms;
  }
  // Unit-kappa coupling pattern of sb_schedule, scaled by sqrt(omega0 omega kappa).
  SBParams unit = sb_schedule(1.0, m.length, m.eta, 1.0, 1.0, m.cutoff, m.boundary);
  OperatorBuilder coupling(layout);
  for (std::size_t i = 0; i < m.length; ++i) {
    for (std::size_t r = 0; r < m.length; ++r) {
      const double g = unit.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
      if (g == 0.0) continue;
      coupling.add(g, {Factor::sigma(Axis::kX, i), Factor::annihilate(r)});
      coupling.add(g, {Factor::sigma(Axis::kX, i), Factor::create(r)});
    }
  }
  terms.push_back(coupling.build());
  OperatorBuilder number(layout);
  for (std::size_t r = 0; r < m.length; ++r) number.add(1.0, {Factor::number(r)});
  terms.push_back(number.build());
  return terms;
}

std::vector<SparseOperator> join(std::vector<SparseOperator> a, std::vector<SparseOperator> b) {
  for (auto& op : b) a.push_back(std::move(op));
  return a;
}

}  // namespace

ScheduledHamiltonian::ScheduledHamiltonian(const ChainModel& model, std::vector<SparseOperator> noise_ops)
    : model_(model),
      n_structural_(model.kind == ModelKind::kIsing ? 2 : 3),
      n_noise_(noise_ops.size()),
      combo_(join(structural_terms(model), std::move(noise_ops))) {}

void ScheduledHamiltonian::assemble_into(double x, std::span<const double> noise, SparseOperator& target) const {
  if (noise.size() != n_noise_) throw std::invalid_argument("noise coefficient count mismatch");
  std::vector<double> c(n_structural_ + n_noise_);
  const double w0 = model_.omega0;
  if (model_.kind == ModelKind::kIsing) {
    check_unit_interval(x, "s");
    c[0] = w0 * (1.0 - x);
    c[1] = -model_.eta * w0 * x;
  } else {
    if (!(x >= 0.0)) throw std::out_of_range("kappa must be >= 0");
    c[0] = w0 * (1.0 - x);
    c[1] = std::sqrt(w0 * model_.omega * x);
    c[2] = model_.omega;
  }
  std::copy(noise.begin(), noise.end(), c.begin() + static_cast<std::ptrdiff_t>(n_structural_));
  combo_.combine_into(c, target);
}

SparseOperator ScheduledHamiltonian::at(double x) const {
  SparseOperator out = make_target();
  std::vector<double> zeros(n_noise_, 0.0);
  assemble_into(x, zeros, out);
  return out;
}

IsingParams target_ising(const ChainModel& model, double s) {
  return ising_schedule(s, model.length, model.eta, model.omega0, model.boundary);
}

double AnnealSpec::parameter(double s) const {
  return model.kind == ModelKind::kIsing ? s : ramp.kappa(s);
}

std::size_t AnnealSpec::steps() const {
  const double ratio = total_time / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

void AnnealSpec::validate() const {
  model.validate();
  if (!(total_time > 0.0)) throw std::invalid_argument("total annealing time must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("noise strength must be >= 0");
  if (noise_axis == Axis::kY) throw std::invalid_argument("noise axis must be x or z");
}

}  // namespace annealsim
