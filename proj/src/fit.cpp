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


#include "annealsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "annealsim/eigensolver.hpp"
#include "annealsim/parallel.hpp"

namespace annealsim {

double gap(const SparseOperator& h, const GapOptions& options) {
  EigOptions eo = options.eig;
  eo.parity = options.parity;
  if (!options.above_degenerate) {
    auto e = extremal_eigs(h, 2, eo);
    return e[1].value - e[0].value;
  }
  std::size_t k = 2;
  for (;;) {
    auto e = extremal_eigs(h, k, eo);
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (e[i].value - e[0].value > options.degeneracy_tol) return e[i].value - e[0].value;
    }
    if (k >= h.dim()) return 0.0;
    k = std::min(2 * k, h.dim());
  }
}

SparseOperator chain_hamiltonian(const ChainModel& model, double x) {
  model.validate();
  if (model.kind == ModelKind::kIsing) {
    return build_ising(ising_schedule(x, model.length, model.eta, model.omega0, model.boundary), model.layout());
  }
  return build_spin_boson(
      sb_schedule(x, model.length, model.eta, model.omega0, model.omega, model.cutoff, model.boundary),
      model.layout());
}

GapScan minimum_gap_scan(const ChainModel& model, const GapScanOptions& opt) {
  model.validate();
  if (!(opt.coarse_step > 0.0 && opt.fine_step > 0.0 && opt.fine_step <= opt.coarse_step)) {
    throw std::invalid_argument("minimum_gap_scan: need 0 < fine_step <= coarse_step");
  }
  if (!(opt.x_min >= 0.0 && opt.x_max <= 1.0 && opt.x_max - opt.x_min >= opt.coarse_step)) {
    throw std::invalid_argument("minimum_gap_scan: need 0 <= x_min, x_max <= 1 and a range of at least one step");
  }
  GapOptions go;
  if (opt.sector_gap) {
    go.parity = (model.length % 2 == 0) ? 1 : -1;
    // The sector ground state is unique and only the value of E1 matters.
    go.eig.resolve_degeneracy = false;
  } else {
    go.above_degenerate = true;
  }
  auto eval = [&](double x) { return gap(chain_hamiltonian(model, x), go); };

  GapScan scan;
  scan.kind = model.kind;
  scan.length = model.length;
  scan.cutoff = model.kind == ModelKind::kIsing ? 0 : model.cutoff;

  auto grid_points = [](double lo, double hi, double step) {
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
    for (std::size_t i = 0; i <= n; ++i) g.push_back(std::min(hi, lo + static_cast<double>(i) * step));
    return g;
  };
  auto evaluate = [&](const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), opt.workers, [&](std::size_t i) { out[i] = eval(xs[i]); });
    return out;
  };

  std::vector<double> xs = grid_points(opt.x_min, opt.x_max, opt.coarse_step);
  std::vector<double> gs = evaluate(xs);
  auto best = static_cast<std::size_t>(std::min_element(gs.begin(), gs.end()) - gs.begin());
  const double lo = std::max(opt.x_min, xs[best] - opt.fine_halfwidth);
  const double hi = std::min(opt.x_max, xs[best] + opt.fine_halfwidth);
  std::vector<double> fine;
  for (double x : grid_points(lo, hi, opt.fine_step)) {
    bool known = false;
    for (double y : xs) known = known || std::abs(x - y) < 1e-12;
    if (!known) fine.push_back(x);
  }
  std::vector<double> fine_g = evaluate(fine);
  xs.insert(xs.end(), fine.begin(), fine.end());
  gs.insert(gs.end(), fine_g.begin(), fine_g.end());
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  for (std::size_t i : order) {
    scan.grid.push_back(xs[i]);
    scan.gaps.push_back(gs[i]);
  }
  best = static_cast<std::size_t>(std::min_element(scan.gaps.begin(), scan.gaps.end()) - scan.gaps.begin());
  scan.minimum = scan.gaps[best];
  scan.argmin = scan.grid[best];

  // Golden section inside the neighbouring fine cells.
  double a = std::max(opt.x_min, scan.argmin - opt.fine_step);
  double b = std::min(opt.x_max, scan.argmin + opt.fine_step);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > opt.golden_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = eval(d);
    }
  }
  const double xm = fc < fd ? c : d;
  const double fm = std::min(fc, fd);
  if (fm < scan.minimum) {
    scan.minimum = fm;
    scan.argmin = xm;
  }
  return scan;
}

double FitResult::value(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("fit has no parameter '" + name + "'");
  return values[static_cast<std::size_t>(it - names.begin())];
}

double FitResult::error(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("fit has no parameter '" + name + "'");
  return errors[static_cast<std::size_t>(it - names.begin())];
}

FitResult fit_gap_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw FitError("gap scaling fit needs at least two points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = points[static_cast<std::size_t>(i)].first;
    if (!(L > 0.0)) throw FitError("gap scaling fit needs positive sizes");
    A(i, 0) = 1.0 / L;
    A(i, 1) = 1.0 / (L * L);
    y[i] = points[static_cast<std::size_t>(i)].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 2) throw FitError("gap scaling fit is rank deficient (need two distinct sizes)");
  const Eigen::VectorXd x = qr.solve(y);
  FitResult out;
  out.names = {"a", "b"};
  out.values = {x[0], x[1]};
  out.points = points.size();
  out.residual_norm = (A * x - y).norm();
  out.converged = true;
  const Eigen::MatrixXd cov_unit = (A.transpose() * A).inverse();
  if (n > 2) {
    const double s2 = out.residual_norm * out.residual_norm / static_cast<double>(n - 2);
    out.errors = {std::sqrt(s2 * cov_unit(0, 0)), std::sqrt(s2 * cov_unit(1, 1))};
  } else {
    out.errors = {0.0, 0.0};
    out.message = "exact interpolation through two points";
  }
  return out;
}

double decay_law(double t, double a, double tq, double p, std::size_t length) {
  const double x = t > 0.0 ? std::pow(t / tq, p) : 0.0;
  return std::pow(0.5 * (1.0 + a * std::exp(-x)), static_cast<double>(length));
}

namespace {

// Parameters a, ln T, ln p (or ln T, ln p when a is fixed).
struct DecayProblem {
  const std::vector<double>& t;
  const std::vector<double>& y;
  const std::vector<double>& w;
  double L;
  std::optional<double> fix_a;

  std::size_t n_params() const { return fix_a ? 2 : 3; }

  void unpack(const Eigen::VectorXd& q, double& a, double& tq, double& p) const {
    std::size_t k = 0;
    a = fix_a ? *fix_a : q[static_cast<Eigen::Index>(k++)];
    tq = std::exp(q[static_cast<Eigen::Index>(k++)]);
    p = std::exp(q[static_cast<Eigen::Index>(k)]);
  }

  // Weighted residuals sqrt(w)(model - y) and their Jacobian in q.
  double evaluate(const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) const {
    double a, tq, p;
    unpack(q, a, tq, p);
    const auto n = static_cast<Eigen::Index>(t.size());
    r.resize(n);
    if (J) J->resize(n, static_cast<Eigen::Index>(n_params()));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
      const double x = ti > 0.0 ? std::pow(ti / tq, p) : 0.0;
      const double E = std::exp(-x);
      const double B = 0.5 * (1.0 + a * E);
      const double model = std::pow(B, L);
      r[i] = sw * (model - y[static_cast<std::size_t>(i)]);
      if (!J) continue;
      const double dB = L * std::pow(B, L - 1.0);
      const double dydx = -dB * 0.5 * a * E;
      const double lnratio = ti > 0.0 ? std::log(ti / tq) : 0.0;
      Eigen::Index c = 0;
      if (!fix_a) (*J)(i, c++) = sw * dB * 0.5 * E;
      (*J)(i, c++) = sw * dydx * (-p * x);
      (*J)(i, c) = sw * dydx * (p * x * lnratio);
    }
    return r.squaredNorm();
  }
};

struct LmOutcome {
  Eigen::VectorXd q;
  double cost = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t iterations = 0;
};

LmOutcome levenberg_marquardt(const DecayProblem& prob, Eigen::VectorXd q, const DecayFitOptions& opt) {
  auto project = [&](Eigen::VectorXd& v) {
    if (!prob.fix_a) v[0] = std::clamp(v[0], 1e-9, 1.0);
    for (Eigen::Index k = prob.fix_a ? 0 : 1; k < v.size(); ++k) v[k] = std::clamp(v[k], -30.0, 30.0);
  };
  project(q);
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  double cost = prob.evaluate(q, r, &J);
  double lambda = 1e-3;
  LmOutcome out;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    // Parameters pinned at a bound with the gradient pushing outward are held.
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      const bool is_a = !prob.fix_a && k == 0;
      const double lo = is_a ? 1e-9 : -30.0, hi = is_a ? 1.0 : 30.0;
      if ((q[k] >= hi && g[k] < 0.0) || (q[k] <= lo && g[k] > 0.0)) {
        JtJ.row(k).setZero();
        JtJ.col(k).setZero();
        JtJ(k, k) = 1.0;
        g[k] = 0.0;
      }
    }
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::MatrixXd M = JtJ;
      for (Eigen::Index k = 0; k < M.rows(); ++k) M(k, k) += lambda * std::max(JtJ(k, k), 1e-30);
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      Eigen::VectorXd trial = q + step;
      project(trial);
      Eigen::VectorXd rt;
      const double ct = prob.evaluate(trial, rt, nullptr);
      if (std::isfinite(ct) && ct <= cost) {
        const double rel = (cost - ct) / std::max(cost, 1e-300);
        const double move = (trial - q).norm();
        q = trial;
        cost = prob.evaluate(q, r, &J);
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel < opt.tolerance && move < 1e-10 * (1.0 + q.norm())) {
          out.converged = true;
        }
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // No descent direction left: a (local) minimum to working precision.
      out.converged = true;
    }
    if (out.converged) break;
  }
  out.q = q;
  out.cost = cost;
  return out;
}

}  // namespace

FitResult fit_decay(const std::vector<double>& times, const std::vector<double>& values, std::size_t length,
                    const DecayFitOptions& opt) {
  if (times.size() != values.size()) throw FitError("fit_decay: times and values differ in length");
  if (times.size() < 6) throw FitError("fit_decay: need at least 6 points");
  if (length == 0) throw FitError("fit_decay: length must be >= 1");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw FitError("fit_decay: times must be finite and >= 0");
    if (!(values[i] > 0.0 && values[i] <= 1.0 + 1e-12)) throw FitError("fit_decay: values must lie in (0, 1]");
  }
  if (opt.fix_a && !(*opt.fix_a > 0.0 && *opt.fix_a <= 1.0)) throw FitError("fit_decay: fixed a must be in (0, 1]");
  std::vector<double> w(times.size(), 1.0);
  if (!opt.sigma.empty()) {
    if (opt.sigma.size() != times.size()) throw FitError("fit_decay: sigma has the wrong length");
    std::vector<double> positive;
    for (double s : opt.sigma)
      if (s > 0.0 && std::isfinite(s)) positive.push_back(s);
    if (positive.empty()) throw FitError("fit_decay: no positive standard errors");
    std::sort(positive.begin(), positive.end());
    const double floor = positive[positive.size() / 2] * 1e-3;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double s = (opt.sigma[i] > floor && std::isfinite(opt.sigma[i])) ? opt.sigma[i] : floor;
      w[i] = 1.0 / (s * s);
    }
  }
  const double span = *std::max_element(values.begin(), values.end()) - *std::min_element(values.begin(), values.end());
  if (span < 1e-12) throw FitError("fit_decay: degenerate fit, the data do not decay (flat residual surface)");

  DecayProblem prob{times, values, w, static_cast<double>(length), opt.fix_a};
  const std::size_t first = static_cast<std::size_t>(std::min_element(times.begin(), times.end()) - times.begin());
  const double a0 = std::clamp(2.0 * std::pow(values[first], 1.0 / static_cast<double>(length)) - 1.0, 0.05, 1.0);

  LmOutcome best;
  std::ostringstream diag;
  for (double t0 : opt.tq_starts) {
    for (double p0 : opt.p_starts) {
      Eigen::VectorXd q(static_cast<Eigen::Index>(prob.n_params()));
      Eigen::Index k = 0;
      if (!opt.fix_a) q[k++] = a0;
      q[k++] = std::log(t0);
      q[k] = std::log(p0);
      LmOutcome o = levenberg_marquardt(prob, q, opt);
      diag << " start(Tq=" << t0 << ",p=" << p0 << ") cost=" << o.cost << (o.converged ? "" : " unconverged") << ";";
      if (o.converged && o.cost < best.cost) best = o;
    }
  }
  if (!best.converged) throw FitError("fit_decay: no start converged:" + diag.str());

  double a, tq, p;
  prob.unpack(best.q, a, tq, p);
  // Jacobian in the natural parameters for the error estimate.
  const auto n = static_cast<Eigen::Index>(times.size());
  const auto np = static_cast<Eigen::Index>(prob.n_params());
  Eigen::MatrixXd Jn(n, np);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = times[static_cast<std::size_t>(i)];
    const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
    const double x = ti > 0.0 ? std::pow(ti / tq, p) : 0.0;
    const double E = std::exp(-x);
    const double B = 0.5 * (1.0 + a * E);
    const double dB = static_cast<double>(length) * std::pow(B, static_cast<double>(length) - 1.0);
    const double dydx = -dB * 0.5 * a * E;
    Eigen::Index c = 0;
    if (!opt.fix_a) Jn(i, c++) = sw * dB * 0.5 * E;
    Jn(i, c++) = sw * dydx * (-p * x / tq);
    Jn(i, c) = sw * dydx * (ti > 0.0 ? x * std::log(ti / tq) : 0.0);
  }
  const Eigen::MatrixXd JtJ = Jn.transpose() * Jn;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(JtJ);
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[np - 1];
  if (!(smax > 0.0) || smin < 1e-13 * smax) {
    throw FitError("fit_decay: degenerate fit, flat residual surface at T_q=" + std::to_string(tq) +
                   ", p=" + std::to_string(p));
  }
  FitResult out;
  out.names = opt.fix_a ? std::vector<std::string>{"Tq", "p"} : std::vector<std::string>{"a", "Tq", "p"};
  out.values = opt.fix_a ? std::vector<double>{tq, p} : std::vector<double>{a, tq, p};
  out.points = times.size();
  out.iterations = best.iterations;
  out.residual_norm = std::sqrt(best.cost);
  out.converged = true;
  const double dof = static_cast<double>(times.size()) - static_cast<double>(np);
  const double s2 = dof > 0 ? best.cost / dof : 0.0;
  const Eigen::MatrixXd cov = JtJ.inverse() * s2;
  for (Eigen::Index k = 0; k < np; ++k) out.errors.push_back(std::sqrt(std::max(0.0, cov(k, k))));
  if (!opt.fix_a && a >= 1.0 - 1e-12) out.message = "a at its upper bound 1";
  return out;
}

FitResult fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y,
                                const std::vector<double>& sigma) {
  const std::size_t n = t.size();
  if (y.size() != n) throw std::invalid_argument("fit_exponential_decay: times and values differ in length");
  if (!sigma.empty() && sigma.size() != n) throw std::invalid_argument("fit_exponential_decay: sigma length");
  if (n < 2) throw FitError("fit_exponential_decay: need at least 2 points");
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw FitError("fit_exponential_decay: non-finite data");
    if (!sigma.empty()) {
      if (!(sigma[i] > 0.0)) throw std::invalid_argument("fit_exponential_decay: sigma must be > 0");
      w[i] = 1.0 / (sigma[i] * sigma[i]);
    }
  }
  const double span = *std::max_element(t.begin(), t.end()) - *std::min_element(t.begin(), t.end());
  if (!(span > 0.0)) throw FitError("fit_exponential_decay: times must span an interval");
  auto chi2 = [&](double u) {
    const double T = std::exp(u);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - std::exp(-t[i] / T);
      s += w[i] * r * r;
    }
    return s;
  };
  // Log-spaced scan, then golden section around the best bracket.
  const double lo = std::log(1e-3 * span), hi = std::log(1e4 * span);
  constexpr int kGrid = 400;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kGrid; ++k) {
    const double v = chi2(lo + (hi - lo) * k / kGrid);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  FitResult fit;
  fit.names = {"T"};
  fit.points = n;
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = chi2(c), fd = chi2(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = chi2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = chi2(d);
    }
    ++fit.iterations;
  }
  const double u = 0.5 * (a + b);
  const double T = std::exp(u);
  double info = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = std::exp(-t[i] / T) * t[i] / (T * T);
    info += w[i] * dy * dy;
  }
  const double res = chi2(u);
  const double dof = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const double scale = res / dof;
  fit.values = {T};
  fit.errors = {info > 0.0 ? std::sqrt(scale / info) : std::numeric_limits<double>::infinity()};
  fit.residual_norm = std::sqrt(res);
  const bool at_edge = best == 0 || best == kGrid;
  fit.converged = !at_edge && std::isfinite(fit.errors[0]);
  if (at_edge) fit.message = "decay constant at the edge of the search range";
  return fit;
}

std::size_t growth_region_start(const std::vector<double>& perr) {
  if (perr.empty()) throw std::invalid_argument("growth_region_start: empty curve");
  return static_cast<std::size_t>(std::min_element(perr.begin(), perr.end()) - perr.begin());
}

}  // namespace annealsim
