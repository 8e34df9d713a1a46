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


#include "annealsim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "annealsim/eigensolver.hpp"
#include "annealsim/fit.hpp"
#include "annealsim/io.hpp"
#include "annealsim/polaron.hpp"
#include "annealsim/propagator.hpp"
#include "annealsim/toml.hpp"

#ifndef ANNEALSIM_VERSION
#define ANNEALSIM_VERSION "unknown"
#endif

namespace annealsim {

using nlohmann::json;

std::string code_version() { return ANNEALSIM_VERSION; }

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fixed(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Shared state of one run: output directory, file list, warnings, summary.
class Session {
 public:
  Session(const ExperimentConfig& config, const RunOptions& options)
      : config_(config), options_(options), fingerprint_(config.fingerprint()) {
    result_.directory = config.output;
    result_.summary = json::object();
    result_.summary["blocks"] = json::object();
    result_.summary["runtimes"] = json::object();
  }

  const ExperimentConfig& config() const { return config_; }
  const std::string& fingerprint() const { return fingerprint_; }

  void log(const std::string& msg) const {
    if (options_.log) *options_.log << msg << std::endl;
  }

  void warn(const std::string& msg) {
    result_.warnings.push_back(msg);
    log("warning: " + msg);
  }

  void write(const std::string& relative, const std::string& content) {
    write_text_file(result_.directory / relative, content);
    result_.files.push_back(relative);
  }

  void write_table(const std::string& relative, CsvTable table, const std::string& block) {
    if (table.comments.empty() || table.comments.front().rfind("fingerprint:", 0) != 0) {
      table.comments.insert(table.comments.begin(), "fingerprint: " + fingerprint_);
    }
    table.comments.insert(table.comments.begin() + 1, "block: " + block);
    std::ostringstream out;
    table.write(out);
    write(relative, out.str());
  }

  json& block(const std::string& id) { return result_.summary["blocks"][id]; }
  json& summary() { return result_.summary; }
  void runtime(const std::string& id, double seconds) { result_.summary["runtimes"][id] = seconds; }

  bool too_large(const SpaceLayout& layout, const std::string& id) {
    if (layout.dim() <= config_.max_dimension) return false;
    warn(id + ": skipped, Hilbert space dimension " + std::to_string(layout.dim()) + " exceeds max_dimension " +
         std::to_string(config_.max_dimension));
    block(id) = {{"skipped", true}, {"dimension", layout.dim()}};
    return true;
  }

  RunResult finish(double total_seconds) {
    result_.summary["fingerprint"] = fingerprint_;
    result_.summary["experiment"] = experiment_kind_name(config_.experiment);
    result_.summary["name"] = config_.name;
    result_.summary["warnings"] = result_.warnings;
    result_.summary["runtimes"]["total"] = total_seconds;
    write("summary.json", result_.summary.dump(2) + "\n");
    json manifest;
    manifest["fingerprint"] = fingerprint_;
    manifest["code_version"] = code_version();
    manifest["experiment"] = experiment_kind_name(config_.experiment);
    manifest["name"] = config_.name;
    manifest["config"] = config_.to_json();
    manifest["files"] = json::array();
    for (const auto& f : result_.files) {
      manifest["files"].push_back({{"path", f}, {"digest", fnv1a_hex(read_text_file(result_.directory / f))}});
    }
    write_text_file(result_.directory / "manifest.json", manifest.dump(2) + "\n");
    result_.files.push_back("manifest.json");
    return result_;
  }

 private:
  const ExperimentConfig& config_;
  RunOptions options_;
  std::string fingerprint_;
  RunResult result_;
};

ChainModel make_model(const ExperimentConfig& c, ModelKind kind, std::size_t length) {
  ChainModel m;
  m.kind = kind;
  m.length = length;
  m.eta = c.model.eta;
  m.omega0 = c.model.omega0;
  m.omega = c.model.omega;
  m.cutoff = c.model.cutoff;
  m.boundary = c.model.boundary;
  return m;
}

std::string block_id(ModelKind kind, std::size_t length, const std::string& extra) {
  return model_kind_name(kind) + "_L" + std::to_string(length) + (extra.empty() ? "" : "_" + extra);
}

// kappa(s) source shared by all blocks of a run.
class RampProvider {
 public:
  explicit RampProvider(Session& session) : session_(session) {
    const auto& c = session.config();
    if (auto p = c.ramp_path()) {
      std::ifstream in(*p);
      if (!in) throw RunError("cannot open ramp file '" + p->string() + "'");
      file_table_ = RampTable::read_csv(in);
    }
  }

  CalibrationSettings settings(std::size_t length) const {
    const auto& c = session_.config();
    CalibrationSettings st;
    st.length = calibration_length(length);
    st.eta = c.model.eta;
    st.omega0 = c.model.omega0;
    st.omega = c.model.omega;
    st.cutoff = c.model.cutoff;
    st.boundary = c.model.boundary;
    st.workers = c.workers;
    return st;
  }

  std::size_t calibration_length(std::size_t length) const {
    const auto& m = session_.config().model;
    return m.ramp_length == 0 ? length : m.ramp_length;
  }

  /// kappa at one s.
  double point(double s, std::size_t length) {
    const auto& c = session_.config();
    if (c.model.ramp == "linear") return s;
    if (file_table_) return file_table_->kappa(s);
    const auto key = std::make_pair(calibration_length(length), s);
    if (auto it = points_.find(key); it != points_.end()) return it->second;
    check_size(length);
    PointCalibration pc = calibrate_point(s, settings(length));
    if (!pc.warning.empty()) session_.warn(pc.warning);
    points_[key] = pc.kappa;
    return pc.kappa;
  }

  /// Whole ramp on the configured grid.
  const RampTable& table(std::size_t length) {
    const auto& c = session_.config();
    if (c.model.ramp == "linear") return linear_;
    if (file_table_) return *file_table_;
    const std::size_t lc = calibration_length(length);
    if (auto it = tables_.find(lc); it != tables_.end()) return it->second;
    check_size(length);
    session_.log("calibrating ramp at L=" + std::to_string(lc));
    Calibration cal = calibrate_kappa(uniform_grid(c.model.ramp_intervals), settings(length));
    for (const auto& w : cal.warnings) session_.warn(w);
    std::ostringstream out;
    out << "# fingerprint: " << session_.fingerprint() << "\n# calibrated ramp, L=" << lc << "\n";
    cal.table.write_csv(out);
    session_.write("ramp_L" + std::to_string(lc) + ".csv", out.str());
    return tables_.emplace(lc, std::move(cal.table)).first->second;
  }

 private:
  Session& session_;
  std::optional<RampTable> file_table_;
  RampTable linear_ = RampTable::linear();
  std::map<std::pair<std::size_t, double>, double> points_;
  std::map<std::size_t, RampTable> tables_;

  void check_size(std::size_t length) const {
    const auto& c = session_.config();
    ChainModel m = make_model(c, ModelKind::kSpinBoson, calibration_length(length));
    if (m.layout().dim() > c.max_dimension) {
      throw RunError("ramp calibration at L=" + std::to_string(m.length) + " exceeds max_dimension; set model.ramp_length");
    }
  }
};

std::vector<double> column(const EnsembleStats& st, const std::string& name, bool errors) {
  const std::size_t k = st.index_of(name);
  return errors ? st.standard_error[k] : st.mean[k];
}

json trajectory_health(Session& session, const EnsembleStats& st, const std::string& id) {
  if (st.max_top_occupation > 0.01) {
    session.warn(id + ": top Fock level occupation reached " + fixed(st.max_top_occupation) +
                 " (> 1%), results may depend on the cutoff");
  }
  return {{"trajectories", st.count},
          {"max_norm_drift", st.max_norm_drift},
          {"max_top_occupation", st.max_top_occupation},
          {"cutoff_flag", st.max_top_occupation > 0.01},
          {"max_krylov_dimension", st.max_krylov_dimension}};
}

PropagationOptions propagation_options(std::size_t samples) {
  PropagationOptions po;
  po.record_samples = samples;
  return po;
}

// ---------------------------------------------------------------- static

void run_static(Session& session) {
  const auto& c = session.config();
  const auto& sr = c.static_run;
  RampProvider ramp(session);
  for (ModelKind kind : c.model.kinds) {
    for (std::size_t length : c.model.lengths) {
      for (Axis axis : c.noise.axes) {
        const std::string id = block_id(kind, length, axis_name(axis));
        ChainModel m = make_model(c, kind, length);
        m.validate();
        const SpaceLayout layout = m.layout();
        if (session.too_large(layout, id)) continue;
        Timer timer;
        session.log("static " + id + ": " + std::to_string(c.realizations) + " trajectories, dim " +
                    std::to_string(layout.dim()));
        const double x = kind == ModelKind::kIsing ? sr.s : ramp.point(sr.s, length);
        const SparseOperator h0 = chain_hamiltonian(m, x);
        const auto ops = noise_coupling_operators(axis, layout, c.noise.coupling);
        ObservableSet obs(layout, m.boundary, sr.observables, ground_projector(target_ising(m, sr.s)));
        const Eigen::VectorXcd psi0 = ground_state(h0).vector;
        NoiseSpec ns;
        ns.gamma = c.noise.gamma;
        ns.tau = c.noise.dt;
        ns.omega0 = c.model.omega0;
        ns.axis = axis;
        ns.channels = length;
        const PropagationOptions po = propagation_options(c.record_samples);
        TrajectoryTask task = [&](std::size_t, std::uint64_t seed) {
          NoiseRealization r = sample_noise(ns, sr.t_max, seed);
          return evolve_static(h0, ops, r, sr.t_max, obs, po, psi0);
        };
        const std::string block_fp = fnv1a_hex(session.fingerprint() + "/" + id);
        EnsembleStats st = run_ensemble(task, c.realizations, c.seed, c.workers, block_fp);
        CsvTable table = ensemble_table(st, session.fingerprint());
        table.comments.push_back("model=" + model_kind_name(kind) + " L=" + std::to_string(length) +
                                 " axis=" + axis_name(axis) + " s=" + format_double(sr.s) +
                                 " x=" + format_double(x) + " gamma=" + format_double(c.noise.gamma));
        session.write_table("static_" + id + ".csv", table, id);

        json& b = session.block(id);
        b = trajectory_health(session, st, id);
        b["schedule_parameter"] = x;
        b["final"] = json::object();
        for (const auto& n : st.names) {
          b["final"][n] = {{"mean", number_to_json(st.final_mean(n))}, {"se", number_to_json(st.final_error(n))}};
        }
        if (sr.fit) {
          DecayFitOptions fo;
          if (sr.weights == FitWeights::kInverseVariance && st.errors_defined) fo.sigma = column(st, "Y", true);
          try {
            FitResult f = fit_decay(st.times, column(st, "Y", false), length, fo);
            b["fit"] = fit_to_json(f);
            session.log("  fit: a=" + fixed(f.value("a")) + " Tq=" + fixed(f.value("Tq")) +
                        " p=" + fixed(f.value("p")));
          } catch (const FitError& e) {
            session.warn(id + ": decay fit failed: " + e.what());
            b["fit"] = {{"error", e.what()}};
          }
        }
        session.runtime(id, timer.seconds());
      }
    }
  }
}

// ---------------------------------------------------------------- anneal

void run_anneal(Session& session) {
  const auto& c = session.config();
  const auto& an = c.anneal;
  RampProvider ramp(session);
  for (ModelKind kind : c.model.kinds) {
    for (std::size_t length : c.model.lengths) {
      for (Axis axis : c.noise.axes) {
        const std::string id = block_id(kind, length, axis_name(axis));
        ChainModel m = make_model(c, kind, length);
        m.validate();
        const SpaceLayout layout = m.layout();
        if (session.too_large(layout, id)) continue;
        Timer timer;
        const RampTable& table_ramp = kind == ModelKind::kIsing ? RampTable::linear() : ramp.table(length);
        ScheduledHamiltonian sh(m, noise_coupling_operators(axis, layout, c.noise.coupling));
        ObservableSet obs(layout, m.boundary, an.observables, ground_projector(target_ising(m, 1.0)));
        const PropagationOptions po = propagation_options(2);

        std::vector<std::string> names;
        for (auto o : an.observables) names.push_back(observable_name(o));
        CsvTable table;
        table.comments.push_back("fingerprint: " + session.fingerprint());
        table.comments.push_back("model=" + model_kind_name(kind) + " L=" + std::to_string(length) +
                                 " axis=" + axis_name(axis) + " gamma=" + format_double(c.noise.gamma) +
                                 " eta=" + std::to_string(c.model.eta) + " trajectories=" +
                                 std::to_string(c.realizations));
        table.columns.push_back("T");
        for (const auto& n : names) {
          table.columns.push_back(n);
          table.columns.push_back(n + "_se");
        }
        std::vector<double> perr, perr_se;
        json health = json::array();
        for (double total : an.times) {
          AnnealSpec spec;
          spec.model = m;
          spec.ramp = table_ramp;
          spec.total_time = total;
          spec.dt = c.noise.dt;
          spec.noise_axis = axis;
          spec.gamma = c.noise.gamma;
          spec.coupling = c.noise.coupling;
          NoiseSpec ns;
          ns.gamma = c.noise.gamma;
          ns.tau = spec.step_duration();
          ns.omega0 = c.model.omega0;
          ns.axis = axis;
          ns.channels = length;
          session.log("anneal " + id + ": T=" + fixed(total) + ", " + std::to_string(spec.steps()) + " steps");
          TrajectoryTask task = [&](std::size_t, std::uint64_t seed) {
            NoiseRealization r = sample_noise(ns, total, seed);
            return evolve_annealing(spec, sh, r, obs, po);
          };
          EnsembleStats st = run_ensemble(task, c.realizations, c.seed, c.workers,
                                          fnv1a_hex(session.fingerprint() + "/" + id + "/" + format_double(total)));
          std::vector<double> row{total};
          for (const auto& n : names) {
            row.push_back(st.final_mean(n));
            row.push_back(st.final_error(n));
          }
          table.add_row(std::move(row));
          perr.push_back(st.final_mean("Perr"));
          perr_se.push_back(st.final_error("Perr"));
          json h = trajectory_health(session, st, id + " T=" + fixed(total));
          h["T"] = total;
          health.push_back(h);
        }
        session.write_table("anneal_" + id + ".csv", table, id);
        json& b = session.block(id);
        b["health"] = health;
        b["times"] = an.times;
        b["error_probability"] = perr;
        b["error_probability_se"] = perr_se;
        const std::size_t start = growth_region_start(perr);
        b["growth_region_start"] = an.times[start];
        if (an.fit) {
          std::vector<double> t(an.times.begin() + static_cast<std::ptrdiff_t>(start), an.times.end());
          std::vector<double> y, se;
          for (std::size_t i = start; i < perr.size(); ++i) {
            y.push_back(1.0 - perr[i]);
            se.push_back(perr_se[i]);
          }
          DecayFitOptions fo;
          if (an.weights == FitWeights::kInverseVariance && c.realizations >= 2) fo.sigma = se;
          try {
            FitResult f = fit_decay(t, y, length, fo);
            b["fit"] = fit_to_json(f);
          } catch (const FitError& e) {
            session.warn(id + ": growth-region fit failed: " + e.what());
            b["fit"] = {{"error", e.what()}};
          }
        }
        session.runtime(id, timer.seconds());
      }
    }
  }
}

// ---------------------------------------------------------------- gaps

void run_gaps(Session& session) {
  const auto& c = session.config();
  const auto& g = c.gap;
  for (ModelKind kind : c.model.kinds) {
    std::vector<std::size_t> cutoffs{0};
    if (kind == ModelKind::kSpinBoson) cutoffs = g.cutoffs.empty() ? std::vector<std::size_t>{c.model.cutoff} : g.cutoffs;
    for (std::size_t cut : cutoffs) {
      const std::string series = model_kind_name(kind) + (cut ? "_c" + std::to_string(cut) : "");
      CsvTable table;
      table.comments.push_back("fingerprint: " + session.fingerprint());
      table.comments.push_back(std::string("minimum gap per length; x is ") +
                               (kind == ModelKind::kIsing ? "s" : "kappa") +
                               (g.sector_gap ? "; gap inside the initial parity sector" : ""));
      table.columns = {"L", "x_min", "gap_min", "L_times_gap"};
      std::vector<std::pair<double, double>> points;
      std::optional<double> previous;
      json scans = json::array();
      for (std::size_t length : c.model.lengths) {
        ChainModel m = make_model(c, kind, length);
        if (cut) m.cutoff = cut;
        m.validate();
        const std::string id = series + "_L" + std::to_string(length);
        if (session.too_large(m.layout(), id)) continue;
        Timer timer;
        GapScanOptions o;
        o.x_min = g.x_min;
        o.x_max = g.x_max;
        o.coarse_step = g.coarse_step;
        o.fine_step = g.fine_step;
        o.fine_halfwidth = g.fine_halfwidth;
        o.golden_tolerance = g.golden_tolerance;
        o.sector_gap = g.sector_gap;
        o.workers = c.workers;
        if (g.bracket_halfwidth > 0.0 && previous) {
          o.x_min = std::max(g.x_min, *previous - g.bracket_halfwidth);
          o.x_max = std::min(g.x_max, *previous + g.bracket_halfwidth);
        }
        session.log("gap " + id + ": dim " + std::to_string(m.layout().dim()) + ", x in [" + fixed(o.x_min) + ", " +
                    fixed(o.x_max) + "]");
        GapScan scan = minimum_gap_scan(m, o);
        const double edge = 0.5 * o.fine_step;
        if ((scan.argmin - o.x_min < edge && o.x_min > 0.0) || (o.x_max - scan.argmin < edge && o.x_max < 1.0)) {
          session.warn(id + ": minimum at the edge of the scanned bracket");
        }
        previous = scan.argmin;
        table.add_row({static_cast<double>(length), scan.argmin, scan.minimum,
                       static_cast<double>(length) * scan.minimum});
        points.emplace_back(static_cast<double>(length), scan.minimum);
        CsvTable curve;
        curve.comments.push_back("fingerprint: " + session.fingerprint());
        curve.columns = {"x", "gap"};
        std::vector<std::size_t> order(scan.grid.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scan.grid[a] < scan.grid[b]; });
        for (std::size_t i : order) curve.add_row({scan.grid[i], scan.gaps[i]});
        session.write_table("gapcurve_" + id + ".csv", curve, id);
        scans.push_back(gap_scan_to_json(scan));
        session.runtime(id, timer.seconds());
      }
      session.write_table("gaps_" + series + ".csv", table, series);
      json& b = session.block(series);
      b["scans"] = scans;
      if (points.size() >= 2) {
        try {
          b["fit"] = fit_to_json(fit_gap_scaling(points));
        } catch (const FitError& e) {
          session.warn(series + ": scaling fit failed: " + e.what());
        }
      } else {
        session.warn(series + ": fewer than two lengths, no scaling fit");
      }
    }
  }
}

// ---------------------------------------------------------------- noise validation

// Decaying signal of a single-qubit ensemble: <sigma^z> under transverse
// noise, the transverse envelope |<sigma^->| under longitudinal noise.
void decay_signal(const EnsembleStats& st, Axis axis, std::vector<double>& value, std::vector<double>& se) {
  value.clear();
  se.clear();
  if (axis == Axis::kZ) {
    const auto mx = column(st, "Mx", false), my = column(st, "My", false);
    const auto ex = column(st, "Mx", true), ey = column(st, "My", true);
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double env = std::hypot(mx[i], my[i]);
      value.push_back(env);
      se.push_back(env > 0.0 ? std::hypot(mx[i] * ex[i], my[i] * ey[i]) / env : 0.0);
    }
  } else {
    value = column(st, "Mz", false);
    se = column(st, "Mz", true);
  }
}

void run_noise_validation(Session& session) {
  const auto& c = session.config();
  const auto& v = c.noise_validation;
  if (v.spectrum) {
    Timer timer;
    NoiseSpec ns;
    ns.gamma = c.noise.gamma;
    ns.tau = c.noise.dt;
    ns.omega0 = 1.0;
    ns.channels = 1;
    const std::size_t n = v.spectrum_realizations ? v.spectrum_realizations : std::min<std::size_t>(c.realizations, 1000);
    if (n < 100) {
      session.warn("spectrum: needs at least 100 realizations, got " + std::to_string(n) + "; skipped");
    } else {
      session.log("spectrum: " + std::to_string(n) + " realizations");
      std::vector<NoiseRealization> rs(n);
      for (std::size_t i = 0; i < n; ++i) rs[i] = sample_noise(ns, v.spectrum_duration, derive_seed(c.seed, i));
      std::vector<double> grid;
      const double w_max = v.spectrum_max_frequency / ns.tau;
      for (std::size_t k = 1; k <= v.spectrum_points; ++k) {
        grid.push_back(w_max * static_cast<double>(k) / static_cast<double>(v.spectrum_points));
      }
      SpectrumEstimate est = estimate_spectrum(rs, grid);
      CsvTable t;
      t.comments.push_back("fingerprint: " + session.fingerprint());
      t.comments.push_back("gamma=" + format_double(ns.gamma) + " tau=" + format_double(ns.tau) +
                           " samples=" + std::to_string(est.samples));
      t.columns = {"omega", "S", "S_se", "S_theory", "S_exact", "relative_deviation"};
      double worst = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double th = power_spectrum_theory(grid[k], ns);
        const double dev = std::abs(est.mean[k] - th) / th;
        worst = std::max(worst, dev);
        t.add_row({grid[k], est.mean[k], est.standard_error[k], th, power_spectrum_exact(grid[k], ns), dev});
      }
      session.write_table("spectrum.csv", t, "spectrum");
      session.block("spectrum") = {{"realizations", n}, {"max_relative_deviation", worst}, {"omega_max", w_max}};
    }
    session.runtime("spectrum", timer.seconds());
  }

  IsingParams qubit;
  qubit.h = {1.0};
  qubit.J = Eigen::MatrixXd::Zero(1, 1);
  qubit.boundary = Boundary::kOpen;
  const SpaceLayout layout = spin_layout(1);
  const SparseOperator h0 = build_ising(qubit, layout);
  ObservableSet obs(layout, Boundary::kOpen,
                    {Observable::kMagnetizationX, Observable::kMagnetizationY, Observable::kMagnetizationZ});
  for (double gamma : v.gammas) {
    for (Axis axis : c.noise.axes) {
      const std::string id = "qubit_g" + format_double(gamma) + "_" + axis_name(axis);
      Timer timer;
      const CoherenceTimes th = coherence_times_theory(axis_angle(axis), gamma, 1.0, c.noise.coupling);
      const double expected = axis == Axis::kZ ? th.t2_star : th.t1;
      const double t_max = v.t_max_factor * expected;
      Eigen::VectorXcd psi0(2);
      if (axis == Axis::kZ) {
        psi0 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      } else {
        psi0 << 1.0, 0.0;
      }
      NoiseSpec fine;
      fine.gamma = gamma;
      fine.tau = 0.5 * c.noise.dt;
      fine.axis = axis;
      fine.channels = 1;
      NoiseSpec coarse = fine;
      coarse.tau = c.noise.dt;
      const auto ops = noise_coupling_operators(axis, layout, c.noise.coupling);
      // Strided recording keeps the halved-step grid aligned with this one.
      const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / coarse.tau - 1e-9));
      PropagationOptions po = propagation_options(c.record_samples);
      po.record_stride = std::max<std::size_t>(1, (n_steps + c.record_samples - 2) / (c.record_samples - 1));
      PropagationOptions po_half = po;
      po_half.record_stride = 2 * po.record_stride;
      session.log(id + ": " + std::to_string(c.realizations) + " trajectories to t=" + fixed(t_max));
      // With dt halving both runs share each underlying fine noise path.
      TrajectoryTask task = [&](std::size_t, std::uint64_t seed) {
        NoiseRealization r = v.dt_halving ? coarsen(sample_noise(fine, t_max, seed), 2) : sample_noise(coarse, t_max, seed);
        return evolve_static(h0, ops, r, t_max, obs, po, psi0);
      };
      EnsembleStats st = run_ensemble(task, c.realizations, c.seed, c.workers, fnv1a_hex(session.fingerprint() + id));
      std::vector<double> signal, signal_se;
      decay_signal(st, axis, signal, signal_se);
      CsvTable table = ensemble_table(st, session.fingerprint());
      table.columns.push_back("signal");
      table.columns.push_back("signal_se");
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        table.rows[i].push_back(signal[i]);
        table.rows[i].push_back(signal_se[i]);
      }
      table.comments.push_back(std::string("signal = ") + (axis == Axis::kZ ? "|<sigma^->| envelope" : "<sigma^z>") +
                               "; theory decay time " + format_double(expected));
      session.write_table(id + ".csv", table, id);
      json& b = session.block(id);
      b = trajectory_health(session, st, id);
      b["gamma"] = gamma;
      b["axis"] = axis_name(axis);
      b["theory_time"] = expected;
      try {
        FitResult f = fit_exponential_decay(st.times, signal);
        b["fit"] = fit_to_json(f);
        b["relative_deviation"] = std::abs(f.value("T") - expected) / expected;
        session.log("  decay time " + fixed(f.value("T")) + " (theory " + fixed(expected) + ")");
      } catch (const FitError& e) {
        session.warn(id + ": decay fit failed: " + e.what());
      }
      if (v.dt_halving) {
        TrajectoryTask half = [&](std::size_t, std::uint64_t seed) {
          return evolve_static(h0, ops, sample_noise(fine, t_max, seed), t_max, obs, po_half, psi0);
        };
        EnsembleStats hs = run_ensemble(half, c.realizations, c.seed, c.workers);
        json cmp = json::object();
        for (const auto& n : st.names) {
          const auto m0 = column(st, n, false), e0 = column(st, n, true);
          const auto m1 = column(hs, n, false);
          double worst = 0.0;
          std::size_t j = 0;
          for (std::size_t i = 0; i < m0.size(); ++i) {
            while (j < hs.times.size() && hs.times[j] < st.times[i] - 1e-9) ++j;
            if (j == hs.times.size()) break;
            if (std::abs(hs.times[j] - st.times[i]) > 1e-9) continue;
            if (e0[i] > 0.0) worst = std::max(worst, std::abs(m1[j] - m0[i]) / e0[i]);
          }
          cmp[n] = st.errors_defined ? number_to_json(worst) : json("undefined");
        }
        b["dt_halving_max_deviation_in_se"] = cmp;
        CsvTable ht = ensemble_table(hs, session.fingerprint());
        ht.comments.push_back("dt halved to " + format_double(fine.tau));
        session.write_table(id + "_half_dt.csv", ht, id + "_half_dt");
      }
      session.runtime(id, timer.seconds());
    }
  }
}

// ---------------------------------------------------------------- matrix elements

void run_matrix_elements(Session& session) {
  const auto& c = session.config();
  const auto& me = c.matrix_elements;
  RampProvider ramp(session);
  for (std::size_t length : c.model.lengths) {
    const std::string id = block_id(ModelKind::kSpinBoson, length, "");
    ChainModel m = make_model(c, ModelKind::kSpinBoson, length);
    m.validate();
    if (session.too_large(m.layout(), id)) continue;
    Timer timer;
    const double kappa = ramp.point(me.s, length);
    const SBParams p = sb_schedule(kappa, length, m.eta, m.omega0, m.omega, m.cutoff, m.boundary);
    const SparseOperator h = build_spin_boson(p, m.layout());
    session.log("matrix elements " + id + ": kappa=" + fixed(kappa) + ", " + std::to_string(me.levels) + " levels");
    const auto rows = noise_matrix_elements(h, me.site, me.levels, c.noise.coupling, p.phi());
    std::ostringstream out;
    out << "# fingerprint: " << session.fingerprint() << "\n# block: " << id << "\n# s=" << format_double(me.s)
        << " kappa=" << format_double(kappa) << " site=" << me.site << "\n";
    write_matrix_elements_csv(out, rows);
    session.write("matrix_elements_" + id + ".csv", out.str());
    json& b = session.block(id);
    b["kappa"] = kappa;
    b["levels"] = rows.size();
    for (auto character : {BosonCharacter::kLab, BosonCharacter::kPolaron}) {
      const std::string key = character == BosonCharacter::kLab ? "lab" : "polaron";
      json w;
      for (Axis axis : c.noise.axes) {
        w[axis_name(axis)] = boson_excited_weight(rows, axis, me.threshold, character);
      }
      if (w.contains("x") && w.contains("z")) {
        const double wx = w["x"].get<double>(), wz = w["z"].get<double>();
        w["z_over_x"] = number_to_json(wx > 0.0 ? wz / wx : std::numeric_limits<double>::infinity());
      }
      b["boson_excited_weight"][key] = w;
    }
    session.runtime(id, timer.seconds());
  }
}

// ---------------------------------------------------------------- calibration

void run_calibration(Session& session) {
  const auto& c = session.config();
  for (std::size_t length : c.model.lengths) {
    const std::string id = "ramp_L" + std::to_string(length);
    ChainModel m = make_model(c, ModelKind::kSpinBoson, length);
    m.validate();
    if (session.too_large(m.layout(), id)) continue;
    Timer timer;
    CalibrationSettings st;
    st.length = length;
    st.eta = c.model.eta;
    st.omega0 = c.model.omega0;
    st.omega = c.model.omega;
    st.cutoff = c.model.cutoff;
    st.boundary = c.model.boundary;
    st.tolerance = c.calibrate.tolerance;
    st.workers = c.workers;
    session.log("calibrating " + id);
    Calibration cal = calibrate_kappa(uniform_grid(c.calibrate.intervals), st);
    for (const auto& w : cal.warnings) session.warn(id + ": " + w);
    std::ostringstream out;
    out << "# fingerprint: " << session.fingerprint() << "\n# block: " << id << "\n";
    cal.table.write_csv(out);
    session.write(id + ".csv", out.str());
    const auto& s = cal.table.s_grid();
    const auto& k = cal.table.kappa_grid();
    session.block(id) = {{"points", s.size()}, {"kappa_at_quarter", cal.table.kappa(0.25)}, {"kappa_end", k.back()}};
    session.runtime(id, timer.seconds());
  }
}

void prepare_directory(const ExperimentConfig& c, const RunOptions& options) {
  const std::filesystem::path dir(c.output);
  if (std::filesystem::exists(dir)) {
    if (!std::filesystem::is_directory(dir)) throw RunError("output path '" + c.output + "' is not a directory");
    if (!std::filesystem::is_empty(dir) && !options.force) {
      throw RunError("output directory '" + c.output + "' is not empty; use --force to overwrite");
    }
  }
  std::filesystem::create_directories(dir);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  // Revalidate through the canonical form so hand-built configs get the
  // same checks as parsed files.
  json canonical = config.to_json();
  if (canonical.contains("model")) canonical["model"].erase("ramp_digest");
  (void)config_from_json(canonical, config.base_directory);
  prepare_directory(config, options);
  Session session(config, options);
  Timer timer;
  session.log("run " + config.name + " (" + experiment_kind_name(config.experiment) + "), fingerprint " +
              session.fingerprint());
  switch (config.experiment) {
    case ExperimentKind::kStaticDecay: run_static(session); break;
    case ExperimentKind::kAnnealingSweep: run_anneal(session); break;
    case ExperimentKind::kGapScan: run_gaps(session); break;
    case ExperimentKind::kNoiseValidation: run_noise_validation(session); break;
    case ExperimentKind::kMatrixElements: run_matrix_elements(session); break;
    case ExperimentKind::kCalibrateRamp: run_calibration(session); break;
  }
  return session.finish(timer.seconds());
}

// ---------------------------------------------------------------- recipes

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> all{
      {"fig2", "fig2: static decay at s=0.25, L=3, γ=0.2, n_co=8, Ising and spin-boson, x and z noise",
       R"(schema = 1
name = "fig2"
experiment = "static_decay"
seed = 2026
realizations = 500

[model]
kinds = ["ising", "spin_boson"]
lengths = [3]
eta = 1
cutoff = 8
boundary = "periodic"
ramp = "calibrated"

[noise]
axes = ["x", "z"]
gamma = 0.2
coupling = "unit"
dt = 0.1

[static]
s = 0.25
t_max = 200.0
observables = ["C", "Nb", "Y", "Perr", "Ntop"]
)"},
      {"fig3a", "fig3a: ferromagnetic annealing sweep, L=3, γ=0.1, n_co=8, x and z noise",
       R"(schema = 1
name = "fig3a"
experiment = "annealing_sweep"
seed = 2026
realizations = 500

[model]
kinds = ["ising", "spin_boson"]
lengths = [3]
eta = 1
cutoff = 8
boundary = "periodic"
ramp = "calibrated"
ramp_intervals = 50

[noise]
axes = ["x", "z"]
gamma = 0.1
coupling = "unit"
dt = 0.1

[anneal]
times = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0]
)"},
      {"fig3b", "fig3b: antiferromagnetic annealing sweep (open chain), L=3, γ=0.1, n_co=8, x and z noise",
       R"(schema = 1
name = "fig3b"
experiment = "annealing_sweep"
seed = 2026
realizations = 500

[model]
kinds = ["ising", "spin_boson"]
lengths = [3]
eta = -1
cutoff = 8
boundary = "open"
ramp = "calibrated"
ramp_intervals = 50

[noise]
axes = ["x", "z"]
gamma = 0.1
coupling = "unit"
dt = 0.1

[anneal]
times = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0]
)"},
      {"fig4", "fig4: γ=0.2, n_co=4, L=3..7, ferromagnetic annealing sweeps with growth-region fits, x noise",
       R"(schema = 1
name = "fig4"
experiment = "annealing_sweep"
seed = 2026
realizations = 500

[model]
kinds = ["ising", "spin_boson"]
lengths = [3, 4, 5, 6, 7]
eta = 1
cutoff = 4
boundary = "periodic"
ramp = "calibrated"
ramp_length = 3
ramp_intervals = 50

[noise]
axes = ["x"]
gamma = 0.2
coupling = "unit"
dt = 0.1

[anneal]
times = [2.0, 5.0, 10.0, 20.0, 30.0, 50.0, 75.0, 100.0, 150.0, 200.0, 300.0, 500.0, 750.0, 1000.0]
observables = ["Perr", "Y", "Nb"]
)"},
      {"figS1", "figS1: minimum gap vs L=3..10, Ising and spin-boson cutoffs 1-3, scaling fits a/L + b/L^2",
       R"(schema = 1
name = "figS1"
experiment = "gap_scan"

[model]
kinds = ["ising", "spin_boson"]
lengths = [3, 4, 5, 6, 7, 8, 9, 10]
eta = 1
boundary = "periodic"

[gap]
cutoffs = [1, 2, 3]
golden_tolerance = 1e-5
)"},
      {"figS3", "figS3: single qubit, ~5000 realizations, γ=0.1 and 0.2, x and z noise, dt-halving check and noise spectrum",
       R"(schema = 1
name = "figS3"
experiment = "noise_validation"
seed = 2026
realizations = 5000

[noise]
axes = ["x", "z"]
gamma = 0.2
coupling = "half"
dt = 0.1

[noise_validation]
gammas = [0.1, 0.2]
t_max_factor = 2.0
dt_halving = true
spectrum = true
spectrum_realizations = 1000
)"},
      {"matrix", "matrix: noise matrix elements in the fig2 configuration (s=0.25, L=3, n_co=8)",
       R"(schema = 1
name = "matrix"
experiment = "matrix_elements"

[model]
kinds = ["spin_boson"]
lengths = [3]
eta = 1
cutoff = 8
boundary = "periodic"
ramp = "calibrated"

[noise]
axes = ["x", "z"]
coupling = "unit"

[matrix_elements]
s = 0.25
levels = 40
)"},
  };
  return all;
}

const Recipe& find_recipe(const std::string& name) {
  for (const auto& r : recipes()) {
    if (r.name == name) return r;
  }
  std::string known;
  for (const auto& r : recipes()) known += (known.empty() ? "" : ", ") + r.name;
  throw std::invalid_argument("unknown recipe '" + name + "' (known: " + known + ")");
}

ExperimentConfig recipe_config(const std::string& name, const RecipeOverrides& o) {
  const Recipe& r = find_recipe(name);
  json doc = parse_toml(r.toml);
  if (o.seed) doc["seed"] = *o.seed;
  if (o.realizations) doc["realizations"] = *o.realizations;
  ExperimentConfig c = config_from_json(doc);
  apply_environment(c);
  if (o.output) c.output = *o.output;
  if (o.workers) c.workers = *o.workers;
  return c;
}

}  // namespace annealsim
