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

#include "annealsim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace annealsim {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("csv row has " + std::to_string(row.size()) + " values for " +
                                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& c : comments) {
    std::istringstream lines(c);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
}

CsvTable ensemble_table(const EnsembleStats& stats, const std::string& fingerprint) {
  CsvTable t;
  t.comments.push_back("fingerprint: " + fingerprint);
  t.comments.push_back("trajectories: " + std::to_string(stats.count));
  if (!stats.errors_defined) t.comments.push_back("standard errors undefined for a single trajectory");
  t.columns.push_back("t");
  for (const auto& n : stats.names) {
    t.columns.push_back(n);
    t.columns.push_back(n + "_se");
  }
  for (std::size_t i = 0; i < stats.times.size(); ++i) {
    std::vector<double> row{stats.times[i]};
    for (std::size_t k = 0; k < stats.names.size(); ++k) {
      row.push_back(stats.mean[k][i]);
      row.push_back(stats.standard_error[k][i]);
    }
    t.add_row(std::move(row));
  }
  return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json number_to_json(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j;
  nlohmann::json params = nlohmann::json::object();
  for (std::size_t k = 0; k < fit.names.size(); ++k) {
    params[fit.names[k]] = {{"value", number_to_json(fit.values[k])}, {"error", number_to_json(fit.errors[k])}};
  }
  j["parameters"] = params;
  j["residual_norm"] = number_to_json(fit.residual_norm);
  j["converged"] = fit.converged;
  j["points"] = fit.points;
  j["iterations"] = fit.iterations;
  if (!fit.message.empty()) j["message"] = fit.message;
  return j;
}

nlohmann::json gap_scan_to_json(const GapScan& scan) {
  return {{"kind", model_kind_name(scan.kind)},
          {"length", scan.length},
          {"cutoff", scan.cutoff},
          {"minimum", number_to_json(scan.minimum)},
          {"argmin", number_to_json(scan.argmin)},
          {"grid_points", scan.grid.size()}};
}

}  // namespace annealsim
