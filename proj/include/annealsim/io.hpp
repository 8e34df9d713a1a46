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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "annealsim/fit.hpp"
#include "annealsim/propagator.hpp"

namespace annealsim {

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite.
std::string format_double(double value);

/// Column-oriented numeric table written as CSV with '#' comment lines.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  void write(std::ostream& out) const;
};

/// Table with columns t, <name>, <name>_se for every recorded observable.
CsvTable ensemble_table(const EnsembleStats& stats, const std::string& fingerprint);

/// Writes the file, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json gap_scan_to_json(const GapScan& scan);

/// Non-finite doubles become strings so the document stays valid JSON.
nlohmann::json number_to_json(double value);

}  // namespace annealsim
