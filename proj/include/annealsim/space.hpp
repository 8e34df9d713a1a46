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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

namespace annealsim {

using cplx = std::complex<double>;

enum class Axis { kX, kY, kZ };

Axis parse_axis(const std::string& name);
const char* axis_name(Axis axis);

/// Product basis of `n_spins` two-level systems and `n_modes` bosonic modes,
/// each mode truncated to occupations 0..cutoff.
///
/// Basis ordering is little-endian with spins before modes:
///
///     index = b_0 + 2 b_1 + ... + 2^(Ns-1) b_(Ns-1)
///           + 2^Ns (n_0 + (c+1) n_1 + ... + (c+1)^(Nb-1) n_(Nb-1))
///
/// where b_i = 0 is |up> (sigma^z = +1) and b_i = 1 is |down>.
struct SpaceLayout {
  std::size_t n_spins = 0;
  std::size_t n_modes = 0;
  std::size_t cutoff = 0;

  std::size_t spin_dim() const { return std::size_t{1} << n_spins; }
  std::size_t mode_levels() const { return cutoff + 1; }
  std::size_t boson_dim() const;
  std::size_t dim() const { return spin_dim() * boson_dim(); }

  /// Index stride of mode `r` in the full basis.
  std::size_t mode_stride(std::size_t mode) const;

  int spin_bit(std::size_t index, std::size_t site) const {
    return static_cast<int>((index >> site) & 1u);
  }
  std::size_t occupation(std::size_t index, std::size_t mode) const {
    return (index / mode_stride(mode)) % mode_levels();
  }
  std::size_t total_occupation(std::size_t index) const;

  /// Eigenvalue of prod_i sigma^z_i prod_r (-1)^(n_r) on a basis state.
  int parity(std::size_t index) const;

  std::string describe() const;

  bool operator==(const SpaceLayout&) const = default;
};

/// Layout with spins only.
SpaceLayout spin_layout(std::size_t n_spins);

/// Throws std::invalid_argument if the layout is empty or too large to index.
void validate_layout(const SpaceLayout& layout);

}  // namespace annealsim
