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

#include "annealsim/space.hpp"

#include <bit>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace annealsim {

Axis parse_axis(const std::string& name) {
  if (name == "x" || name == "X") return Axis::kX;
  if (name == "y" || name == "Y") return Axis::kY;
  if (name == "z" || name == "Z") return Axis::kZ;
  throw std::invalid_argument("unknown axis '" + name + "' (expected x, y or z)");
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return "x";
    case Axis::kY:
      return "y";
    case Axis::kZ:
      return "z";
  }
  return "?";
}

std::size_t SpaceLayout::boson_dim() const {
  std::size_t d = 1;
  for (std::size_t r = 0; r < n_modes; ++r) d *= mode_levels();
  return d;
}

std::size_t SpaceLayout::mode_stride(std::size_t mode) const {
  std::size_t stride = spin_dim();
  for (std::size_t r = 0; r < mode; ++r) stride *= mode_levels();
  return stride;
}

std::size_t SpaceLayout::total_occupation(std::size_t index) const {
  std::size_t rest = index >> n_spins;
  std::size_t total = 0;
  for (std::size_t r = 0; r < n_modes; ++r) {
    total += rest % mode_levels();
    rest /= mode_levels();
  }
  return total;
}

int SpaceLayout::parity(std::size_t index) const {
  std::size_t spins = index & (spin_dim() - 1);
  std::size_t flips = static_cast<std::size_t>(std::popcount(spins)) + total_occupation(index);
  return (flips & 1u) ? -1 : 1;
}

std::string SpaceLayout::describe() const {
  std::ostringstream out;
  out << n_spins << " spins x " << n_modes << " modes (cutoff " << cutoff << "), dim " << dim();
  return out.str();
}

SpaceLayout spin_layout(std::size_t n_spins) { return SpaceLayout{n_spins, 0, 0}; }

void validate_layout(const SpaceLayout& layout) {
  if (layout.n_spins == 0 && layout.n_modes == 0) {
    throw std::invalid_argument("layout has neither spins nor modes");
  }
  if (layout.n_spins > 30) throw std::invalid_argument("too many spins: " + layout.describe());
  if (layout.n_modes > 0 && layout.cutoff == 0) {
    throw std::invalid_argument("boson cutoff must be >= 1 when modes are present");
  }
  // Column indices are stored as 32-bit integers.
  long double d = static_cast<long double>(layout.spin_dim());
  for (std::size_t r = 0; r < layout.n_modes; ++r) d *= layout.mode_levels();
  if (d > static_cast<long double>(std::numeric_limits<int>::max())) {
    throw std::invalid_argument("Hilbert space too large to index: " + layout.describe());
  }
}

}  // namespace annealsim
