// Copyright 2026 The mafsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "mafsim/vec2.hpp"

namespace mafsim {

// Deterministic random source for a single simulation run. Doubles are built
// from the top 53 bits of the mt19937_64 stream; std::uniform_real_distribution
// is avoided because its output sequence is not pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, 2*pi).
  double angle() { return unit() * 2.0 * std::numbers::pi; }

  // Unit vector with uniformly random direction.
  Vec2 direction() {
    const double a = angle();
    return {std::cos(a), std::sin(a)};
  }

  // Uniform point in the closed disc of given radius centred on `center`.
  Vec2 in_disc(const Vec2& center, double radius) {
    const double r = radius * std::sqrt(unit());
    return center + r * direction();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mafsim
