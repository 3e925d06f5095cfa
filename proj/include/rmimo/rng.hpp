// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rmimo {

// splitmix64 finalizer; mixes a key into a well-distributed 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic substream keyed by (master_seed, scenario_id, trial_index).
/// Streams do not depend on execution order or worker count: every trial owns
/// its own stream, so fan-out across threads cannot change any draw.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t scenario_id, std::uint64_t trial_index)
      : engine_(mix64(mix64(mix64(master_seed) ^ scenario_id) ^ trial_index)) {}

  explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  double gaussian() { return normal_(engine_); }

  /// Circularly-symmetric unit-variance complex Gaussian: real and imaginary
  /// parts independent N(0, 1/2).
  std::complex<double> cgaussian() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kInvSqrt2 * re, kInvSqrt2 * im};
  }

  double uniform() { return unit_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  static constexpr double kInvSqrt2 = 0.7071067811865476;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace rmimo
