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

#include <cstddef>
#include <span>

namespace rmimo {

/// Pairwise summation in a fixed tree order; the reduction used by every
/// Monte Carlo mean so results do not depend on scheduling.
double pairwise_sum(std::span<const double> values);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::size_t count = 0;

  double std_error() const;
};

MeanVar mean_variance(std::span<const double> values);

}  // namespace rmimo
