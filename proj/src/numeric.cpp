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

#include "rmimo/numeric.hpp"

#include <cmath>

namespace rmimo {

namespace {

double pairwise_sum_range(const double* data, std::size_t count) {
  if (count <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

double MeanVar::std_error() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance / static_cast<double>(count));
}

MeanVar mean_variance(std::span<const double> values) {
  MeanVar out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double acc = 0.0;
  // two-pass; accumulation error is negligible next to the sampling noise
  for (double v : values) {
    const double d = v - out.mean;
    acc += d * d;
  }
  out.variance = acc / static_cast<double>(values.size() - 1);
  return out;
}

}  // namespace rmimo
