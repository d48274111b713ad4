// Copyright 2026 The crisisloc Authors.
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

#include <cmath>

#include "crisisloc/kernels.hpp"

namespace crisisloc::kernels::scalar {

double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table) {
  double sum = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) sum += values[k] * table[indices[k]];
  return sum;
}

double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2) {
  double largest = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double delta = rate * (grad[i] + l2 * weights[i]);
    weights[i] -= delta;
    largest = std::max(largest, std::fabs(delta));
  }
  return largest;
}

double max_abs(std::span<const double> values) {
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::fabs(v));
  return largest;
}

}  // namespace crisisloc::kernels::scalar
