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

#include "crisisloc/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

namespace crisisloc::kernels::neon {

double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table) {
  const std::size_t n = indices.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t k = 0;
  // No gather instruction; lanes are filled from scalar loads.
  for (; k + 4 <= n; k += 4) {
    float64x2_t t0 = vdupq_n_f64(table[indices[k]]);
    t0 = vsetq_lane_f64(table[indices[k + 1]], t0, 1);
    float64x2_t t1 = vdupq_n_f64(table[indices[k + 2]]);
    t1 = vsetq_lane_f64(table[indices[k + 3]], t1, 1);
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(values.data() + k), t0));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(values.data() + k + 2), t1));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; k < n; ++k) sum += values[k] * table[indices[k]];
  return sum;
}

double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2) {
  const std::size_t n = weights.size();
  const float64x2_t vrate = vdupq_n_f64(rate);
  const float64x2_t vl2 = vdupq_n_f64(l2);
  float64x2_t largest = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t w = vld1q_f64(weights.data() + i);
    const float64x2_t g = vld1q_f64(grad.data() + i);
    const float64x2_t delta = vmulq_f64(vrate, vaddq_f64(g, vmulq_f64(vl2, w)));
    vst1q_f64(weights.data() + i, vsubq_f64(w, delta));
    largest = vmaxnmq_f64(largest, vabsq_f64(delta));
  }
  double result = vmaxnmvq_f64(largest);
  for (; i < n; ++i) {
    const double delta = rate * (grad[i] + l2 * weights[i]);
    weights[i] -= delta;
    result = std::max(result, std::fabs(delta));
  }
  return result;
}

double max_abs(std::span<const double> values) {
  const std::size_t n = values.size();
  float64x2_t largest = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) largest = vmaxnmq_f64(largest, vabsq_f64(vld1q_f64(values.data() + i)));
  double result = vmaxnmvq_f64(largest);
  for (; i < n; ++i) result = std::max(result, std::fabs(values[i]));
  return result;
}

}  // namespace crisisloc::kernels::neon

#endif
