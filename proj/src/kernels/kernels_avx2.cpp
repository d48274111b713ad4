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

// Compiled with -mavx2 (and without -mfma, so products are rounded the same
// way as in the scalar reference).
#include <immintrin.h>

#include <cmath>

#include "crisisloc/kernels.hpp"

namespace crisisloc::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table) {
  const std::size_t n = indices.size();
  std::size_t k = 0;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (; k + 8 <= n; k += 8) {
    const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(indices.data() + k));
    const __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(indices.data() + k + 4));
    const __m256d t0 = _mm256_i32gather_pd(table.data(), i0, 8);
    const __m256d t1 = _mm256_i32gather_pd(table.data(), i1, 8);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(values.data() + k), t0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(values.data() + k + 4), t1));
  }
  for (; k + 4 <= n; k += 4) {
    const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(indices.data() + k));
    const __m256d t0 = _mm256_i32gather_pd(table.data(), i0, 8);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(values.data() + k), t0));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) sum += values[k] * table[indices[k]];
  return sum;
}

double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2) {
  const std::size_t n = weights.size();
  const __m256d vrate = _mm256_set1_pd(rate);
  const __m256d vl2 = _mm256_set1_pd(l2);
  __m256d largest = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(weights.data() + i);
    const __m256d g = _mm256_loadu_pd(grad.data() + i);
    const __m256d delta = _mm256_mul_pd(vrate, _mm256_add_pd(g, _mm256_mul_pd(vl2, w)));
    _mm256_storeu_pd(weights.data() + i, _mm256_sub_pd(w, delta));
    largest = _mm256_max_pd(abs_pd(delta), largest);
  }
  double result = hmax(largest);
  for (; i < n; ++i) {
    const double delta = rate * (grad[i] + l2 * weights[i]);
    weights[i] -= delta;
    result = std::max(result, std::fabs(delta));
  }
  return result;
}

double max_abs(std::span<const double> values) {
  const std::size_t n = values.size();
  __m256d largest = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    largest = _mm256_max_pd(abs_pd(_mm256_loadu_pd(values.data() + i)), largest);
  }
  double result = hmax(largest);
  for (; i < n; ++i) result = std::max(result, std::fabs(values[i]));
  return result;
}

}  // namespace crisisloc::kernels::avx2
