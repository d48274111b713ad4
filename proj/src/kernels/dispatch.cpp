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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "crisisloc/kernels.hpp"

namespace crisisloc::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

Isa best_supported_isa() {
#if defined(CRISISLOC_HAVE_AVX2_KERNELS)
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
#if defined(CRISISLOC_HAVE_NEON_KERNELS)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

namespace {

Isa initial_isa() {
  const char* env = std::getenv("CRISISLOC_ISA");
  if (env && std::string(env) == "scalar") return Isa::Scalar;
  return best_supported_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa != Isa::Scalar && isa != best_supported_isa()) {
    throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                "' is not supported on this machine");
  }
  current().store(isa, std::memory_order_relaxed);
}

double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table) {
  switch (active_isa()) {
#if defined(CRISISLOC_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::gather_dot(indices, values, table);
#endif
#if defined(CRISISLOC_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::gather_dot(indices, values, table);
#endif
    default: return scalar::gather_dot(indices, values, table);
  }
}

double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2) {
  switch (active_isa()) {
#if defined(CRISISLOC_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::regularized_step(weights, grad, rate, l2);
#endif
#if defined(CRISISLOC_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::regularized_step(weights, grad, rate, l2);
#endif
    default: return scalar::regularized_step(weights, grad, rate, l2);
  }
}

double max_abs(std::span<const double> values) {
  switch (active_isa()) {
#if defined(CRISISLOC_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::max_abs(values);
#endif
#if defined(CRISISLOC_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::max_abs(values);
#endif
    default: return scalar::max_abs(values);
  }
}

}  // namespace crisisloc::kernels
