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

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Dense arithmetic kernels behind model scoring and training.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (AArch64) variant. The variant is
// chosen once at runtime from CPU features; CRISISLOC_ISA=scalar in the
// environment forces the reference path.
//
// gather_dot reassociates its sum in the vector variants, so results agree
// with the scalar path to rounding only. regularized_step and max_abs are
// elementwise and agree bit for bit.
namespace crisisloc::kernels {

enum class Isa : std::uint8_t { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// Variant currently used by the dispatching entry points.
Isa active_isa();

// Best variant this CPU and build support.
Isa best_supported_isa();

// Overrides dispatch (tests, benchmarks). Throws std::invalid_argument when
// the requested variant is not supported here.
void force_isa(Isa isa);

// sum_k values[k] * table[indices[k]]
double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table);

// w[i] -= rate * (grad[i] + l2 * w[i]); returns max_i |change in w[i]|.
double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2);

double max_abs(std::span<const double> values);

// Per-variant entry points, exposed for equivalence tests.
namespace scalar {
double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table);
double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2);
double max_abs(std::span<const double> values);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CRISISLOC_HAVE_AVX2_KERNELS 1
namespace avx2 {
double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table);
double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2);
double max_abs(std::span<const double> values);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define CRISISLOC_HAVE_NEON_KERNELS 1
namespace neon {
double gather_dot(std::span<const std::uint32_t> indices, std::span<const double> values,
                  std::span<const double> table);
double regularized_step(std::span<double> weights, std::span<const double> grad, double rate,
                        double l2);
double max_abs(std::span<const double> values);
}  // namespace neon
#endif

}  // namespace crisisloc::kernels
