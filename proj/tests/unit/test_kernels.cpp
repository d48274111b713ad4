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

#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "crisisloc/kernels.hpp"
#include "crisisloc/random.hpp"

using namespace crisisloc;
namespace k = crisisloc::kernels;

namespace {

struct Case {
  std::vector<std::uint32_t> idx;
  std::vector<double> vals;
  std::vector<double> table;
};

Case random_case(Rng& rng) {
  Case c;
  const std::size_t dims = 1 + uniform_below(rng, 300);
  const std::size_t nnz = uniform_below(rng, 70);
  for (std::size_t i = 0; i < dims; ++i) c.table.push_back(uniform_unit(rng) * 20.0 - 10.0);
  for (std::size_t i = 0; i < nnz; ++i) {
    c.idx.push_back(static_cast<std::uint32_t>(uniform_below(rng, dims)));
    c.vals.push_back(static_cast<double>(1 + uniform_below(rng, 5)));
  }
  return c;
}

std::vector<double> random_doubles(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform_unit(rng) * 2.0 - 1.0;
  return v;
}

template <typename Dot, typename Step, typename Max>
void check_variant(Dot dot, Step step, Max maxabs) {
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto c = random_case(rng);
    const double ref = k::scalar::gather_dot(c.idx, c.vals, c.table);
    const double got = dot(c.idx, c.vals, c.table);
    double mag = 0.0;
    for (std::size_t i = 0; i < c.idx.size(); ++i) mag += std::fabs(c.vals[i] * c.table[c.idx[i]]);
    CHECK(std::fabs(ref - got) <= 1e-12 * (1.0 + mag));

    const std::size_t n = uniform_below(rng, 40);
    auto w1 = random_doubles(rng, n);
    auto w2 = w1;
    const auto g = random_doubles(rng, n);
    const double d1 = k::scalar::regularized_step(w1, g, 0.3, 0.01);
    const double d2 = step(std::span<double>(w2), g, 0.3, 0.01);
    CHECK(d1 == d2);
    CHECK(w1 == w2);
    CHECK(k::scalar::max_abs(g) == maxabs(g));
  }
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference values") {
  const std::vector<std::uint32_t> idx{0, 2, 2};
  const std::vector<double> vals{1.0, 2.0, 3.0};
  const std::vector<double> table{0.5, 100.0, -1.0};
  CHECK(k::scalar::gather_dot(idx, vals, table) == doctest::Approx(0.5 - 5.0));
  std::vector<double> w{1.0, -2.0};
  const std::vector<double> g{0.5, 0.0};
  const double change = k::scalar::regularized_step(w, g, 0.1, 0.5);
  CHECK(w[0] == doctest::Approx(1.0 - 0.1 * (0.5 + 0.5)));
  CHECK(w[1] == doctest::Approx(-2.0 + 0.1));
  CHECK(change == doctest::Approx(0.1));
  CHECK(k::scalar::max_abs(std::vector<double>{}) == 0.0);
  CHECK(k::scalar::max_abs(std::vector<double>{-3.0, 2.0}) == 3.0);
}

#if defined(CRISISLOC_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 variant agrees with scalar") {
  if (k::best_supported_isa() != k::Isa::Avx2) {
    MESSAGE("AVX2 not supported on this CPU; skipped");
    return;
  }
  check_variant(k::avx2::gather_dot, k::avx2::regularized_step, k::avx2::max_abs);
}
#endif

#if defined(CRISISLOC_HAVE_NEON_KERNELS)
TEST_CASE("neon variant agrees with scalar") {
  check_variant(k::neon::gather_dot, k::neon::regularized_step, k::neon::max_abs);
}
#endif

TEST_CASE("dispatch") {
  const auto best = k::best_supported_isa();
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
  const std::vector<std::uint32_t> idx{1};
  const std::vector<double> vals{2.0};
  const std::vector<double> table{0.0, 4.0};
  CHECK(k::gather_dot(idx, vals, table) == 8.0);
  k::force_isa(best);
  CHECK(k::active_isa() == best);
  CHECK(k::gather_dot(idx, vals, table) == 8.0);
#if !defined(CRISISLOC_HAVE_NEON_KERNELS)
  CHECK_THROWS_AS(k::force_isa(k::Isa::Neon), std::invalid_argument);
#endif
}

}
