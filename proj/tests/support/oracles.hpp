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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "crisisloc/common.hpp"
#include "crisisloc/ingest.hpp"
#include "crisisloc/model.hpp"

// Naive reference implementations, written without reusing
// library code paths.
namespace crisisloc::testing {

// Log posterior odds log P(IR|x) - log P(OR|x) for multinomial NB with
// Laplace smoothing, computed from explicit probability products.
double brute_nb_score(std::span<const LabeledVector> train, const FeatureVector& x, double alpha);

// Fraction of (IR, OR) pairs where the IR score is higher, ties one half.
double pairwise_auc(std::span<const double> scores, std::span<const Label> truth);

// Jensen-Shannon divergence in bits via the two KL terms against the mixture.
double brute_jsd(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

// Great-circle distance by the spherical law of cosines.
double law_of_cosines_km(GeoPoint a, GeoPoint b);

}  // namespace crisisloc::testing
