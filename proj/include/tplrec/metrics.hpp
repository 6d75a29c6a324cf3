// Copyright 2026 The TPLRec Authors.
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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tplrec/common.hpp"
#include "tplrec/popularity.hpp"

namespace tplrec {

struct PrecisionRecall {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
};

// P = |hits| / K * 100, R = |hits| / |truth| * 100 over the first K
// recommendations. Returns nullopt for an empty ground truth.
std::optional<PrecisionRecall> precision_recall_at_k(
    std::span<const Index> recommended, std::span<const Index> truth,
    std::size_t k);

// Expected Popularity Complement: mean of (1 - rate) over the relevant
// items among the top-K lists, in percent; 0 when there are no hits.
// The rank-discounted variant weights position r (1-based) by
// 1 / log2(r + 1).
double epc_at_k(std::span<const std::vector<Index>> recommended,
                std::span<const std::vector<Index>> truth,
                const PopularityTable& pop, std::size_t k,
                bool rank_discounted = false);

// Percent of the catalog appearing in any top-K list.
double coverage_at_k(std::span<const std::vector<Index>> recommended,
                     std::size_t num_libraries, std::size_t k);

}  // namespace tplrec
