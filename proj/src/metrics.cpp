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

#include "tplrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tplrec {

namespace {

bool contains(std::span<const Index> items, Index x) {
  return std::find(items.begin(), items.end(), x) != items.end();
}

}  // namespace

std::optional<PrecisionRecall> precision_recall_at_k(
    std::span<const Index> recommended, std::span<const Index> truth,
    std::size_t k) {
  if (truth.empty() || k == 0) return std::nullopt;
  const std::size_t n = std::min(k, recommended.size());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r) hits += contains(truth, recommended[r]);
  const double h = static_cast<double>(hits);
  return PrecisionRecall{100.0 * h / static_cast<double>(k),
                         100.0 * h / static_cast<double>(truth.size())};
}

double epc_at_k(std::span<const std::vector<Index>> recommended,
                std::span<const std::vector<Index>> truth,
                const PopularityTable& pop, std::size_t k,
                bool rank_discounted) {
  double novelty = 0.0;
  double relevant = 0.0;
  for (std::size_t u = 0; u < recommended.size() && u < truth.size(); ++u) {
    const auto& rec = recommended[u];
    const std::size_t n = std::min(k, rec.size());
    for (std::size_t r = 0; r < n; ++r) {
      if (!contains(truth[u], rec[r])) continue;
      const double disc =
          rank_discounted ? 1.0 / std::log2(static_cast<double>(r) + 2.0) : 1.0;
      novelty += disc * (1.0 - pop.rate(rec[r]));
      relevant += disc;
    }
  }
  return relevant > 0.0 ? 100.0 * novelty / relevant : 0.0;
}

double coverage_at_k(std::span<const std::vector<Index>> recommended,
                     std::size_t num_libraries, std::size_t k) {
  if (num_libraries == 0) return 0.0;
  std::unordered_set<Index> seen;
  for (const auto& rec : recommended) {
    const std::size_t n = std::min(k, rec.size());
    seen.insert(rec.begin(), rec.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return 100.0 * static_cast<double>(seen.size()) /
         static_cast<double>(num_libraries);
}

}  // namespace tplrec
