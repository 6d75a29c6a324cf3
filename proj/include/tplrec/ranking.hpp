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

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "tplrec/common.hpp"

namespace tplrec {

// Indices of the k highest scores among entries with allowed[i] == true,
// best first; ties go to the lower index.
inline std::vector<Index> top_k(const Eigen::Ref<const Eigen::VectorXd>& scores,
                                const std::vector<bool>& allowed,
                                std::size_t k) {
  std::vector<Index> candidates;
  candidates.reserve(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (allowed[static_cast<std::size_t>(i)]) {
      candidates.push_back(static_cast<Index>(i));
    }
  }
  k = std::min(k, candidates.size());
  auto better = [&](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + k,
                    candidates.end(), better);
  candidates.resize(k);
  return candidates;
}

}  // namespace tplrec
