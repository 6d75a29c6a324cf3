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
#include <vector>

#include "tplrec/dataset.hpp"

namespace tplrec {

inline constexpr double kDefaultRareThreshold = 0.1;
inline constexpr double kDefaultPopularThreshold = 0.9;

// Per-library usage counts and rates over a training split.
// rate(i) = |projects using i| / N_train.
struct PopularityTable {
  std::vector<std::size_t> counts;
  std::vector<double> rates;
  std::size_t num_projects = 0;
  double rare_threshold = kDefaultRareThreshold;
  double popular_threshold = kDefaultPopularThreshold;

  double rate(Index library) const { return rates[library]; }
  bool is_rare(Index library) const { return rates[library] < rare_threshold; }
  bool is_popular(Index library) const {
    return rates[library] > popular_threshold;
  }
};

PopularityTable popularity(const InteractionDataset& train,
                           double rare_threshold = kDefaultRareThreshold,
                           double popular_threshold = kDefaultPopularThreshold);

}  // namespace tplrec
