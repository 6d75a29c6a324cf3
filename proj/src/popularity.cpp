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

#include "tplrec/popularity.hpp"

namespace tplrec {

PopularityTable popularity(const InteractionDataset& train,
                           double rare_threshold, double popular_threshold) {
  PopularityTable table;
  table.num_projects = train.num_projects();
  table.rare_threshold = rare_threshold;
  table.popular_threshold = popular_threshold;
  table.counts.assign(train.num_libraries(), 0);
  for (const auto& items : train.items_by_project()) {
    for (Index i : items) ++table.counts[i];
  }
  table.rates.resize(table.counts.size());
  const double n = static_cast<double>(table.num_projects);
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    table.rates[i] = n > 0 ? static_cast<double>(table.counts[i]) / n : 0.0;
  }
  return table;
}

}  // namespace tplrec
