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

#include <cstdint>
#include <ostream>

#include "tplrec/dataset.hpp"

namespace tplrec {

// Projects belong to one of `communities` groups, each owning an equal slice
// of the catalog. Every pick comes from the project's own slice with
// probability 1 - noise, otherwise from another slice; within a slice,
// library r is drawn with weight 1 / (r + 1)^zipf.
struct PlantedConfig {
  std::size_t projects = 200;
  std::size_t libraries = 200;
  std::size_t communities = 4;
  std::size_t per_project = 20;
  double noise = 0.1;
  double zipf = 1.0;
  std::uint64_t seed = 0;
};

InteractionDataset planted_communities(const PlantedConfig& cfg);

// `head` libraries each used independently with probability head_rate,
// plus `tail_per_project` community-structured picks from the tail slice.
// Small communities with skewed pools give each community a few tail
// libraries that nearly all of its members use.
struct HeadTailConfig {
  std::size_t projects = 200;
  std::size_t head = 20;
  std::size_t tail = 180;
  double head_rate = 0.65;
  std::size_t tail_per_project = 8;
  std::size_t communities = 10;
  double noise = 0.1;
  double zipf = 1.0;
  std::uint64_t seed = 0;
};

InteractionDataset head_tail(const HeadTailConfig& cfg);

// Community of a project generated by either function.
inline std::size_t planted_community(Index project, std::size_t communities) {
  return project % communities;
}

// Writes the dataset in the tab-separated ingest format.
void write_interactions(std::ostream& out, const InteractionDataset& ds);

}  // namespace tplrec
