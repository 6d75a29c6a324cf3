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

#include "tplrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

namespace tplrec {

namespace {

struct Slices {
  std::vector<std::vector<Index>> members;
  std::vector<std::vector<double>> weights;
};

Slices make_slices(Index first, std::size_t count, std::size_t communities,
                   double zipf) {
  Slices s;
  s.members.resize(communities);
  s.weights.resize(communities);
  for (std::size_t c = 0; c < communities; ++c) {
    const std::size_t begin = c * count / communities;
    const std::size_t end = (c + 1) * count / communities;
    for (std::size_t r = begin; r < end; ++r) {
      s.members[c].push_back(static_cast<Index>(first + r));
      s.weights[c].push_back(
          1.0 / std::pow(static_cast<double>(r - begin + 1), zipf));
    }
  }
  return s;
}

// Adds `picks` distinct community-structured libraries to `chosen`.
void draw_structured(std::set<Index>& chosen, std::size_t picks,
                     std::size_t community, const Slices& slices,
                     double noise, Rng& rng) {
  const std::size_t communities = slices.members.size();
  std::bernoulli_distribution off(noise);
  const std::size_t target = chosen.size() + picks;
  std::size_t guard = 0;
  while (chosen.size() < target && guard++ < 100000) {
    std::size_t c = community;
    if (communities > 1 && off(rng)) {
      c = (community + 1 + uniform_index(rng, communities - 1)) % communities;
    }
    const auto& w = slices.weights[c];
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    chosen.insert(slices.members[c][pick(rng)]);
  }
}

InteractionDataset assemble(std::vector<std::set<Index>> chosen,
                            std::size_t libraries) {
  std::vector<std::string> projects;
  std::vector<std::string> libs;
  std::vector<std::vector<Index>> items;
  for (std::size_t p = 0; p < chosen.size(); ++p) {
    projects.push_back(fmt::format("p{:04}", p));
    items.emplace_back(chosen[p].begin(), chosen[p].end());
  }
  for (std::size_t i = 0; i < libraries; ++i) {
    libs.push_back(fmt::format("lib{:04}", i));
  }
  return InteractionDataset(std::move(projects), std::move(libs),
                            std::move(items));
}

}  // namespace

InteractionDataset planted_communities(const PlantedConfig& cfg) {
  if (cfg.communities == 0 || cfg.libraries < cfg.communities ||
      cfg.per_project == 0 ||
      cfg.per_project > cfg.libraries / cfg.communities) {
    throw ConfigError("planted dataset: inconsistent sizes");
  }
  Rng rng(cfg.seed);
  const Slices slices = make_slices(0, cfg.libraries, cfg.communities, cfg.zipf);
  std::vector<std::set<Index>> chosen(cfg.projects);
  for (Index p = 0; p < cfg.projects; ++p) {
    draw_structured(chosen[p], cfg.per_project,
                    planted_community(p, cfg.communities), slices, cfg.noise,
                    rng);
  }
  return assemble(std::move(chosen), cfg.libraries);
}

InteractionDataset head_tail(const HeadTailConfig& cfg) {
  if (cfg.communities == 0 || cfg.tail < cfg.communities ||
      cfg.tail_per_project == 0 ||
      cfg.tail_per_project > cfg.tail / cfg.communities) {
    throw ConfigError("head/tail dataset: inconsistent sizes");
  }
  Rng rng(cfg.seed);
  const Slices slices = make_slices(static_cast<Index>(cfg.head), cfg.tail,
                                    cfg.communities, cfg.zipf);
  std::bernoulli_distribution use_head(cfg.head_rate);
  std::vector<std::set<Index>> chosen(cfg.projects);
  for (Index p = 0; p < cfg.projects; ++p) {
    for (Index h = 0; h < cfg.head; ++h) {
      if (use_head(rng)) chosen[p].insert(h);
    }
    draw_structured(chosen[p], cfg.tail_per_project,
                    planted_community(p, cfg.communities), slices, cfg.noise,
                    rng);
  }
  return assemble(std::move(chosen), cfg.head + cfg.tail);
}

void write_interactions(std::ostream& out, const InteractionDataset& ds) {
  for (Index p = 0; p < ds.num_projects(); ++p) {
    for (Index i : ds.items(p)) {
      out << ds.project_ids()[p] << '\t' << ds.library_ids()[i] << '\n';
    }
  }
}

}  // namespace tplrec
