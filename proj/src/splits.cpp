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

#include "tplrec/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

namespace tplrec {

void SplitSpec::validate() const {
  if (!(query_fraction > 0.0 && query_fraction < 1.0)) {
    throw ConfigError(
        fmt::format("query fraction {} is outside (0,1)", query_fraction));
  }
  if (folds < 2) throw ConfigError("fold count must be at least 2");
}

std::vector<UserFold> split_users(const InteractionDataset& ds,
                                  const SplitSpec& spec) {
  spec.validate();
  if (spec.mode != SplitMode::kUserSplit) {
    throw ConfigError("split_users requires user-split mode");
  }
  const std::size_t n = ds.num_projects();
  if (spec.folds > n) {
    throw ConfigError(
        fmt::format("{} folds requested for {} projects", spec.folds, n));
  }
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(mix_seed(spec.seed, 0x5eed));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<UserFold> folds(spec.folds);
  for (unsigned f = 0; f < spec.folds; ++f) {
    const std::size_t begin = f * n / spec.folds;
    const std::size_t end = (f + 1) * n / spec.folds;
    auto& fold = folds[f];
    fold.test_projects.assign(order.begin() + begin, order.begin() + end);
    fold.train_projects.reserve(n - (end - begin));
    fold.train_projects.insert(fold.train_projects.end(), order.begin(),
                               order.begin() + begin);
    fold.train_projects.insert(fold.train_projects.end(), order.begin() + end,
                               order.end());
    std::sort(fold.test_projects.begin(), fold.test_projects.end());
    std::sort(fold.train_projects.begin(), fold.train_projects.end());
  }
  return folds;
}

std::size_t query_size(std::size_t n, double fraction) {
  const auto rounded = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 0.5 + 1e-9));
  return std::min(std::max<std::size_t>(1, rounded), n - 1);
}

std::optional<QueryTestSplit> split_query_test(std::span<const Index> items,
                                               double fraction,
                                               std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError(
        fmt::format("query fraction {} is outside (0,1)", fraction));
  }
  if (items.size() < 2) return std::nullopt;
  std::vector<Index> shuffled(items.begin(), items.end());
  Rng rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t q = query_size(shuffled.size(), fraction);
  QueryTestSplit split;
  split.query.assign(shuffled.begin(), shuffled.begin() + q);
  split.test.assign(shuffled.begin() + q, shuffled.end());
  std::sort(split.query.begin(), split.query.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<ProjectSplit> split_interactions(const InteractionDataset& ds,
                                             double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError(
        fmt::format("train fraction {} is outside (0,1)", train_fraction));
  }
  std::vector<ProjectSplit> out(ds.num_projects());
  for (Index p = 0; p < ds.num_projects(); ++p) {
    const auto items = ds.items(p);
    if (items.size() < 2) {
      out[p].train.assign(items.begin(), items.end());
      continue;
    }
    // Train share is the complement of a "query" of the test share.
    auto split = split_query_test(items, train_fraction, mix_seed(seed, p));
    out[p].train = std::move(split->query);
    out[p].test = std::move(split->test);
  }
  return out;
}

namespace {

std::vector<bool> seen_libraries(const InteractionDataset& train) {
  std::vector<bool> seen(train.num_libraries(), false);
  for (const auto& items : train.items_by_project()) {
    for (Index i : items) seen[i] = true;
  }
  return seen;
}

std::vector<Index> keep_seen(std::span<const Index> items,
                             const std::vector<bool>& seen) {
  std::vector<Index> out;
  for (Index i : items) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

FoldData make_coldstart_fold(const InteractionDataset& ds, const UserFold& fold,
                             unsigned fold_index, double query_fraction,
                             std::uint64_t seed) {
  FoldData data;
  data.fold = fold_index;
  data.train = ds.subset(fold.train_projects);
  const auto seen = seen_libraries(data.train);
  for (Index p : fold.test_projects) {
    const auto usable = keep_seen(ds.items(p), seen);
    auto split = split_query_test(usable, query_fraction, mix_seed(seed, p));
    if (!split) {
      spdlog::warn("fold {}: project '{}' has {} usable libraries, skipped",
                   fold_index, ds.project_ids()[p], usable.size());
      ++data.skipped;
      continue;
    }
    data.tests.push_back({p, std::move(split->query), std::move(split->test)});
  }
  return data;
}

FoldData make_interaction_fold(const InteractionDataset& ds,
                               unsigned fold_index, double train_fraction,
                               std::uint64_t seed) {
  auto splits = split_interactions(ds, train_fraction, seed);
  std::vector<std::vector<Index>> train_items(splits.size());
  for (std::size_t p = 0; p < splits.size(); ++p) {
    train_items[p] = splits[p].train;
  }
  FoldData data;
  data.fold = fold_index;
  data.train = ds.with_items(std::move(train_items));
  const auto seen = seen_libraries(data.train);
  for (Index p = 0; p < splits.size(); ++p) {
    if (splits[p].test.empty()) continue;
    auto truth = keep_seen(splits[p].test, seen);
    if (truth.empty()) {
      ++data.skipped;
      continue;
    }
    data.tests.push_back({p, std::move(splits[p].train), std::move(truth)});
  }
  return data;
}

void write_split_manifest(std::ostream& out, const InteractionDataset& ds,
                          const FoldData& fold) {
  auto line = [&](std::string_view role, const std::string& project,
                  std::span<const Index> items) {
    out << fold.fold << '\t' << role << '\t' << project;
    for (Index i : items) out << '\t' << ds.library_ids()[i];
    out << '\n';
  };
  for (Index p = 0; p < fold.train.num_projects(); ++p) {
    line("train", fold.train.project_ids()[p], fold.train.items(p));
  }
  for (const auto& t : fold.tests) {
    line("query", ds.project_ids()[t.project], t.query);
    line("test", ds.project_ids()[t.project], t.truth);
  }
}

}  // namespace tplrec
