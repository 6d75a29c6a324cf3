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
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "tplrec/dataset.hpp"

namespace tplrec {

enum class SplitMode { kUserSplit, kInteractionSplit };

struct SplitSpec {
  SplitMode mode = SplitMode::kUserSplit;
  double query_fraction = 0.5;  // share of a test project's list given as query
  unsigned folds = 10;
  std::uint64_t seed = 0;

  // Throws ConfigError unless query_fraction is in (0,1) and folds >= 2.
  void validate() const;
};

struct UserFold {
  std::vector<Index> train_projects;
  std::vector<Index> test_projects;
};

// Seeded k-fold partition of the projects. Throws ConfigError if the spec
// is invalid, not a user split, or asks for more folds than projects.
std::vector<UserFold> split_users(const InteractionDataset& ds,
                                  const SplitSpec& spec);

// max(1, round-half-up(fraction * n)), capped at n - 1.
std::size_t query_size(std::size_t n, double fraction);

struct QueryTestSplit {
  std::vector<Index> query;
  std::vector<Index> test;
};

// Uniform random query subset of a project's libraries; the rest is the
// test set. Returns nullopt when fewer than two libraries are given.
// Throws ConfigError if fraction is outside (0,1).
std::optional<QueryTestSplit> split_query_test(std::span<const Index> items,
                                               double fraction,
                                               std::uint64_t seed);

struct ProjectSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};

// Splits each project's own list. Single-interaction projects keep their
// only library in train and get an empty test set.
std::vector<ProjectSplit> split_interactions(const InteractionDataset& ds,
                                             double train_fraction,
                                             std::uint64_t seed);

// A project evaluated in a fold. `project` indexes the full dataset.
struct TestProject {
  Index project;
  std::vector<Index> query;
  std::vector<Index> truth;
};

struct FoldData {
  unsigned fold = 0;
  InteractionDataset train;
  std::vector<TestProject> tests;
  std::size_t skipped = 0;  // test projects that could not be evaluated
};

// Cold-start fold: train on whole train projects; each test project's
// libraries seen in training are split into query and ground truth.
FoldData make_coldstart_fold(const InteractionDataset& ds, const UserFold& fold,
                             unsigned fold_index, double query_fraction,
                             std::uint64_t seed);

// Interaction-split fold: every project trains on part of its list and is
// tested on the remainder (restricted to libraries seen in training).
FoldData make_interaction_fold(const InteractionDataset& ds,
                               unsigned fold_index, double train_fraction,
                               std::uint64_t seed);

// Lines of `fold<TAB>role<TAB>project-id<TAB>library-id...` with roles
// train, query and test.
void write_split_manifest(std::ostream& out, const InteractionDataset& ds,
                          const FoldData& fold);

}  // namespace tplrec
