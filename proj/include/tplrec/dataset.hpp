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
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tplrec/common.hpp"

namespace tplrec {

struct Interaction {
  Index project;
  Index library;

  friend bool operator==(const Interaction&, const Interaction&) = default;
  friend auto operator<=>(const Interaction&, const Interaction&) = default;
};

// Bipartite project-library usage records. Projects and libraries are
// interned to dense indices; each project holds a sorted, duplicate-free
// library list with at least one entry.
class InteractionDataset {
 public:
  InteractionDataset() = default;

  // Throws DataError if an index is out of range or a project has no
  // libraries. Duplicates are collapsed.
  InteractionDataset(std::vector<std::string> project_ids,
                     std::vector<std::string> library_ids,
                     std::vector<std::vector<Index>> items_by_project);

  std::size_t num_projects() const { return project_ids_.size(); }
  std::size_t num_libraries() const { return library_ids_.size(); }
  std::size_t num_interactions() const { return num_interactions_; }

  std::span<const Index> items(Index project) const {
    return items_by_project_[project];
  }
  const std::vector<std::vector<Index>>& items_by_project() const {
    return items_by_project_;
  }
  const std::vector<std::string>& project_ids() const { return project_ids_; }
  const std::vector<std::string>& library_ids() const { return library_ids_; }

  std::optional<Index> library_index(std::string_view id) const;

  // All (project, library) pairs in project-major order.
  std::vector<Interaction> interactions() const;

  // Projects that used each library.
  std::vector<std::vector<Index>> users_by_library() const;

  // Dataset restricted to the given projects (renumbered in the given
  // order). The library catalog is kept whole so indices stay comparable.
  InteractionDataset subset(std::span<const Index> projects) const;

  // Same projects and catalog with replaced interaction lists. Projects
  // left empty are dropped.
  InteractionDataset with_items(
      std::vector<std::vector<Index>> items_by_project) const;

 private:
  std::vector<std::string> project_ids_;
  std::vector<std::string> library_ids_;
  std::vector<std::vector<Index>> items_by_project_;
  std::unordered_map<std::string, Index> library_lookup_;
  std::size_t num_interactions_ = 0;
};

struct IngestResult {
  InteractionDataset dataset;
  std::size_t records = 0;     // data lines read
  std::size_t duplicates = 0;  // lines collapsed as repeats
};

// Parses `<project-id>\t<library-id>` lines. Blank lines and lines starting
// with '#' are skipped. Identifiers are interned in first-appearance order.
// Throws DataError naming the line for malformed input, or if no
// interactions were read.
IngestResult ingest(std::istream& in);
IngestResult ingest_file(const std::string& path);

// Number of libraries per usage count: result[c] = #libraries used by
// exactly c projects.
std::vector<std::size_t> usage_histogram(const InteractionDataset& ds);

}  // namespace tplrec
