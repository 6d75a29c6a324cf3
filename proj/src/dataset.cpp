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

#include "tplrec/dataset.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/core.h>

namespace tplrec {

InteractionDataset::InteractionDataset(
    std::vector<std::string> project_ids, std::vector<std::string> library_ids,
    std::vector<std::vector<Index>> items_by_project)
    : project_ids_(std::move(project_ids)),
      library_ids_(std::move(library_ids)),
      items_by_project_(std::move(items_by_project)) {
  if (items_by_project_.size() != project_ids_.size()) {
    throw DataError("interaction lists do not match project count");
  }
  for (std::size_t p = 0; p < items_by_project_.size(); ++p) {
    auto& items = items_by_project_[p];
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    if (items.empty()) {
      throw DataError(
          fmt::format("project '{}' has no interactions", project_ids_[p]));
    }
    if (items.back() >= library_ids_.size()) {
      throw DataError(fmt::format("project '{}' references library index {}",
                                  project_ids_[p], items.back()));
    }
    num_interactions_ += items.size();
  }
  library_lookup_.reserve(library_ids_.size());
  for (std::size_t i = 0; i < library_ids_.size(); ++i) {
    library_lookup_.emplace(library_ids_[i], static_cast<Index>(i));
  }
}

std::optional<Index> InteractionDataset::library_index(
    std::string_view id) const {
  auto it = library_lookup_.find(std::string(id));
  if (it == library_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<Interaction> InteractionDataset::interactions() const {
  std::vector<Interaction> out;
  out.reserve(num_interactions_);
  for (std::size_t p = 0; p < items_by_project_.size(); ++p) {
    for (Index i : items_by_project_[p]) {
      out.push_back({static_cast<Index>(p), i});
    }
  }
  return out;
}

std::vector<std::vector<Index>> InteractionDataset::users_by_library() const {
  std::vector<std::vector<Index>> users(library_ids_.size());
  for (std::size_t p = 0; p < items_by_project_.size(); ++p) {
    for (Index i : items_by_project_[p]) {
      users[i].push_back(static_cast<Index>(p));
    }
  }
  return users;
}

InteractionDataset InteractionDataset::subset(
    std::span<const Index> projects) const {
  std::vector<std::string> ids;
  std::vector<std::vector<Index>> items;
  ids.reserve(projects.size());
  items.reserve(projects.size());
  for (Index p : projects) {
    ids.push_back(project_ids_.at(p));
    items.push_back(items_by_project_.at(p));
  }
  return InteractionDataset(std::move(ids), library_ids_, std::move(items));
}

InteractionDataset InteractionDataset::with_items(
    std::vector<std::vector<Index>> items_by_project) const {
  if (items_by_project.size() != project_ids_.size()) {
    throw DataError("interaction lists do not match project count");
  }
  std::vector<std::string> ids;
  std::vector<std::vector<Index>> kept;
  for (std::size_t p = 0; p < items_by_project.size(); ++p) {
    if (items_by_project[p].empty()) continue;
    ids.push_back(project_ids_[p]);
    kept.push_back(std::move(items_by_project[p]));
  }
  return InteractionDataset(std::move(ids), library_ids_, std::move(kept));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

IngestResult ingest(std::istream& in) {
  std::vector<std::string> project_ids;
  std::vector<std::string> library_ids;
  std::unordered_map<std::string, Index> project_lookup;
  std::unordered_map<std::string, Index> library_lookup;
  std::vector<std::vector<Index>> items;
  IngestResult result;

  auto intern = [](std::unordered_map<std::string, Index>& lookup,
                   std::vector<std::string>& ids, std::string_view id) {
    auto [it, inserted] =
        lookup.try_emplace(std::string(id), static_cast<Index>(ids.size()));
    if (inserted) ids.emplace_back(id);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw DataError(fmt::format(
          "line {}: expected <project-id><TAB><library-id>", line_no));
    }
    const auto project = trim(line.substr(0, tab));
    const auto library = trim(line.substr(tab + 1));
    if (project.empty() || library.empty()) {
      throw DataError(fmt::format("line {}: empty identifier", line_no));
    }
    const Index p = intern(project_lookup, project_ids, project);
    const Index i = intern(library_lookup, library_ids, library);
    if (p == items.size()) items.emplace_back();
    items[p].push_back(i);
    ++result.records;
  }
  if (result.records == 0) {
    throw DataError("dataset contains no interactions");
  }
  result.dataset = InteractionDataset(std::move(project_ids),
                                      std::move(library_ids), std::move(items));
  result.duplicates = result.records - result.dataset.num_interactions();
  return result;
}

IngestResult ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  return ingest(in);
}

std::vector<std::size_t> usage_histogram(const InteractionDataset& ds) {
  std::vector<std::size_t> per_library(ds.num_libraries(), 0);
  for (const auto& items : ds.items_by_project()) {
    for (Index i : items) ++per_library[i];
  }
  const std::size_t max_count =
      per_library.empty()
          ? 0
          : *std::max_element(per_library.begin(), per_library.end());
  std::vector<std::size_t> hist(max_count + 1, 0);
  for (std::size_t c : per_library) ++hist[c];
  return hist;
}

}  // namespace tplrec
