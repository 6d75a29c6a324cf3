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

#include "tplrec/replay_buffer.hpp"

#include <cmath>

#include <fmt/core.h>

namespace tplrec {

void BufferConfig::validate() const {
  if (capacity == 0) throw ConfigError("buffer capacity must be positive");
  if (mu_rare < 0.0 || mu_rand < 0.0 || mu_seq < 0.0 ||
      std::abs(mu_rare + mu_rand + mu_seq - 1.0) > 1e-9) {
    throw ConfigError(fmt::format(
        "partition ratios ({}, {}, {}) must be non-negative and sum to 1",
        mu_rare, mu_rand, mu_seq));
  }
}

ReplayBuffer::ReplayBuffer(const BufferConfig& cfg, PopularityTable pop,
                           std::uint64_t seed)
    : cfg_(cfg), pop_(std::move(pop)), rng_(seed) {
  cfg_.validate();
  const auto mu = cfg_.ratios();
  for (std::size_t k = 0; k < 3; ++k) {
    capacity_[k] = static_cast<std::size_t>(
        std::floor(mu[k] * static_cast<double>(cfg_.capacity) + 1e-9));
  }
}

void ReplayBuffer::insert(Transition t) {
  auto ptr = std::make_shared<const Transition>(std::move(t));

  const std::size_t rare_cap = capacity_[0];
  if (rare_cap > 0 && pop_.is_rare(ptr->action)) {
    if (rare_.size() == rare_cap) rare_.pop_front();
    rare_.push_back(ptr);
  }

  const std::size_t rand_cap = capacity_[1];
  if (rand_cap > 0) {
    ++random_seen_;
    if (random_.size() < rand_cap) {
      random_.push_back(ptr);
    } else {
      const auto slot = std::uniform_int_distribution<std::uint64_t>(
          0, random_seen_ - 1)(rng_);
      if (slot < rand_cap) random_[slot] = ptr;
    }
  }

  const std::size_t seq_cap = capacity_[2];
  if (seq_cap > 0) {
    if (seq_order_.size() == seq_cap) {
      const auto& oldest = seq_order_.front();
      auto& queue = seq_queues_.at(oldest->project);
      queue.items.pop_front();
      seq_order_.pop_front();
    }
    auto [it, inserted] = seq_queues_.try_emplace(ptr->project);
    if (inserted) seq_projects_.push_back(ptr->project);
    it->second.items.push_back(ptr);
    it->second.offset = 0;
    seq_order_.push_back(ptr);
  }
}

std::array<std::size_t, 3> ReplayBuffer::quotas(std::size_t batch_size) const {
  const auto mu = cfg_.ratios();
  const std::array<std::size_t, 3> sizes = {rare_.size(), random_.size(),
                                            seq_order_.size()};
  if (sizes[0] + sizes[1] + sizes[2] == 0) {
    throw DataError("cannot sample from an empty replay buffer");
  }
  std::array<std::size_t, 3> q{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    q[k] = static_cast<std::size_t>(
        std::llround(mu[k] * static_cast<double>(batch_size)));
    q[k] = std::min(q[k], batch_size - assigned);
    assigned += q[k];
  }
  q[1] += batch_size - assigned;

  std::size_t orphaned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (sizes[k] == 0) {
      orphaned += q[k];
      q[k] = 0;
    }
  }
  for (std::size_t k : {1, 2, 0}) {
    if (sizes[k] > 0) {
      q[k] += orphaned;
      break;
    }
  }
  return q;
}

TransitionPtr ReplayBuffer::next_sequential() {
  // Advance to the next project that still holds transitions.
  while (true) {
    const Index project = seq_projects_[seq_cursor_ % seq_projects_.size()];
    ++seq_cursor_;
    auto& queue = seq_queues_.at(project);
    if (queue.items.empty()) continue;
    const std::size_t n = queue.items.size();
    // Newest first, then progressively older ones.
    const std::size_t pos = n - 1 - (queue.offset % n);
    ++queue.offset;
    return queue.items[pos];
  }
}

std::vector<SampledTransition> ReplayBuffer::sample(std::size_t batch_size) {
  const auto q = quotas(batch_size);
  std::vector<SampledTransition> batch;
  batch.reserve(batch_size);
  for (std::size_t k = 0; k < q[0]; ++k) {
    batch.push_back({rare_[uniform_index(rng_, rare_.size())], Partition::kRare});
  }
  for (std::size_t k = 0; k < q[1]; ++k) {
    batch.push_back(
        {random_[uniform_index(rng_, random_.size())], Partition::kRandom});
  }
  for (std::size_t k = 0; k < q[2]; ++k) {
    batch.push_back({next_sequential(), Partition::kSequential});
  }
  return batch;
}

std::size_t ReplayBuffer::size(Partition p) const {
  switch (p) {
    case Partition::kRare:
      return rare_.size();
    case Partition::kRandom:
      return random_.size();
    case Partition::kSequential:
      return seq_order_.size();
  }
  return 0;
}

std::size_t ReplayBuffer::capacity(Partition p) const {
  return capacity_[static_cast<std::size_t>(p)];
}

std::vector<TransitionPtr> ReplayBuffer::contents(Partition p) const {
  switch (p) {
    case Partition::kRare:
      return {rare_.begin(), rare_.end()};
    case Partition::kRandom:
      return random_;
    case Partition::kSequential:
      return {seq_order_.begin(), seq_order_.end()};
  }
  return {};
}

}  // namespace tplrec
