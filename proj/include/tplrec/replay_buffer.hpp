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

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tplrec/common.hpp"
#include "tplrec/popularity.hpp"

namespace tplrec {

// One recommendation step replayed from historical usage.
struct Transition {
  Eigen::VectorXd state;
  Index action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
  Index project = 0;  // training project the step was drawn from
};

using TransitionPtr = std::shared_ptr<const Transition>;

enum class Partition : std::uint8_t { kRare = 0, kRandom = 1, kSequential = 2 };

struct BufferConfig {
  std::size_t capacity = 100000;
  double mu_rare = 0.2;
  double mu_rand = 0.5;
  double mu_seq = 0.3;

  // Ratios must be non-negative and sum to one.
  void validate() const;
  std::array<double, 3> ratios() const { return {mu_rare, mu_rand, mu_seq}; }
};

struct SampledTransition {
  TransitionPtr transition;
  Partition partition;
};

// Replay memory split into
//   rare:       FIFO of transitions whose action is rare in training,
//   random:     reservoir sample over every inserted transition,
//   sequential: fresh transitions replayed round-robin over projects.
class ReplayBuffer {
 public:
  ReplayBuffer(const BufferConfig& cfg, PopularityTable pop,
               std::uint64_t seed);

  void insert(Transition t);

  // round(mu_x * B) draws per partition; the rounding remainder and the
  // quota of any empty partition go to the random partition (or, if that
  // is empty, the next non-empty one). Throws DataError when all
  // partitions are empty.
  std::array<std::size_t, 3> quotas(std::size_t batch_size) const;
  std::vector<SampledTransition> sample(std::size_t batch_size);

  std::size_t size(Partition p) const;
  std::size_t capacity(Partition p) const;
  std::vector<TransitionPtr> contents(Partition p) const;
  const PopularityTable& popularity() const { return pop_; }
  const BufferConfig& config() const { return cfg_; }

 private:
  struct ProjectQueue {
    std::deque<TransitionPtr> items;  // oldest first
    std::size_t offset = 0;           // draws since the last insertion
  };

  TransitionPtr next_sequential();

  BufferConfig cfg_;
  PopularityTable pop_;
  Rng rng_;
  std::array<std::size_t, 3> capacity_{};

  std::deque<TransitionPtr> rare_;
  std::vector<TransitionPtr> random_;
  std::uint64_t random_seen_ = 0;

  std::deque<TransitionPtr> seq_order_;
  std::vector<Index> seq_projects_;  // arrival order
  std::unordered_map<Index, ProjectQueue> seq_queues_;
  std::size_t seq_cursor_ = 0;
};

}  // namespace tplrec
