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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tplrec/coldstart.hpp"
#include "tplrec/dataset.hpp"
#include "tplrec/embedding.hpp"
#include "tplrec/popularity.hpp"
#include "tplrec/qnetwork.hpp"
#include "tplrec/replay_buffer.hpp"

namespace tplrec {

// r = 1 + e_action . state.
double reward(const Eigen::VectorXd& state, Index action,
              const EmbeddingTable& table);

// Samples a known subset of a training project's libraries (size uniform in
// 1..n-1, contents uniform), an unseen action from the rest, and the
// resulting reward and next state. Returns nullopt for fewer than two
// libraries.
std::optional<Transition> generate_transition(Index project,
                                              std::span<const Index> libraries,
                                              const EmbeddingTable& table,
                                              const RepresentativeTable& reps,
                                              Rng& rng);

// Double-DQN target: r for terminal steps, otherwise
// r + gamma * Q_target(s', argmax_a Q_online(s', a)).
double q_target(const Transition& t, const QNetwork& online,
                const QNetwork& target, double gamma);

struct CqlLoss {
  double value = 0.0;
  double bellman = 0.0;      // weighted mean of (y - Q(s,a))^2
  double regularizer = 0.0;  // weighted mean of logsumexp Q(s,.) - Q(s,a)
  double min_gap = 0.0;      // smallest per-sample logsumexp Q(s,.) - Q(s,a)
  double mean_q = 0.0;       // mean Q(s, a_data)
  QParams grad;
};

// alpha * E[logsumexp_a Q(s,a) - Q(s,a_t)] + 1/2 E[(y - Q(s,a_t))^2], with
// expectations taken under per-sample `weights` (summing to one). Targets
// come from q_target and are held constant. Throws NumericError on a
// non-finite value or a negative regularizer gap.
CqlLoss cql_loss(std::span<const Transition* const> batch,
                 std::span<const double> weights, const QNetwork& online,
                 const QNetwork& target, double alpha, double gamma);

// Per-sample weights realizing sum_x mu_x * mean-over-partition-x; ratios of
// partitions absent from the batch are renormalized away.
std::vector<double> partition_weights(std::span<const SampledTransition> batch,
                                      const BufferConfig& cfg);

struct AgentConfig {
  double gamma = 0.9;
  double alpha = 5.5;
  double learning_rate = 1e-3;
  unsigned epochs = 20;
  unsigned batch_size = 256;
  unsigned hidden = 256;
  unsigned delta_t = 10;
  unsigned target_sync = 500;
  // Gradient steps per epoch; 0 means ceil(transitions / batch_size).
  unsigned updates_per_epoch = 0;
  BufferConfig buffer;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CurvePoint {
  unsigned epoch = 0;
  std::int64_t step = 0;
  double loss = 0.0;
  double lr = 0.0;
  double mean_q = 0.0;
};

// Passed to the optional observer after every gradient step.
struct StepReport {
  const CurvePoint& point;
  const CqlLoss& loss;
  const ReplayBuffer& buffer;
  std::span<const SampledTransition> batch;
};

struct AgentResult {
  QNetwork network;
  std::vector<CurvePoint> curve;
};

// Offline training over the training projects: each epoch generates one
// transition per interaction, inserts them into the partitioned buffer and
// takes Adam steps on the weighted CQL objective with a cosine-annealed
// learning rate. Throws NumericError on divergence.
AgentResult train_agent(
    const InteractionDataset& train, const EmbeddingTable& table,
    const RepresentativeTable& reps, const PopularityTable& pop,
    const AgentConfig& cfg,
    const std::function<void(const StepReport&)>& observer = {});

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

enum class RecommendMode { kSequential, kOneShot };

struct Recommendation {
  Index library;
  double q;
};

// Greedy top-k from a query set. Sequential mode re-aggregates the state
// after every pick for the first `delta_t` steps; one-shot ranks once.
// Query members and libraries without a representative are never
// returned; the list is truncated (with a warning) when too few remain.
std::vector<Recommendation> recommend(std::span<const Index> query,
                                      std::size_t k, const QNetwork& net,
                                      const RepresentativeTable& reps,
                                      RecommendMode mode,
                                      unsigned delta_t = 10);

}  // namespace tplrec
