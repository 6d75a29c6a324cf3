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

#include "tplrec/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tplrec/adam.hpp"
#include "tplrec/ranking.hpp"

namespace tplrec {

double reward(const Eigen::VectorXd& state, Index action,
              const EmbeddingTable& table) {
  return 1.0 + table.libraries.row(action).dot(state);
}

std::optional<Transition> generate_transition(Index project,
                                              std::span<const Index> libraries,
                                              const EmbeddingTable& table,
                                              const RepresentativeTable& reps,
                                              Rng& rng) {
  const std::size_t n = libraries.size();
  if (n < 2) return std::nullopt;
  const std::size_t known = 1 + uniform_index(rng, n - 1);
  std::vector<Index> order(libraries.begin(), libraries.end());
  std::shuffle(order.begin(), order.end(), rng);
  const Index action = order[known + uniform_index(rng, n - known)];
  std::vector<Index> subset(order.begin(), order.begin() + known);

  Transition t;
  t.project = project;
  t.action = action;
  t.state = reps.aggregate(subset);
  t.reward = reward(t.state, action, table);
  subset.push_back(action);
  t.next_state = reps.aggregate(subset);
  t.terminal = subset.size() == n;
  return t;
}

namespace {

Eigen::Index argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index a = 1; a < v.size(); ++a) {
    if (v[a] > v[best]) best = a;
  }
  return best;
}

// Targets for a batch, evaluating both networks once on all next states.
Eigen::VectorXd batch_targets(std::span<const Transition* const> batch,
                              const QNetwork& online, const QNetwork& target,
                              double gamma) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  Eigen::VectorXd y(b);
  std::vector<Eigen::Index> live;
  for (Eigen::Index k = 0; k < b; ++k) {
    y[k] = batch[k]->reward;
    if (!batch[k]->terminal && gamma != 0.0) live.push_back(k);
  }
  if (live.empty()) return y;
  Eigen::MatrixXd next(online.input_dim(), live.size());
  for (std::size_t j = 0; j < live.size(); ++j) {
    next.col(static_cast<Eigen::Index>(j)) = batch[live[j]]->next_state;
  }
  const Eigen::MatrixXd q_online = online.forward(next).q;
  const Eigen::MatrixXd q_target = target.forward(next).q;
  for (std::size_t j = 0; j < live.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const Eigen::Index best = argmax_lowest(q_online.col(col));
    y[live[j]] += gamma * q_target(best, col);
  }
  return y;
}

}  // namespace

double q_target(const Transition& t, const QNetwork& online,
                const QNetwork& target, double gamma) {
  const Transition* ptr = &t;
  return batch_targets(std::span(&ptr, 1), online, target, gamma)[0];
}

CqlLoss cql_loss(std::span<const Transition* const> batch,
                 std::span<const double> weights, const QNetwork& online,
                 const QNetwork& target, double alpha, double gamma) {
  if (batch.empty()) throw DataError("empty CQL batch");
  if (weights.size() != batch.size()) {
    throw DataError("CQL weights do not match the batch");
  }
  const auto b = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd states(online.input_dim(), b);
  for (Eigen::Index k = 0; k < b; ++k) states.col(k) = batch[k]->state;

  const Eigen::VectorXd y = batch_targets(batch, online, target, gamma);
  const QForward fwd = online.forward(states);
  Eigen::MatrixXd dq(fwd.q.rows(), b);

  CqlLoss out;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < b; ++k) {
    const auto q = fwd.q.col(k);
    const Index a = batch[k]->action;
    const double w = weights[k];
    const double q_max = q.maxCoeff();
    const Eigen::VectorXd expq = (q.array() - q_max).exp();
    const double sum = expq.sum();
    const double lse = q_max + std::log(sum);
    const double gap = lse - q[a];
    const double td = y[k] - q[a];

    out.min_gap = std::min(out.min_gap, gap);
    out.regularizer += w * gap;
    out.bellman += w * td * td;
    out.mean_q += q[a] / static_cast<double>(b);

    dq.col(k) = (w * alpha / sum) * expq;
    dq(a, k) -= w * (alpha + td);
  }
  out.value = alpha * out.regularizer + 0.5 * out.bellman;
  if (!std::isfinite(out.value)) {
    throw NumericError(fmt::format("CQL loss is not finite ({})", out.value));
  }
  if (out.min_gap < -1e-9) {
    throw NumericError(
        fmt::format("CQL regularizer negative ({})", out.min_gap));
  }
  out.grad = online.backward(fwd, states, dq);
  return out;
}

std::vector<double> partition_weights(std::span<const SampledTransition> batch,
                                      const BufferConfig& cfg) {
  const auto mu = cfg.ratios();
  std::array<std::size_t, 3> counts{};
  for (const auto& s : batch) ++counts[static_cast<std::size_t>(s.partition)];
  double z = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (counts[k] > 0) z += mu[k];
  }
  std::vector<double> w(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto k = static_cast<std::size_t>(batch[j].partition);
    w[j] = z > 0.0 ? mu[k] / (z * static_cast<double>(counts[k]))
                   : 1.0 / static_cast<double>(batch.size());
  }
  return w;
}

void AgentConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError(fmt::format("gamma {} is outside [0,1]", gamma));
  }
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (!(learning_rate > 0.0)) throw ConfigError("agent lr must be positive");
  if (epochs == 0 || batch_size == 0 || hidden == 0 || delta_t == 0 ||
      target_sync == 0) {
    throw ConfigError("agent config: sizes must be positive");
  }
  buffer.validate();
}

AgentResult train_agent(const InteractionDataset& train,
                        const EmbeddingTable& table,
                        const RepresentativeTable& reps,
                        const PopularityTable& pop, const AgentConfig& cfg,
                        const std::function<void(const StepReport&)>& observer) {
  cfg.validate();
  Rng init_rng(mix_seed(cfg.seed, 1));
  QNetwork online(static_cast<std::size_t>(table.dim()), cfg.hidden,
                  train.num_libraries(), init_rng);
  QNetwork target = online;
  ReplayBuffer buffer(cfg.buffer, pop, mix_seed(cfg.seed, 2));
  Rng gen_rng(mix_seed(cfg.seed, 3));

  std::size_t per_epoch = 0;
  for (const auto& items : train.items_by_project()) {
    if (items.size() >= 2) per_epoch += items.size();
  }
  if (per_epoch == 0) {
    throw DataError("no training project has two or more libraries");
  }
  const std::size_t steps_per_epoch =
      cfg.updates_per_epoch > 0
          ? cfg.updates_per_epoch
          : (per_epoch + cfg.batch_size - 1) / cfg.batch_size;
  const double total_steps =
      static_cast<double>(steps_per_epoch) * static_cast<double>(cfg.epochs);

  std::array<AdamSlot, 6> slots;
  AgentResult result;
  std::int64_t step = 0;
  std::vector<const Transition*> ptrs;

  for (unsigned epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (Index p = 0; p < train.num_projects(); ++p) {
      const auto items = train.items(p);
      for (std::size_t k = 0; k < items.size(); ++k) {
        auto t = generate_transition(p, items, table, reps, gen_rng);
        if (!t) break;
        buffer.insert(std::move(*t));
      }
    }
    for (std::size_t s = 0; s < steps_per_epoch; ++s) {
      const double lr = 0.5 * cfg.learning_rate *
                        (1.0 + std::cos(std::numbers::pi *
                                        static_cast<double>(step) /
                                        total_steps));
      const auto batch = buffer.sample(cfg.batch_size);
      const auto weights = partition_weights(batch, cfg.buffer);
      ptrs.clear();
      for (const auto& st : batch) ptrs.push_back(st.transition.get());

      CqlLoss loss =
          cql_loss(ptrs, weights, online, target, cfg.alpha, cfg.gamma);
      ++step;
      auto params = online.params().tensors();
      auto grads = loss.grad.tensors();
      for (std::size_t k = 0; k < params.size(); ++k) {
        adam_update(*params[k], *grads[k], slots[k], lr, step);
      }
      if (!online.params().all_finite()) {
        throw NumericError(
            fmt::format("Q-network diverged at step {}", step));
      }
      if (step % cfg.target_sync == 0) target = online;

      result.curve.push_back({epoch, step, loss.value, lr, loss.mean_q});
      if (observer) observer({result.curve.back(), loss, buffer, batch});
    }
    spdlog::debug("agent epoch {} loss {:.5f}", epoch,
                  result.curve.back().loss);
  }
  result.network = std::move(online);
  return result;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "epoch,step,loss,lr,mean_q\n";
  for (const auto& c : curve) {
    out << fmt::format("{},{},{:.9g},{:.9g},{:.9g}\n", c.epoch, c.step, c.loss,
                       c.lr, c.mean_q);
  }
}

std::vector<Recommendation> recommend(std::span<const Index> query,
                                      std::size_t k, const QNetwork& net,
                                      const RepresentativeTable& reps,
                                      RecommendMode mode, unsigned delta_t) {
  if (query.empty()) throw DataError("recommendation needs a non-empty query");
  if (k == 0) throw ConfigError("K must be at least 1");
  std::vector<bool> allowed = reps.availability();
  for (Index i : query) {
    if (i >= allowed.size()) throw DataError("query library out of range");
    allowed[i] = false;
  }
  const auto remaining =
      static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), true));
  if (k > remaining) {
    spdlog::warn("requested {} recommendations, only {} candidates", k,
                 remaining);
    k = remaining;
  }

  std::vector<Index> known(query.begin(), query.end());
  std::vector<Recommendation> out;
  out.reserve(k);
  if (mode == RecommendMode::kOneShot) {
    const Eigen::VectorXd q = net.q_values(reps.aggregate(known));
    for (Index a : top_k(q, allowed, k)) out.push_back({a, q[a]});
    return out;
  }
  Eigen::VectorXd q;
  for (std::size_t step = 0; step < k; ++step) {
    if (step < delta_t || q.size() == 0) q = net.q_values(reps.aggregate(known));
    const Index a = top_k(q, allowed, 1).front();
    out.push_back({a, q[a]});
    allowed[a] = false;
    known.push_back(a);
  }
  return out;
}

}  // namespace tplrec
