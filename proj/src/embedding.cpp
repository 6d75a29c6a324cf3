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

#include "tplrec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tplrec/adam.hpp"
#include "tplrec/binary_io.hpp"
#include "tplrec/ranking.hpp"

namespace tplrec {

NormAdjacency build_adjacency(const InteractionDataset& ds) {
  NormAdjacency adj;
  adj.num_projects = ds.num_projects();
  adj.num_libraries = ds.num_libraries();
  std::vector<double> library_degree(ds.num_libraries(), 0.0);
  for (const auto& items : ds.items_by_project()) {
    for (Index i : items) library_degree[i] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * ds.num_interactions());
  const auto n = static_cast<Eigen::Index>(ds.num_projects());
  for (Index u = 0; u < ds.num_projects(); ++u) {
    const auto items = ds.items(u);
    const double du = static_cast<double>(items.size());
    for (Index i : items) {
      const double w = 1.0 / std::sqrt(du * library_degree[i]);
      triplets.emplace_back(u, n + i, w);
      triplets.emplace_back(n + i, u, w);
    }
  }
  const auto v = static_cast<Eigen::Index>(adj.num_vertices());
  adj.matrix.resize(v, v);
  adj.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return adj;
}

Eigen::MatrixXd propagate(const NormAdjacency& adj, const Eigen::MatrixXd& ego,
                          unsigned layers) {
  Eigen::MatrixXd layer = ego;
  Eigen::MatrixXd sum = ego;
  for (unsigned k = 0; k < layers; ++k) {
    layer = adj.matrix * layer;
    sum += layer;
  }
  return sum / static_cast<double>(layers + 1);
}

void EmbeddingTable::normalize_rows() {
  for (Eigen::MatrixXd* m : {&projects, &libraries}) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      const double norm = m->row(r).norm();
      if (norm > 0.0) m->row(r) /= norm;
    }
  }
}

EmbeddingTable split_vertices(const Eigen::MatrixXd& vertices,
                              std::size_t num_projects) {
  const auto n = static_cast<Eigen::Index>(num_projects);
  EmbeddingTable t;
  t.projects = vertices.topRows(n);
  t.libraries = vertices.bottomRows(vertices.rows() - n);
  return t;
}

ContrastiveLoss debiased_contrastive_loss(
    std::span<const ContrastiveExample> batch, const Eigen::MatrixXd& vertices,
    std::size_t num_projects, const PopularityTable& pop, double tau,
    double beta) {
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw ConfigError("popularity attenuation must be in [0,1)");
  }
  ContrastiveLoss out;
  out.vertex_grad = Eigen::MatrixXd::Zero(vertices.rows(), vertices.cols());
  if (batch.empty()) return out;
  const auto n = static_cast<Eigen::Index>(num_projects);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  std::vector<Eigen::Index> rows;
  std::vector<double> cos;
  std::vector<double> prob;
  for (const auto& ex : batch) {
    const Eigen::Index u_row = ex.project;
    const Eigen::VectorXd u = vertices.row(u_row);
    const double u_norm = std::max(u.norm(), 1e-12);

    rows.clear();
    rows.push_back(n + ex.positive);
    for (Index j : ex.negatives) rows.push_back(n + j);

    cos.resize(rows.size());
    prob.resize(rows.size());
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto v = vertices.row(rows[k]);
      cos[k] = u.dot(v) / (u_norm * std::max(v.norm(), 1e-12));
      max_logit = std::max(max_logit, cos[k] / tau);
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      prob[k] = std::exp(cos[k] / tau - max_logit);
      denom += prob[k];
    }
    for (double& p : prob) p /= denom;
    const double weight = 1.0 - beta * pop.rate(ex.positive);
    const double log_sum = max_logit + std::log(denom);
    out.value += weight * (log_sum - cos[0] / tau) * inv_batch;

    // d loss / d cos_k = w * (p_k - [k == 0]) / tau, pushed through the
    // cosine to both endpoint rows.
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double g = weight * (prob[k] - (k == 0 ? 1.0 : 0.0)) / tau *
                       inv_batch;
      if (g == 0.0) continue;
      const Eigen::VectorXd v = vertices.row(rows[k]);
      const double v_norm = std::max(v.norm(), 1e-12);
      const double inv = 1.0 / (u_norm * v_norm);
      out.vertex_grad.row(u_row) +=
          g * (v * inv - cos[k] * u / (u_norm * u_norm)).transpose();
      out.vertex_grad.row(rows[k]) +=
          g * (u * inv - cos[k] * v / (v_norm * v_norm)).transpose();
    }
  }
  return out;
}

void EmbedConfig::validate() const {
  if (layers > 16 || dim == 0 || batch_size == 0 || negatives == 0 ||
      patience == 0 || max_epochs == 0) {
    throw ConfigError("embedding config: sizes must be positive");
  }
  if (!(learning_rate > 0.0) || !(l2 >= 0.0) || !(tau > 0.0) ||
      !(init_std > 0.0)) {
    throw ConfigError("embedding config: rates must be positive");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw ConfigError("embedding config: beta must be in [0,1)");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("embedding config: validation fraction outside [0,1)");
  }
}

namespace {

struct Holdout {
  InteractionDataset fit;
  std::vector<std::vector<Index>> held;  // per fit-project index
};

// Moves a seeded share of interactions out of training, never emptying a
// project.
Holdout make_holdout(const InteractionDataset& train, double fraction,
                     std::uint64_t seed) {
  auto all = train.interactions();
  Rng rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  const auto target = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(all.size())));
  std::vector<std::size_t> remaining(train.num_projects());
  for (Index p = 0; p < train.num_projects(); ++p) {
    remaining[p] = train.items(p).size();
  }
  std::vector<std::vector<Index>> held(train.num_projects());
  std::size_t taken = 0;
  for (const auto& it : all) {
    if (taken == target) break;
    if (remaining[it.project] < 2) continue;
    --remaining[it.project];
    held[it.project].push_back(it.library);
    ++taken;
  }
  std::vector<std::vector<Index>> fit(train.num_projects());
  for (Index p = 0; p < train.num_projects(); ++p) {
    auto& h = held[p];
    std::sort(h.begin(), h.end());
    for (Index i : train.items(p)) {
      if (!std::binary_search(h.begin(), h.end(), i)) fit[p].push_back(i);
    }
  }
  return {train.with_items(std::move(fit)), std::move(held)};
}

double holdout_recall(const Eigen::MatrixXd& vertices, const Holdout& h) {
  EmbeddingTable t = split_vertices(vertices, h.fit.num_projects());
  t.normalize_rows();
  double total = 0.0;
  std::size_t counted = 0;
  std::vector<bool> allowed(t.libraries.rows());
  for (Index p = 0; p < h.fit.num_projects(); ++p) {
    if (h.held[p].empty()) continue;
    std::fill(allowed.begin(), allowed.end(), true);
    for (Index i : h.fit.items(p)) allowed[i] = false;
    const Eigen::VectorXd scores = t.libraries * t.projects.row(p).transpose();
    const auto top = top_k(scores, allowed, 10);
    std::size_t hits = 0;
    for (Index i : top) {
      hits += std::binary_search(h.held[p].begin(), h.held[p].end(), i);
    }
    total += static_cast<double>(hits) / static_cast<double>(h.held[p].size());
    ++counted;
  }
  return counted ? 100.0 * total / static_cast<double>(counted) : 0.0;
}

Index sample_negative(std::span<const Index> positives,
                      std::size_t num_libraries, Rng& rng) {
  while (true) {
    const auto j = static_cast<Index>(uniform_index(rng, num_libraries));
    if (!std::binary_search(positives.begin(), positives.end(), j)) return j;
  }
}

}  // namespace

EmbedResult train_embeddings(const InteractionDataset& train,
                             const EmbedConfig& cfg) {
  cfg.validate();
  const PopularityTable pop = popularity(train);
  const Holdout holdout =
      make_holdout(train, cfg.validation_fraction, mix_seed(cfg.seed, 1));
  const NormAdjacency fit_adj = build_adjacency(holdout.fit);
  const std::size_t n = train.num_projects();
  const std::size_t m = train.num_libraries();
  const bool has_validation = std::any_of(
      holdout.held.begin(), holdout.held.end(),
      [](const auto& h) { return !h.empty(); });

  Rng rng(mix_seed(cfg.seed, 2));
  std::normal_distribution<double> init(0.0, cfg.init_std);
  Eigen::MatrixXd ego(static_cast<Eigen::Index>(n + m), cfg.dim);
  for (Eigen::Index r = 0; r < ego.rows(); ++r) {
    for (Eigen::Index c = 0; c < ego.cols(); ++c) ego(r, c) = init(rng);
  }

  auto pairs = holdout.fit.interactions();
  AdamSlot slot;
  std::int64_t step = 0;

  EmbedResult result;
  Eigen::MatrixXd best_ego = ego;
  double best_recall = -1.0;
  unsigned since_best = 0;
  std::vector<ContrastiveExample> batch;

  for (unsigned epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < pairs.size();
         begin += cfg.batch_size) {
      const std::size_t end = std::min(pairs.size(), begin + cfg.batch_size);
      batch.clear();
      for (std::size_t k = begin; k < end; ++k) {
        const auto positives = holdout.fit.items(pairs[k].project);
        if (positives.size() == m) continue;
        ContrastiveExample ex{pairs[k].project, pairs[k].library, {}};
        ex.negatives.reserve(cfg.negatives);
        for (unsigned j = 0; j < cfg.negatives; ++j) {
          ex.negatives.push_back(sample_negative(positives, m, rng));
        }
        batch.push_back(std::move(ex));
      }
      if (batch.empty()) continue;

      const Eigen::MatrixXd vertices = propagate(fit_adj, ego, cfg.layers);
      auto loss = debiased_contrastive_loss(batch, vertices, n, pop, cfg.tau,
                                            cfg.beta);
      if (!std::isfinite(loss.value)) {
        throw NumericError(fmt::format(
            "embedding loss diverged at epoch {} (value {})", epoch,
            loss.value));
      }
      Eigen::MatrixXd grad = propagate(fit_adj, loss.vertex_grad, cfg.layers);
      const double reg = cfg.l2 / static_cast<double>(batch.size());
      double reg_loss = 0.0;
      for (const auto& ex : batch) {
        for (Eigen::Index row : {static_cast<Eigen::Index>(ex.project),
                                 static_cast<Eigen::Index>(n + ex.positive)}) {
          grad.row(row) += reg * ego.row(row);
          reg_loss += 0.5 * reg * ego.row(row).squaredNorm();
        }
      }
      adam_update(ego, grad, slot, cfg.learning_rate, ++step);
      epoch_loss += loss.value + reg_loss;
      ++batches;
    }

    EmbedEpochLog entry;
    entry.epoch = epoch;
    entry.loss = batches ? epoch_loss / static_cast<double>(batches) : 0.0;
    if (has_validation) {
      entry.validation_recall =
          holdout_recall(propagate(fit_adj, ego, cfg.layers), holdout);
    }
    result.log.push_back(entry);
    spdlog::debug("embed epoch {} loss {:.5f} recall@10 {:.2f}", epoch,
                  entry.loss, entry.validation_recall);

    if (!has_validation) {
      best_ego = ego;
      result.best_epoch = epoch;
      continue;
    }
    if (entry.validation_recall > best_recall) {
      best_recall = entry.validation_recall;
      best_ego = ego;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  const NormAdjacency full_adj = build_adjacency(train);
  result.table = split_vertices(propagate(full_adj, best_ego, cfg.layers), n);
  result.table.normalize_rows();
  if (!result.table.projects.allFinite() ||
      !result.table.libraries.allFinite()) {
    throw NumericError("embedding table contains non-finite values");
  }
  return result;
}

namespace {
constexpr std::uint8_t kTableVersion = 1;
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  io::write_magic(out, "TPLE");
  io::write_u8(out, kTableVersion);
  io::write_u32(out, static_cast<std::uint32_t>(table.projects.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(table.libraries.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(table.dim()));
  io::write_matrix_f32(out, table.projects);
  io::write_matrix_f32(out, table.libraries);
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  io::expect_magic(in, "TPLE");
  if (io::read_u8(in) != kTableVersion) {
    throw DataError(fmt::format("'{}': unsupported version", path));
  }
  const auto n = io::read_u32(in);
  const auto m = io::read_u32(in);
  const auto d = io::read_u32(in);
  EmbeddingTable t;
  t.projects = io::read_matrix_f32(in, n, d);
  t.libraries = io::read_matrix_f32(in, m, d);
  return t;
}

}  // namespace tplrec
