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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "tplrec/dataset.hpp"
#include "tplrec/popularity.hpp"

namespace tplrec {

// Symmetrically normalized adjacency of the project-library graph.
// Vertices are ordered projects first, then libraries; the entry for an
// edge {u, i} is 1 / sqrt(deg(u) * deg(i)).
struct NormAdjacency {
  std::size_t num_projects = 0;
  std::size_t num_libraries = 0;
  Eigen::SparseMatrix<double> matrix;

  std::size_t num_vertices() const { return num_projects + num_libraries; }
};

NormAdjacency build_adjacency(const InteractionDataset& ds);

// Layer-mean propagation: mean over k = 0..layers of A^k * ego.
// The operator is linear and self-adjoint, so it also maps output
// gradients back to ego gradients.
Eigen::MatrixXd propagate(const NormAdjacency& adj, const Eigen::MatrixXd& ego,
                          unsigned layers);

struct EmbeddingTable {
  Eigen::MatrixXd projects;   // N x d
  Eigen::MatrixXd libraries;  // M x d

  Eigen::Index dim() const { return libraries.cols(); }
  // Scales every row to unit L2 norm.
  void normalize_rows();
  double score(Index project, Index library) const {
    return projects.row(project).dot(libraries.row(library));
  }
};

// Rating of a (project, library) pair from unit-norm rows.
inline double score(const Eigen::Ref<const Eigen::VectorXd>& project_row,
                    const Eigen::Ref<const Eigen::VectorXd>& library_row) {
  return project_row.dot(library_row);
}

// Splits a stacked vertex matrix (projects then libraries) into a table.
EmbeddingTable split_vertices(const Eigen::MatrixXd& vertices,
                              std::size_t num_projects);

struct ContrastiveExample {
  Index project;
  Index positive;
  std::vector<Index> negatives;
};

struct ContrastiveLoss {
  double value = 0.0;
  Eigen::MatrixXd vertex_grad;  // gradient w.r.t. the stacked vertex matrix
};

// Popularity-weighted sampled softmax over cosine similarities:
//   l = w * ( -c+/tau + log( exp(c+/tau) + sum_j exp(c-_j/tau) ) )
// with w = 1 - beta * rate(positive), averaged over the batch.
// Throws ConfigError if tau <= 0 or beta is outside [0,1).
ContrastiveLoss debiased_contrastive_loss(
    std::span<const ContrastiveExample> batch, const Eigen::MatrixXd& vertices,
    std::size_t num_projects, const PopularityTable& pop, double tau,
    double beta);

struct EmbedConfig {
  unsigned layers = 2;
  unsigned dim = 64;
  unsigned batch_size = 1024;
  double learning_rate = 1e-4;
  double l2 = 1e-5;
  unsigned negatives = 128;
  double tau = 0.1;
  double beta = 0.5;
  unsigned patience = 20;
  unsigned max_epochs = 400;
  double init_std = 0.1;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EmbedEpochLog {
  unsigned epoch = 0;
  double loss = 0.0;
  double validation_recall = 0.0;  // Recall@10 in percent
};

struct EmbedResult {
  EmbeddingTable table;
  std::vector<EmbedEpochLog> log;
  unsigned best_epoch = 0;
};

// Mini-batch Adam training with early stopping on held-out Recall@10.
// Returns the best-validation snapshot propagated over the full training
// graph and normalized. Throws NumericError on a non-finite loss.
EmbedResult train_embeddings(const InteractionDataset& train,
                             const EmbedConfig& cfg);

// TPLE layout: magic, version byte, N, M, d (u32 LE), then N*d and M*d
// float32 LE values, row-major.
void save_embeddings(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace tplrec
