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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tplrec/dataset.hpp"
#include "tplrec/embedding.hpp"

namespace tplrec {

// Representative embedding of one library:
//   p_i = lambda * sum_u y(u,i) e_u / sum_u y(u,i) + (1 - lambda) * e_i
// over the projects `users` that used it. Similarities are clamped at zero;
// if every weight clamps away, the plain mean of e_u is used.
// Throws DataError when `users` is empty.
Eigen::VectorXd representative(Index library, std::span<const Index> users,
                               const EmbeddingTable& table, double lambda);

// Cached p_i for every library seen in training.
class RepresentativeTable {
 public:
  RepresentativeTable() = default;
  RepresentativeTable(Eigen::MatrixXd reps, std::vector<bool> available,
                      double lambda);

  static RepresentativeTable build(const EmbeddingTable& table,
                                   const InteractionDataset& train,
                                   double lambda);

  std::size_t num_libraries() const { return available_.size(); }
  Eigen::Index dim() const { return reps_.cols(); }
  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& matrix() const { return reps_; }
  const std::vector<bool>& availability() const { return available_; }
  bool available(Index library) const { return available_[library]; }

  // Throws DataError for a library without a representative.
  Eigen::VectorXd row(Index library) const;

  // Mean of the representatives of `libraries`. Throws DataError on an
  // empty set or a library without a representative.
  Eigen::VectorXd aggregate(std::span<const Index> libraries) const;

 private:
  Eigen::MatrixXd reps_;
  std::vector<bool> available_;
  double lambda_ = 0.5;
};

// TPLR: TPLE layout with N = 0; libraries without a representative are
// stored as NaN rows.
void save_representatives(const std::string& path,
                          const RepresentativeTable& reps);
RepresentativeTable load_representatives(const std::string& path,
                                         double lambda);

}  // namespace tplrec
