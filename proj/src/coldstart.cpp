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

#include "tplrec/coldstart.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/core.h>

#include "tplrec/binary_io.hpp"

namespace tplrec {

Eigen::VectorXd representative(Index library, std::span<const Index> users,
                               const EmbeddingTable& table, double lambda) {
  if (users.empty()) {
    throw DataError(
        fmt::format("library {} has no training interactions", library));
  }
  const Eigen::VectorXd e_i = table.libraries.row(library);
  if (users.size() == 1) {
    return lambda * table.projects.row(users[0]).transpose() +
           (1.0 - lambda) * e_i;
  }
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(table.dim());
  Eigen::VectorXd plain = Eigen::VectorXd::Zero(table.dim());
  double weight_sum = 0.0;
  for (Index u : users) {
    const auto e_u = table.projects.row(u).transpose();
    const double y = std::max(0.0, score(e_u, e_i));
    weighted += y * e_u;
    plain += e_u;
    weight_sum += y;
  }
  const Eigen::VectorXd project_part =
      weight_sum > 0.0 ? Eigen::VectorXd(weighted / weight_sum)
                       : Eigen::VectorXd(plain / static_cast<double>(users.size()));
  return lambda * project_part + (1.0 - lambda) * e_i;
}

RepresentativeTable::RepresentativeTable(Eigen::MatrixXd reps,
                                         std::vector<bool> available,
                                         double lambda)
    : reps_(std::move(reps)), available_(std::move(available)), lambda_(lambda) {
  if (static_cast<std::size_t>(reps_.rows()) != available_.size()) {
    throw DataError("representative table shape mismatch");
  }
}

RepresentativeTable RepresentativeTable::build(const EmbeddingTable& table,
                                               const InteractionDataset& train,
                                               double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError(fmt::format("lambda {} is outside [0,1]", lambda));
  }
  const auto users = train.users_by_library();
  Eigen::MatrixXd reps = Eigen::MatrixXd::Zero(table.libraries.rows(), table.dim());
  std::vector<bool> available(users.size(), false);
  for (Index i = 0; i < users.size(); ++i) {
    if (users[i].empty()) continue;
    reps.row(i) = representative(i, users[i], table, lambda).transpose();
    available[i] = true;
  }
  return RepresentativeTable(std::move(reps), std::move(available), lambda);
}

Eigen::VectorXd RepresentativeTable::row(Index library) const {
  if (library >= available_.size() || !available_[library]) {
    throw DataError(
        fmt::format("library {} has no representative embedding", library));
  }
  return reps_.row(library).transpose();
}

Eigen::VectorXd RepresentativeTable::aggregate(
    std::span<const Index> libraries) const {
  if (libraries.empty()) {
    throw DataError("cannot aggregate an empty library set");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(reps_.cols());
  for (Index i : libraries) sum += row(i);
  return sum / static_cast<double>(libraries.size());
}

void save_representatives(const std::string& path,
                          const RepresentativeTable& reps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  Eigen::MatrixXd m = reps.matrix();
  for (Index i = 0; i < reps.num_libraries(); ++i) {
    if (!reps.available(i)) {
      m.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  }
  io::write_magic(out, "TPLR");
  io::write_u8(out, 1);
  io::write_u32(out, 0);
  io::write_u32(out, static_cast<std::uint32_t>(m.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(m.cols()));
  io::write_matrix_f32(out, m);
}

RepresentativeTable load_representatives(const std::string& path,
                                         double lambda) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  io::expect_magic(in, "TPLR");
  if (io::read_u8(in) != 1) {
    throw DataError(fmt::format("'{}': unsupported version", path));
  }
  const auto n = io::read_u32(in);
  const auto m = io::read_u32(in);
  const auto d = io::read_u32(in);
  io::read_matrix_f32(in, n, d);
  Eigen::MatrixXd reps = io::read_matrix_f32(in, m, d);
  std::vector<bool> available(m, true);
  for (std::uint32_t i = 0; i < m; ++i) {
    if (!reps.row(i).allFinite()) {
      available[i] = false;
      reps.row(i).setZero();
    }
  }
  return RepresentativeTable(std::move(reps), std::move(available), lambda);
}

}  // namespace tplrec
