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

#include "tplrec/qnetwork.hpp"

#include <cmath>
#include <fstream>

#include <fmt/core.h>

#include "tplrec/binary_io.hpp"

namespace tplrec {

QParams QParams::zeros_like() const {
  QParams z = *this;
  z.for_each([](Eigen::MatrixXd& m) { m.setZero(); });
  return z;
}

std::size_t QParams::size() const {
  std::size_t n = 0;
  for_each([&](const Eigen::MatrixXd& m) { n += m.size(); });
  return n;
}

bool QParams::all_finite() const {
  bool ok = true;
  for_each([&](const Eigen::MatrixXd& m) { ok = ok && m.allFinite(); });
  return ok;
}

std::vector<double> QParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(size());
  for_each([&](const Eigen::MatrixXd& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) flat.push_back(m.data()[k]);
  });
  return flat;
}

void QParams::assign(const std::vector<double>& flat) {
  std::size_t pos = 0;
  for_each([&](Eigen::MatrixXd& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = flat.at(pos++);
  });
}

QNetwork::QNetwork(std::size_t input_dim, std::size_t hidden,
                   std::size_t actions, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(input_dim);
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto m = static_cast<Eigen::Index>(actions);
  auto init = [&](Eigen::Index rows, Eigen::Index cols, double fan_in) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = dist(rng);
    }
    return w;
  };
  params_.w1 = init(h, d, static_cast<double>(d));
  params_.b1 = Eigen::MatrixXd::Zero(h, 1);
  params_.wv = init(1, h, static_cast<double>(h));
  params_.bv = Eigen::MatrixXd::Zero(1, 1);
  params_.wa = init(m, h, static_cast<double>(h));
  params_.ba = Eigen::MatrixXd::Zero(m, 1);
}

QNetwork::QNetwork(QParams params) : params_(std::move(params)) {}

QForward QNetwork::forward(const Eigen::MatrixXd& states) const {
  QForward f;
  f.pre = (params_.w1 * states).colwise() + params_.b1.col(0);
  f.hidden = f.pre.cwiseMax(0.0);
  f.value = (params_.wv * f.hidden).array() + params_.bv(0, 0);
  f.advantage = (params_.wa * f.hidden).colwise() + params_.ba.col(0);
  const Eigen::RowVectorXd mean_adv = f.advantage.colwise().mean();
  f.q = f.advantage;
  f.q.rowwise() += f.value.row(0) - mean_adv;
  return f;
}

Eigen::VectorXd QNetwork::q_values(const Eigen::VectorXd& state) const {
  return forward(state).q.col(0);
}

QParams QNetwork::backward(const QForward& fwd, const Eigen::MatrixXd& states,
                           const Eigen::MatrixXd& dq) const {
  QParams g;
  // Value receives every action's gradient; advantages receive theirs
  // minus the per-sample mean.
  const Eigen::RowVectorXd d_value = dq.colwise().sum();
  Eigen::MatrixXd d_adv = dq;
  d_adv.rowwise() -= dq.colwise().mean();

  g.wa = d_adv * fwd.hidden.transpose();
  g.ba = d_adv.rowwise().sum();
  g.wv = d_value * fwd.hidden.transpose();
  g.bv = Eigen::MatrixXd::Constant(1, 1, d_value.sum());

  Eigen::MatrixXd d_hidden = params_.wa.transpose() * d_adv +
                             params_.wv.transpose() * d_value;
  d_hidden.array() *= (fwd.pre.array() > 0.0).cast<double>();
  g.w1 = d_hidden * states.transpose();
  g.b1 = d_hidden.rowwise().sum();
  return g;
}

namespace {
constexpr std::uint8_t kModelVersion = 1;
}

void save_qnetwork(const std::string& path, const QNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  io::write_magic(out, "TPLQ");
  io::write_u8(out, kModelVersion);
  io::write_u32(out, static_cast<std::uint32_t>(net.input_dim()));
  io::write_u32(out, static_cast<std::uint32_t>(net.hidden_dim()));
  io::write_u32(out, static_cast<std::uint32_t>(net.num_actions()));
  net.params().for_each(
      [&](const Eigen::MatrixXd& m) { io::write_matrix_f32(out, m); });
}

QNetwork load_qnetwork(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  io::expect_magic(in, "TPLQ");
  if (io::read_u8(in) != kModelVersion) {
    throw DataError(fmt::format("'{}': unsupported version", path));
  }
  const auto d = io::read_u32(in);
  const auto h = io::read_u32(in);
  const auto m = io::read_u32(in);
  QParams p;
  p.w1 = io::read_matrix_f32(in, h, d);
  p.b1 = io::read_matrix_f32(in, h, 1);
  p.wv = io::read_matrix_f32(in, 1, h);
  p.bv = io::read_matrix_f32(in, 1, 1);
  p.wa = io::read_matrix_f32(in, m, h);
  p.ba = io::read_matrix_f32(in, m, 1);
  return QNetwork(std::move(p));
}

}  // namespace tplrec
