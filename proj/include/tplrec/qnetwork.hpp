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
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tplrec/common.hpp"

namespace tplrec {

// Parameters of the dueling Q-network, also used for their gradients.
struct QParams {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::MatrixXd b1;  // hidden x 1
  Eigen::MatrixXd wv;  // 1 x hidden, value head
  Eigen::MatrixXd bv;  // 1 x 1
  Eigen::MatrixXd wa;  // actions x hidden, advantage head
  Eigen::MatrixXd ba;  // actions x 1

  template <typename F>
  void for_each(F&& f) {
    f(w1), f(b1), f(wv), f(bv), f(wa), f(ba);
  }
  template <typename F>
  void for_each(F&& f) const {
    f(w1), f(b1), f(wv), f(bv), f(wa), f(ba);
  }

  std::array<Eigen::MatrixXd*, 6> tensors() {
    return {&w1, &b1, &wv, &bv, &wa, &ba};
  }

  QParams zeros_like() const;
  std::size_t size() const;
  bool all_finite() const;
  // Flattened copy in for_each order (used by gradient checks).
  std::vector<double> flatten() const;
  void assign(const std::vector<double>& flat);
};

// Activations kept for the backward pass. Columns are batch samples.
struct QForward {
  Eigen::MatrixXd pre;        // hidden pre-activation
  Eigen::MatrixXd hidden;     // ReLU output
  Eigen::MatrixXd value;      // 1 x B
  Eigen::MatrixXd advantage;  // actions x B
  Eigen::MatrixXd q;          // actions x B
};

// state -> ReLU hidden layer -> value V(s) and advantages A(s,.);
// Q(s,a) = V(s) + A(s,a) - mean_a' A(s,a').
class QNetwork {
 public:
  QNetwork() = default;
  // He-initialized weights, zero biases.
  QNetwork(std::size_t input_dim, std::size_t hidden, std::size_t actions,
           Rng& rng);
  explicit QNetwork(QParams params);

  std::size_t input_dim() const { return params_.w1.cols(); }
  std::size_t hidden_dim() const { return params_.w1.rows(); }
  std::size_t num_actions() const { return params_.wa.rows(); }

  const QParams& params() const { return params_; }
  QParams& params() { return params_; }

  QForward forward(const Eigen::MatrixXd& states) const;
  Eigen::VectorXd q_values(const Eigen::VectorXd& state) const;

  // Gradient of the loss w.r.t. parameters given d loss / d Q (actions x B).
  QParams backward(const QForward& fwd, const Eigen::MatrixXd& states,
                   const Eigen::MatrixXd& dq) const;

 private:
  QParams params_;
};

// TPLQ layout: magic, version byte, input/hidden/action sizes (u32 LE),
// then w1, b1, wv, bv, wa, ba as row-major float32 LE.
void save_qnetwork(const std::string& path, const QNetwork& net);
QNetwork load_qnetwork(const std::string& path);

}  // namespace tplrec
