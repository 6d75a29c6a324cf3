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

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace tplrec {

// First and second moment estimates for one parameter tensor.
struct AdamSlot {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
};

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update. `step` counts from 1.
template <typename Param, typename Grad>
void adam_update(Param& param, const Grad& grad, AdamSlot& slot, double lr,
                 std::int64_t step, const AdamParams& hp = {}) {
  if (slot.m.size() == 0) {
    slot.m = Eigen::MatrixXd::Zero(param.rows(), param.cols());
    slot.v = Eigen::MatrixXd::Zero(param.rows(), param.cols());
  }
  slot.m = hp.beta1 * slot.m + (1.0 - hp.beta1) * grad;
  slot.v = hp.beta2 * slot.v + (1.0 - hp.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(step));
  param.array() -= lr * (slot.m.array() / c1) /
                   ((slot.v.array() / c2).sqrt() + hp.epsilon);
}

}  // namespace tplrec
