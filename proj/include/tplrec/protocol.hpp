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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tplrec/agent.hpp"
#include "tplrec/dataset.hpp"
#include "tplrec/embedding.hpp"
#include "tplrec/splits.hpp"

namespace tplrec {

enum class Protocol { kColdstart100, kColdstart30, kInteractionSplit };

std::string_view protocol_name(Protocol p);
// Throws ConfigError for an unknown name.
Protocol parse_protocol(std::string_view name);
// Query share of each test project: 0.5 for coldstart-100, 0.3 for
// coldstart-30 (unused by the interaction split).
double default_query_fraction(Protocol p);

struct ProtocolConfig {
  Protocol protocol = Protocol::kColdstart100;
  unsigned folds = 10;
  unsigned fold_limit = 0;      // evaluate only the first n folds; 0 = all
  double query_fraction = 0.0;  // 0 selects the protocol default
  double train_fraction = 0.8;  // interaction split only
  std::size_t k = 10;
  EmbedConfig embed;
  double lambda = 0.5;
  AgentConfig agent;
  RecommendMode mode = RecommendMode::kSequential;
  bool rank_discounted_epc = false;
  double rare_threshold = kDefaultRareThreshold;
  double popular_threshold = kDefaultPopularThreshold;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct FoldMetrics {
  unsigned fold = 0;
  bool completed = false;
  std::string diagnostic;
  double precision = 0.0;
  double recall = 0.0;
  double epc = 0.0;
  double coverage = 0.0;
  double random_recall = 0.0;      // expectation under a uniform policy
  double popularity_recall = 0.0;  // most-popular-first baseline
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

struct MetricsReport {
  std::string protocol;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<FoldMetrics> folds;
  FoldMetrics average;  // equal-weight mean over completed folds
  std::size_t incomplete = 0;
  double elapsed_seconds = 0.0;
};

// Split data for every fold the config evaluates.
std::vector<FoldData> build_folds(const InteractionDataset& ds,
                                  const ProtocolConfig& cfg);

// Trains embeddings, representatives and the agent on the fold's training
// split, then scores top-K recommendations for its test projects.
FoldMetrics evaluate_fold(const InteractionDataset& ds, const FoldData& fold,
                          const ProtocolConfig& cfg);

// Runs every fold (up to cfg.jobs in parallel) and averages the results.
// A failing fold is recorded as incomplete with its diagnostic.
MetricsReport run_protocol(const InteractionDataset& ds,
                           const ProtocolConfig& cfg);

void write_report_table(std::ostream& out, const MetricsReport& report);
// `fold,metric,K,value` lines; the average uses fold "avg".
void write_report_csv(std::ostream& out, const MetricsReport& report);

}  // namespace tplrec
