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

#include "tplrec/protocol.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tplrec/coldstart.hpp"
#include "tplrec/metrics.hpp"
#include "tplrec/popularity.hpp"
#include "tplrec/ranking.hpp"

namespace tplrec {

std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kColdstart100:
      return "coldstart-100";
    case Protocol::kColdstart30:
      return "coldstart-30";
    case Protocol::kInteractionSplit:
      return "interaction-split";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  for (Protocol p : {Protocol::kColdstart100, Protocol::kColdstart30,
                     Protocol::kInteractionSplit}) {
    if (protocol_name(p) == name) return p;
  }
  throw ConfigError(fmt::format("unknown protocol '{}'", name));
}

double default_query_fraction(Protocol p) {
  return p == Protocol::kColdstart30 ? 0.3 : 0.5;
}

std::vector<FoldData> build_folds(const InteractionDataset& ds,
                                  const ProtocolConfig& cfg) {
  const unsigned count =
      cfg.fold_limit > 0 ? std::min(cfg.fold_limit, cfg.folds) : cfg.folds;
  std::vector<FoldData> folds;
  folds.reserve(count);
  if (cfg.protocol == Protocol::kInteractionSplit) {
    if (cfg.folds < 1) throw ConfigError("fold count must be positive");
    for (unsigned f = 0; f < count; ++f) {
      folds.push_back(make_interaction_fold(ds, f, cfg.train_fraction,
                                            mix_seed(cfg.seed, 400 + f)));
    }
    return folds;
  }
  SplitSpec spec;
  spec.mode = SplitMode::kUserSplit;
  spec.query_fraction = cfg.query_fraction > 0.0
                            ? cfg.query_fraction
                            : default_query_fraction(cfg.protocol);
  spec.folds = cfg.folds;
  spec.seed = cfg.seed;
  const auto user_folds = split_users(ds, spec);
  for (unsigned f = 0; f < count; ++f) {
    folds.push_back(make_coldstart_fold(ds, user_folds[f], f,
                                        spec.query_fraction,
                                        mix_seed(cfg.seed, 300 + f)));
  }
  return folds;
}

FoldMetrics evaluate_fold(const InteractionDataset& ds, const FoldData& fold,
                          const ProtocolConfig& cfg) {
  FoldMetrics m;
  m.fold = fold.fold;
  m.skipped = fold.skipped;
  try {
    const auto pop =
        popularity(fold.train, cfg.rare_threshold, cfg.popular_threshold);
    EmbedConfig embed = cfg.embed;
    embed.seed = mix_seed(cfg.seed, 100 + fold.fold);
    const auto embedded = train_embeddings(fold.train, embed);
    const auto reps =
        RepresentativeTable::build(embedded.table, fold.train, cfg.lambda);
    AgentConfig agent_cfg = cfg.agent;
    agent_cfg.seed = mix_seed(cfg.seed, 200 + fold.fold);
    const auto agent =
        train_agent(fold.train, embedded.table, reps, pop, agent_cfg);

    Eigen::VectorXd counts(static_cast<Eigen::Index>(pop.counts.size()));
    for (std::size_t i = 0; i < pop.counts.size(); ++i) {
      counts[static_cast<Eigen::Index>(i)] = static_cast<double>(pop.counts[i]);
    }

    std::vector<std::vector<Index>> lists;
    std::vector<std::vector<Index>> truths;
    double precision = 0.0, recall = 0.0, random = 0.0, popular = 0.0;
    for (const auto& t : fold.tests) {
      const auto recs = recommend(t.query, cfg.k, agent.network, reps,
                                  cfg.mode, agent_cfg.delta_t);
      std::vector<Index> list;
      for (const auto& r : recs) list.push_back(r.library);
      const auto pr = precision_recall_at_k(list, t.truth, cfg.k);
      if (!pr) {
        ++m.skipped;
        continue;
      }
      precision += pr->precision;
      recall += pr->recall;

      std::vector<bool> allowed = reps.availability();
      for (Index i : t.query) allowed[i] = false;
      const auto candidates = static_cast<double>(
          std::count(allowed.begin(), allowed.end(), true));
      if (candidates > 0) {
        random += 100.0 * std::min(static_cast<double>(cfg.k), candidates) /
                  candidates;
      }
      const auto top = top_k(counts, allowed, cfg.k);
      popular += precision_recall_at_k(top, t.truth, cfg.k)->recall;

      lists.push_back(std::move(list));
      truths.push_back(t.truth);
    }
    m.evaluated = lists.size();
    if (m.evaluated == 0) throw DataError("fold has no evaluable projects");
    const double n = static_cast<double>(m.evaluated);
    m.precision = precision / n;
    m.recall = recall / n;
    m.random_recall = random / n;
    m.popularity_recall = popular / n;
    m.epc = epc_at_k(lists, truths, pop, cfg.k, cfg.rank_discounted_epc);
    m.coverage = coverage_at_k(lists, ds.num_libraries(), cfg.k);
    m.completed = true;
  } catch (const std::exception& e) {
    m.diagnostic = e.what();
    spdlog::error("fold {} failed: {}", fold.fold, e.what());
  }
  return m;
}

MetricsReport run_protocol(const InteractionDataset& ds,
                           const ProtocolConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  MetricsReport report;
  report.protocol = protocol_name(cfg.protocol);
  report.k = cfg.k;
  report.seed = cfg.seed;
  const auto folds = build_folds(ds, cfg);
  report.folds.resize(folds.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f < folds.size(); f = next++) {
      spdlog::info("{}: fold {} ({} train projects, {} test projects)",
                   report.protocol, f, folds[f].train.num_projects(),
                   folds[f].tests.size());
      report.folds[f] = evaluate_fold(ds, folds[f], cfg);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(
                                         cfg.jobs, static_cast<unsigned>(folds.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  auto& avg = report.average;
  std::size_t done = 0;
  for (const auto& f : report.folds) {
    if (!f.completed) {
      ++report.incomplete;
      continue;
    }
    ++done;
    avg.precision += f.precision;
    avg.recall += f.recall;
    avg.epc += f.epc;
    avg.coverage += f.coverage;
    avg.random_recall += f.random_recall;
    avg.popularity_recall += f.popularity_recall;
    avg.evaluated += f.evaluated;
    avg.skipped += f.skipped;
  }
  if (done > 0) {
    const double n = static_cast<double>(done);
    avg.precision /= n;
    avg.recall /= n;
    avg.epc /= n;
    avg.coverage /= n;
    avg.random_recall /= n;
    avg.popularity_recall /= n;
    avg.completed = true;
  }
  report.elapsed_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  return report;
}

void write_report_table(std::ostream& out, const MetricsReport& report) {
  out << fmt::format("protocol: {}\nK: {}\nseed: {}\nfolds: {} ({} incomplete)\n\n",
                     report.protocol, report.k, report.seed,
                     report.folds.size(), report.incomplete);
  const auto k = report.k;
  out << fmt::format("{:>6} {:>12} {:>12} {:>12} {:>12} {:>9} {:>8}\n", "fold",
                     fmt::format("P@{}", k), fmt::format("R@{}", k),
                     fmt::format("EPC@{}", k), fmt::format("Cov@{}", k),
                     "projects", "skipped");
  auto row = [&](const std::string& label, const FoldMetrics& f) {
    if (!f.completed) {
      out << fmt::format("{:>6} incomplete: {}\n", label, f.diagnostic);
      return;
    }
    out << fmt::format("{:>6} {:>12.2f} {:>12.2f} {:>12.2f} {:>12.2f} {:>9} {:>8}\n",
                       label, f.precision, f.recall, f.epc, f.coverage,
                       f.evaluated, f.skipped);
  };
  for (const auto& f : report.folds) row(std::to_string(f.fold), f);
  row("avg", report.average);
  out << fmt::format("\nbaseline R@{}: uniform-random {:.2f}, most-popular {:.2f}\n",
                     k, report.average.random_recall,
                     report.average.popularity_recall);
  out << fmt::format("# elapsed {:.1f}s\n", report.elapsed_seconds);
}

void write_report_csv(std::ostream& out, const MetricsReport& report) {
  out << "fold,metric,K,value\n";
  auto emit = [&](const std::string& fold, const FoldMetrics& f) {
    if (!f.completed) return;
    for (const auto& [name, value] :
         {std::pair{"precision", f.precision}, std::pair{"recall", f.recall},
          std::pair{"epc", f.epc}, std::pair{"coverage", f.coverage},
          std::pair{"random_recall", f.random_recall},
          std::pair{"popularity_recall", f.popularity_recall}}) {
      out << fmt::format("{},{},{},{:.6f}\n", fold, name, report.k, value);
    }
  };
  for (const auto& f : report.folds) emit(std::to_string(f.fold), f);
  emit("avg", report.average);
}

}  // namespace tplrec
