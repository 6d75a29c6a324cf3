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

// Command-line driver: ingest, train, recommend, evaluate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tplrec/agent.hpp"
#include "tplrec/binary_io.hpp"
#include "tplrec/coldstart.hpp"
#include "tplrec/config.hpp"
#include "tplrec/dataset.hpp"
#include "tplrec/embedding.hpp"
#include "tplrec/popularity.hpp"
#include "tplrec/protocol.hpp"

namespace fs = std::filesystem;
using namespace tplrec;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

// Registers `--<key>` for every configuration key on a subcommand.
struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "key = value config file");
    for (const auto& key : RunConfig::keys()) {
      app->add_option("--" + key, overrides[key]);
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [key, value] : overrides) {
      if (!value.empty()) cfg.set(key, value);
    }
    cfg.validate();
    return cfg;
  }
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

int cmd_ingest(const std::string& path) {
  const auto result = ingest_file(path);
  const auto& ds = result.dataset;
  const auto hist = usage_histogram(ds);
  std::cout << fmt::format("projects: {}\nlibraries: {}\ninteractions: {}\n",
                           ds.num_projects(), ds.num_libraries(),
                           ds.num_interactions());
  std::cout << fmt::format("records: {} ({} duplicates collapsed)\n",
                           result.records, result.duplicates);
  std::cout << fmt::format("libraries used once: {}\n",
                           hist.size() > 1 ? hist[1] : 0);
  // Log-spaced buckets of the per-library usage count.
  std::cout << "usage histogram (projects per library: libraries)\n";
  std::size_t lo = 1;
  while (lo < hist.size()) {
    const std::size_t hi = std::min(hist.size(), lo * 2);
    std::size_t n = 0;
    for (std::size_t c = lo; c < hi; ++c) n += hist[c];
    std::cout << fmt::format("  [{}, {}): {}\n", lo, hi, n);
    lo = hi;
  }
  return kOk;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg,
                    const std::vector<std::string>& files) {
  auto out = open_out(dir / "manifest.txt");
  out << "# resolved configuration\n" << cfg.to_text() << "# content hashes\n";
  for (const auto& f : files) {
    out << "hash " << f << ' ' << io::file_hash((dir / f).string()) << '\n';
  }
}

int cmd_train(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigError("no dataset given");
  const auto ds = ingest_file(cfg.dataset).dataset;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  const auto& p = cfg.protocol;

  const auto pop = popularity(ds, p.rare_threshold, p.popular_threshold);
  EmbedConfig embed = p.embed;
  embed.seed = mix_seed(p.seed, 100);
  const auto embedded = train_embeddings(ds, embed);
  spdlog::info("embeddings: best epoch {} of {}", embedded.best_epoch,
               embedded.log.size());
  const auto reps = RepresentativeTable::build(embedded.table, ds, p.lambda);
  AgentConfig agent_cfg = p.agent;
  agent_cfg.seed = mix_seed(p.seed, 200);
  const auto agent = train_agent(ds, embedded.table, reps, pop, agent_cfg);

  save_embeddings((dir / "embeddings.tple").string(), embedded.table);
  save_representatives((dir / "representatives.tplr").string(), reps);
  save_qnetwork((dir / "model.tplq").string(), agent.network);
  {
    auto out = open_out(dir / "libraries.tsv");
    for (const auto& id : ds.library_ids()) out << id << '\n';
  }
  {
    auto out = open_out(dir / "training_curve.csv");
    write_curve_csv(out, agent.curve);
  }
  {
    auto out = open_out(dir / "embedding_log.csv");
    out << "epoch,loss,validation_recall\n";
    for (const auto& e : embedded.log) {
      out << fmt::format("{},{:.9g},{:.9g}\n", e.epoch, e.loss,
                         e.validation_recall);
    }
  }
  write_manifest(dir, cfg,
                 {"embeddings.tple", "representatives.tplr", "model.tplq",
                  "libraries.tsv", "training_curve.csv", "embedding_log.csv"});
  std::cout << fmt::format("wrote model artifacts to {}\n", dir.string());
  return kOk;
}

struct RecommendArgs {
  std::string model_dir;
  std::vector<std::string> query;
  std::size_t k = 10;
  std::string mode = "sequential";
  unsigned delta_t = 10;
};

int cmd_recommend(const RecommendArgs& args) {
  const fs::path dir(args.model_dir);
  std::vector<std::string> ids;
  {
    std::ifstream in(dir / "libraries.tsv");
    if (!in) {
      throw DataError(fmt::format("cannot open '{}'",
                                  (dir / "libraries.tsv").string()));
    }
    for (std::string line; std::getline(in, line);) ids.push_back(line);
  }
  std::map<std::string, Index> lookup;
  for (Index i = 0; i < ids.size(); ++i) lookup.emplace(ids[i], i);

  std::vector<Index> query;
  std::vector<std::string> unknown;
  for (const auto& q : args.query) {
    auto it = lookup.find(q);
    if (it == lookup.end()) {
      unknown.push_back(q);
    } else {
      query.push_back(it->second);
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw DataError(fmt::format("unknown library id(s): {}", list));
  }
  RecommendMode mode;
  if (args.mode == "sequential") {
    mode = RecommendMode::kSequential;
  } else if (args.mode == "one-shot") {
    mode = RecommendMode::kOneShot;
  } else {
    throw ConfigError(fmt::format("unknown mode '{}'", args.mode));
  }

  const auto reps =
      load_representatives((dir / "representatives.tplr").string(), 0.5);
  const auto net = load_qnetwork((dir / "model.tplq").string());
  if (reps.num_libraries() != ids.size() || net.num_actions() != ids.size()) {
    throw DataError("model files disagree on the library catalog");
  }
  const auto recs = recommend(query, args.k, net, reps, mode, args.delta_t);
  for (std::size_t r = 0; r < recs.size(); ++r) {
    std::cout << fmt::format("{}\t{}\t{:.6f}\n", r + 1, ids[recs[r].library],
                             recs[r].q);
  }
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigError("no dataset given");
  const auto ds = ingest_file(cfg.dataset).dataset;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "splits.tsv");
    for (const auto& fold : build_folds(ds, cfg.protocol)) {
      write_split_manifest(out, ds, fold);
    }
  }
  const auto report = run_protocol(ds, cfg.protocol);
  {
    auto out = open_out(dir / "report.txt");
    write_report_table(out, report);
  }
  {
    auto out = open_out(dir / "report.csv");
    write_report_csv(out, report);
  }
  write_manifest(dir, cfg, {"splits.tsv", "report.csv"});
  write_report_table(std::cout, report);
  return report.incomplete == report.folds.size() ? kNumeric : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Third-party library recommender: graph embeddings, "
               "cold-start aggregation and a conservative Q-learning agent"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string ingest_path;
  auto* ingest_cmd = app.add_subcommand("ingest", "summarize an interaction file");
  ingest_cmd->add_option("path", ingest_path, "tab-separated interactions")
      ->required();

  ConfigOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "train and persist a model");
  train_opts.attach(train_cmd);

  RecommendArgs rec;
  auto* rec_cmd = app.add_subcommand("recommend", "recommend libraries");
  rec_cmd->add_option("-m,--model", rec.model_dir, "directory written by train")
      ->required();
  rec_cmd->add_option("-q,--query", rec.query, "known library ids")
      ->required()
      ->delimiter(',');
  rec_cmd->add_option("-k", rec.k, "list length");
  rec_cmd->add_option("--mode", rec.mode, "sequential or one-shot");
  rec_cmd->add_option("--delta-t", rec.delta_t, "max state updates");

  ConfigOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("evaluate", "run an evaluation protocol");
  eval_opts.attach(eval_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("tplrec"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*ingest_cmd) return cmd_ingest(ingest_path);
    if (*train_cmd) return cmd_train(train_opts.resolve());
    if (*rec_cmd) return cmd_recommend(rec);
    if (*eval_cmd) return cmd_evaluate(eval_opts.resolve());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
