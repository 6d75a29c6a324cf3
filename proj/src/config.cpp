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

#include "tplrec/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/core.h>

namespace tplrec {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T, typename Access>
Key number_key(std::string name, Access access) {
  return {name,
          [name, access](RunConfig& c, std::string_view v) {
            access(c) = parse_number<T>(name, v);
          },
          [access](const RunConfig& c) {
            RunConfig copy = c;
            return fmt::format("{}", access(copy));
          }};
}

#define TPLREC_FIELD(expr) [](RunConfig& c) -> auto& { return expr; }

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back({"dataset",
                 [](RunConfig& c, std::string_view v) { c.dataset = v; },
                 [](const RunConfig& c) { return c.dataset; }});
    k.push_back({"output",
                 [](RunConfig& c, std::string_view v) { c.output = v; },
                 [](const RunConfig& c) { return c.output; }});
    k.push_back({"protocol",
                 [](RunConfig& c, std::string_view v) {
                   c.protocol.protocol = parse_protocol(v);
                 },
                 [](const RunConfig& c) {
                   return std::string(protocol_name(c.protocol.protocol));
                 }});
    k.push_back(number_key<std::uint64_t>("seed", TPLREC_FIELD(c.protocol.seed)));
    k.push_back(number_key<unsigned>("folds", TPLREC_FIELD(c.protocol.folds)));
    k.push_back(number_key<unsigned>("fold_limit", TPLREC_FIELD(c.protocol.fold_limit)));
    k.push_back(number_key<double>("query_fraction", TPLREC_FIELD(c.protocol.query_fraction)));
    k.push_back(number_key<double>("train_fraction", TPLREC_FIELD(c.protocol.train_fraction)));
    k.push_back(number_key<std::size_t>("k", TPLREC_FIELD(c.protocol.k)));
    k.push_back(number_key<unsigned>("jobs", TPLREC_FIELD(c.protocol.jobs)));
    k.push_back({"recommend_mode",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "sequential") {
                     c.protocol.mode = RecommendMode::kSequential;
                   } else if (v == "one-shot") {
                     c.protocol.mode = RecommendMode::kOneShot;
                   } else {
                     throw ConfigError(fmt::format(
                         "recommend_mode: expected sequential or one-shot, got '{}'", v));
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.protocol.mode == RecommendMode::kOneShot
                                          ? "one-shot"
                                          : "sequential");
                 }});
    k.push_back({"epc_rank_discounted",
                 [](RunConfig& c, std::string_view v) {
                   c.protocol.rank_discounted_epc =
                       parse_bool("epc_rank_discounted", v);
                 },
                 [](const RunConfig& c) {
                   return std::string(c.protocol.rank_discounted_epc ? "true" : "false");
                 }});
    k.push_back(number_key<double>("rare_threshold", TPLREC_FIELD(c.protocol.rare_threshold)));
    k.push_back(number_key<double>("popular_threshold", TPLREC_FIELD(c.protocol.popular_threshold)));

    k.push_back(number_key<unsigned>("embed_layers", TPLREC_FIELD(c.protocol.embed.layers)));
    k.push_back(number_key<unsigned>("embed_dim", TPLREC_FIELD(c.protocol.embed.dim)));
    k.push_back(number_key<unsigned>("embed_batch_size", TPLREC_FIELD(c.protocol.embed.batch_size)));
    k.push_back(number_key<double>("embed_lr", TPLREC_FIELD(c.protocol.embed.learning_rate)));
    k.push_back(number_key<double>("embed_l2", TPLREC_FIELD(c.protocol.embed.l2)));
    k.push_back(number_key<unsigned>("embed_negatives", TPLREC_FIELD(c.protocol.embed.negatives)));
    k.push_back(number_key<double>("embed_tau", TPLREC_FIELD(c.protocol.embed.tau)));
    k.push_back(number_key<double>("embed_beta", TPLREC_FIELD(c.protocol.embed.beta)));
    k.push_back(number_key<unsigned>("embed_patience", TPLREC_FIELD(c.protocol.embed.patience)));
    k.push_back(number_key<unsigned>("embed_max_epochs", TPLREC_FIELD(c.protocol.embed.max_epochs)));
    k.push_back(number_key<double>("embed_init_std", TPLREC_FIELD(c.protocol.embed.init_std)));
    k.push_back(number_key<double>("embed_validation_fraction",
                                   TPLREC_FIELD(c.protocol.embed.validation_fraction)));

    k.push_back(number_key<double>("lambda", TPLREC_FIELD(c.protocol.lambda)));

    k.push_back(number_key<double>("agent_gamma", TPLREC_FIELD(c.protocol.agent.gamma)));
    k.push_back(number_key<double>("agent_alpha", TPLREC_FIELD(c.protocol.agent.alpha)));
    k.push_back(number_key<double>("agent_lr", TPLREC_FIELD(c.protocol.agent.learning_rate)));
    k.push_back(number_key<unsigned>("agent_epochs", TPLREC_FIELD(c.protocol.agent.epochs)));
    k.push_back(number_key<unsigned>("agent_batch_size", TPLREC_FIELD(c.protocol.agent.batch_size)));
    k.push_back(number_key<unsigned>("agent_hidden", TPLREC_FIELD(c.protocol.agent.hidden)));
    k.push_back(number_key<unsigned>("agent_delta_t", TPLREC_FIELD(c.protocol.agent.delta_t)));
    k.push_back(number_key<unsigned>("agent_target_sync", TPLREC_FIELD(c.protocol.agent.target_sync)));
    k.push_back(number_key<unsigned>("agent_updates_per_epoch",
                                     TPLREC_FIELD(c.protocol.agent.updates_per_epoch)));
    k.push_back(number_key<std::size_t>("buffer_capacity",
                                        TPLREC_FIELD(c.protocol.agent.buffer.capacity)));
    k.push_back(number_key<double>("mu_rare", TPLREC_FIELD(c.protocol.agent.buffer.mu_rare)));
    k.push_back(number_key<double>("mu_rand", TPLREC_FIELD(c.protocol.agent.buffer.mu_rand)));
    k.push_back(number_key<double>("mu_seq", TPLREC_FIELD(c.protocol.agent.buffer.mu_seq)));
    return k;
  }();
  return keys;
}

#undef TPLREC_FIELD

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  for (const auto& k : registry()) {
    if (k.name == key) {
      k.set(*this, trim(value));
      return;
    }
  }
  throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  for (const auto& k : registry()) out << k.name << " = " << k.get(*this) << '\n';
  return out.str();
}

void RunConfig::validate() const {
  protocol.embed.validate();
  protocol.agent.validate();
  if (protocol.k == 0) throw ConfigError("k must be at least 1");
  if (protocol.folds < 2) throw ConfigError("folds must be at least 2");
  if (!(protocol.lambda >= 0.0 && protocol.lambda <= 1.0)) {
    throw ConfigError("lambda must be in [0,1]");
  }
  if (protocol.query_fraction != 0.0 &&
      !(protocol.query_fraction > 0.0 && protocol.query_fraction < 1.0)) {
    throw ConfigError("query_fraction must be in (0,1)");
  }
  if (!(protocol.train_fraction > 0.0 && protocol.train_fraction < 1.0)) {
    throw ConfigError("train_fraction must be in (0,1)");
  }
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> names;
  for (const auto& k : registry()) names.push_back(k.name);
  return names;
}

void apply_config(RunConfig& cfg, std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  RunConfig cfg;
  apply_config(cfg, in);
  return cfg;
}

}  // namespace tplrec
