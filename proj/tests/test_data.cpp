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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "tplrec/dataset.hpp"
#include "tplrec/popularity.hpp"
#include "tplrec/splits.hpp"
#include "tplrec/synthetic.hpp"

using namespace tplrec;

namespace {

IngestResult ingest_text(const std::string& text) {
  std::istringstream in(text);
  return ingest(in);
}

}  // namespace

TEST_CASE("ingest interns identifiers in first-appearance order") {
  const auto r = ingest_text("p1\tl1\np1\tl2\np2\tl1\n");
  CHECK(r.dataset.num_projects() == 2);
  CHECK(r.dataset.num_libraries() == 2);
  CHECK(r.dataset.num_interactions() == 3);
  CHECK(r.dataset.project_ids()[0] == "p1");
  CHECK(r.dataset.library_ids()[1] == "l2");
  CHECK(r.dataset.library_index("l2") == Index{1});
  CHECK_FALSE(r.dataset.library_index("nope").has_value());
}

TEST_CASE("ingest collapses duplicates and skips comments") {
  const auto r = ingest_text("# header\n\np1\tl1\np1\tl1\n");
  CHECK(r.dataset.num_interactions() == 1);
  CHECK(r.records == 2);
  CHECK(r.duplicates == 1);
}

TEST_CASE("ingest errors name the line") {
  try {
    ingest_text("p1\tl1\nbroken line\n");
    FAIL("expected a parse error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_text("p\tl\textra\n"), DataError);
  CHECK_THROWS_AS(ingest_text("# only comments\n"), DataError);
  CHECK_THROWS_AS(ingest_text(""), DataError);
}

TEST_CASE("dataset rejects projects without interactions") {
  CHECK_THROWS_AS(InteractionDataset({"p"}, {"l"}, {{}}), DataError);
  CHECK_THROWS_AS(InteractionDataset({"p"}, {"l"}, {{3}}), DataError);
}

TEST_CASE("popularity thresholds are strict") {
  // 10 projects; library 0 used by one, library 1 by all.
  std::vector<std::string> projects;
  std::vector<std::vector<Index>> items;
  for (int p = 0; p < 10; ++p) {
    projects.push_back("p" + std::to_string(p));
    items.push_back(p == 0 ? std::vector<Index>{0, 1} : std::vector<Index>{1});
  }
  const InteractionDataset ds(projects, {"a", "b"}, items);
  const auto pop = popularity(ds);
  CHECK(pop.rate(0) == doctest::Approx(0.1));
  CHECK_FALSE(pop.is_rare(0));
  CHECK(pop.rate(1) == 1.0);
  CHECK(pop.is_popular(1));
  CHECK(pop.counts[0] + pop.counts[1] == ds.num_interactions());
}

TEST_CASE("popularity matches a brute-force count and ignores ordering") {
  const auto ds = planted_communities({.projects = 60, .libraries = 40,
                                       .communities = 4, .per_project = 6,
                                       .seed = 3});
  auto interactions = ds.interactions();
  const auto pop = popularity(ds);
  const auto counts = testing::count_usage(interactions);
  for (Index i = 0; i < ds.num_libraries(); ++i) {
    const auto it = counts.find(i);
    const std::size_t expected = it == counts.end() ? 0 : it->second;
    CHECK(pop.counts[i] == expected);
    CHECK(pop.rate(i) == doctest::Approx(static_cast<double>(expected) / 60.0));
  }

  // Reordered input lines give the same rates per library id.
  std::mt19937_64 rng(5);
  std::shuffle(interactions.begin(), interactions.end(), rng);
  std::ostringstream text;
  for (const auto& it : interactions) {
    text << ds.project_ids()[it.project] << '\t'
         << ds.library_ids()[it.library] << '\n';
  }
  const auto shuffled = ingest_text(text.str()).dataset;
  const auto pop2 = popularity(shuffled);
  for (Index i = 0; i < shuffled.num_libraries(); ++i) {
    const Index orig = *ds.library_index(shuffled.library_ids()[i]);
    CHECK(pop2.rate(i) == pop.rate(orig));
  }
}

TEST_CASE("user split partitions projects deterministically") {
  const auto ds = planted_communities({.projects = 10, .libraries = 20,
                                       .communities = 2, .per_project = 4});
  SplitSpec spec;
  spec.folds = 10;
  spec.seed = 7;
  const auto folds = split_users(ds, spec);
  REQUIRE(folds.size() == 10);
  std::set<Index> tested;
  for (const auto& f : folds) {
    CHECK(f.test_projects.size() == 1);
    for (Index p : f.test_projects) {
      CHECK(std::find(f.train_projects.begin(), f.train_projects.end(), p) ==
            f.train_projects.end());
      tested.insert(p);
    }
    CHECK(f.train_projects.size() + f.test_projects.size() == 10);
  }
  CHECK(tested.size() == 10);

  const auto again = split_users(ds, spec);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    CHECK(folds[f].test_projects == again[f].test_projects);
  }

  spec.folds = 11;
  CHECK_THROWS_AS(split_users(ds, spec), ConfigError);
  spec.folds = 1;
  CHECK_THROWS_AS(split_users(ds, spec), ConfigError);
}

TEST_CASE("query/test split sizes follow the rounding rule") {
  const std::vector<Index> ten = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto s = split_query_test(ten, 0.3, 1);
  REQUIRE(s);
  CHECK(s->query.size() == 3);
  CHECK(s->test.size() == 7);

  const std::vector<Index> two = {4, 9};
  const auto t = split_query_test(two, 0.3, 1);
  REQUIRE(t);
  CHECK(t->query.size() == 1);
  CHECK(t->test.size() == 1);

  CHECK_THROWS_AS(split_query_test(ten, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(split_query_test(ten, 0.0, 1), ConfigError);
  CHECK_FALSE(split_query_test(std::vector<Index>{3}, 0.3, 1).has_value());

  CHECK(query_size(10, 0.25) == 3);  // 2.5 rounds up
  CHECK(query_size(2, 0.9) == 1);    // capped so the test set is non-empty
}

TEST_CASE("query/test splits are disjoint subsets of the input") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<Index> items(n);
    std::iota(items.begin(), items.end(), Index{100});
    const double f = 0.05 + 0.9 * std::uniform_real_distribution<>(0, 1)(rng);
    const auto s = split_query_test(items, f, rng());
    REQUIRE(s);
    std::set<Index> q(s->query.begin(), s->query.end());
    std::set<Index> t(s->test.begin(), s->test.end());
    for (Index i : t) CHECK(q.count(i) == 0);
    CHECK(q.size() + t.size() == n);
    CHECK(!q.empty());
    CHECK(!t.empty());
  }
}

TEST_CASE("coldstart folds drop libraries unseen in training") {
  // p2 is the only user of "rare"; when p2 is tested it cannot be truth.
  const InteractionDataset ds({"p0", "p1", "p2"}, {"a", "b", "c", "rare"},
                              {{0, 1, 2}, {0, 1, 2}, {0, 1, 2, 3}});
  UserFold fold{{0, 1}, {2}};
  const auto data = make_coldstart_fold(ds, fold, 0, 0.3, 5);
  REQUIRE(data.tests.size() == 1);
  const auto& t = data.tests[0];
  for (Index i : t.query) CHECK(i != 3);
  for (Index i : t.truth) CHECK(i != 3);
  CHECK(t.query.size() + t.truth.size() == 3);
}

TEST_CASE("interaction split keeps every project in training") {
  const InteractionDataset ds({"a", "b"}, {"x", "y", "z", "w"},
                              {{0, 1, 2, 3}, {2}});
  const auto splits = split_interactions(ds, 0.5, 3);
  CHECK(splits[0].train.size() == 2);
  CHECK(splits[0].test.size() == 2);
  CHECK(splits[1].train == std::vector<Index>{2});
  CHECK(splits[1].test.empty());
}

TEST_CASE("interaction split union equals the original interaction set") {
  const auto ds = planted_communities({.projects = 50, .libraries = 40,
                                       .communities = 4, .per_project = 7,
                                       .seed = 9});
  const auto splits = split_interactions(ds, 0.8, 21);
  std::set<Interaction> rebuilt;
  for (Index p = 0; p < ds.num_projects(); ++p) {
    CHECK(!splits[p].train.empty());
    for (Index i : splits[p].train) CHECK(rebuilt.insert({p, i}).second);
    for (Index i : splits[p].test) CHECK(rebuilt.insert({p, i}).second);
  }
  const auto all = ds.interactions();
  CHECK(rebuilt == std::set<Interaction>(all.begin(), all.end()));
  // Reproducible.
  const auto again = split_interactions(ds, 0.8, 21);
  for (Index p = 0; p < ds.num_projects(); ++p) {
    CHECK(again[p].train == splits[p].train);
  }
}

TEST_CASE("split manifest lists every role") {
  const InteractionDataset ds({"p0", "p1", "p2"}, {"a", "b", "c"},
                              {{0, 1}, {0, 1, 2}, {0, 1, 2}});
  const auto data = make_coldstart_fold(ds, {{0, 1}, {2}}, 4, 0.5, 1);
  std::ostringstream out;
  write_split_manifest(out, ds, data);
  const auto text = out.str();
  CHECK(text.find("4\ttrain\tp0\ta\tb\n") != std::string::npos);
  CHECK(text.find("4\tquery\tp2") != std::string::npos);
  CHECK(text.find("4\ttest\tp2") != std::string::npos);
}
