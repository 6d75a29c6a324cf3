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
#include <numeric>
#include <random>
#include <set>

#include "tplrec/metrics.hpp"

using namespace tplrec;

namespace {

PopularityTable rates(std::vector<double> r) {
  PopularityTable pop;
  pop.num_projects = 10;
  pop.rates = std::move(r);
  pop.counts.assign(pop.rates.size(), 0);
  return pop;
}

std::vector<Index> random_list(std::mt19937_64& rng, std::size_t n,
                               std::size_t m) {
  std::vector<Index> all(m);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(n);
  return all;
}

}  // namespace

TEST_CASE("precision and recall examples") {
  const std::vector<Index> rec = {0, 1, 2};
  const std::vector<Index> truth = {0};
  auto pr = precision_recall_at_k(rec, truth, 3);
  REQUIRE(pr);
  CHECK(pr->precision == doctest::Approx(33.3333).epsilon(1e-4));
  CHECK(pr->recall == doctest::Approx(100.0));

  const std::vector<Index> miss = {7, 8};
  pr = precision_recall_at_k(rec, miss, 3);
  CHECK(pr->precision == 0.0);
  CHECK(pr->recall == 0.0);

  pr = precision_recall_at_k(rec, rec, 3);
  CHECK(pr->precision == doctest::Approx(100.0));
  CHECK(pr->recall == doctest::Approx(100.0));

  CHECK_FALSE(precision_recall_at_k(rec, {}, 3));
}

TEST_CASE("precision and recall count the same hits") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 30;
    const std::size_t k = 1 + rng() % 15;
    const auto rec = random_list(rng, k, m);
    const auto truth = random_list(rng, 1 + rng() % 10, m);
    const auto pr = precision_recall_at_k(rec, truth, k);
    REQUIRE(pr);
    CHECK(pr->precision * static_cast<double>(k) ==
          doctest::Approx(pr->recall * static_cast<double>(truth.size())));

    // Recall never drops as K grows.
    double last = 0.0;
    for (std::size_t kk = 1; kk <= k; ++kk) {
      const double r = precision_recall_at_k(rec, truth, kk)->recall;
      CHECK(r >= last);
      last = r;
    }
  }
}

TEST_CASE("EPC examples") {
  const std::vector<std::vector<Index>> rec = {{0, 1, 2}};
  const std::vector<std::vector<Index>> truth = {{0, 1}};
  CHECK(epc_at_k(rec, truth, rates({1.0, 1.0, 0.0}), 3) == doctest::Approx(0.0));
  CHECK(epc_at_k(rec, truth, rates({0.0, 0.0, 1.0}), 3) == doctest::Approx(100.0));
  CHECK(epc_at_k(rec, truth, rates({0.2, 0.6, 0.0}), 3) == doctest::Approx(60.0));
  const std::vector<std::vector<Index>> none = {{5}};
  CHECK(epc_at_k(rec, none, rates({0.2, 0.6, 0.0, 0, 0, 0}), 3) == 0.0);
}

TEST_CASE("EPC pools hits across projects") {
  const std::vector<std::vector<Index>> rec = {{0, 1}, {2, 3}};
  const std::vector<std::vector<Index>> truth = {{0}, {2, 3}};
  // Complements 0.9, 0.5, 0.3 over three hits.
  CHECK(epc_at_k(rec, truth, rates({0.1, 0.0, 0.5, 0.7}), 2) ==
        doctest::Approx(100.0 * (0.9 + 0.5 + 0.3) / 3));
}

TEST_CASE("EPC ignores order; the discounted variant does not") {
  std::mt19937_64 rng(2);
  std::vector<double> r(40);
  for (auto& x : r) x = std::uniform_real_distribution<>(0, 1)(rng);
  const auto pop = rates(r);
  bool discounted_moved = false;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Index>> rec = {random_list(rng, 10, 40)};
    const std::vector<std::vector<Index>> truth = {random_list(rng, 15, 40)};
    const double before = epc_at_k(rec, truth, pop, 10);
    const double before_d = epc_at_k(rec, truth, pop, 10, true);
    std::shuffle(rec[0].begin(), rec[0].end(), rng);
    CHECK(epc_at_k(rec, truth, pop, 10) == doctest::Approx(before));
    discounted_moved |= std::abs(epc_at_k(rec, truth, pop, 10, true) - before_d) > 1e-9;
  }
  CHECK(discounted_moved);
}

TEST_CASE("coverage examples") {
  std::vector<std::vector<Index>> same(5);
  for (auto& l : same) {
    l.resize(10);
    std::iota(l.begin(), l.end(), 0);
  }
  CHECK(coverage_at_k(same, 100, 10) == doctest::Approx(10.0));

  const std::vector<std::vector<Index>> pairs = {{0, 1}, {1, 2}, {2, 3}};
  CHECK(coverage_at_k(pairs, 8, 2) == doctest::Approx(50.0));

  const std::vector<std::vector<Index>> all = {{0, 1, 2}, {3}};
  CHECK(coverage_at_k(all, 4, 3) == doctest::Approx(100.0));
}

TEST_CASE("coverage grows with K and with more lists") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Index>> lists;
    for (int u = 0; u < 5; ++u) lists.push_back(random_list(rng, 12, 50));
    double last = 0.0;
    for (std::size_t k = 1; k <= 12; ++k) {
      const double c = coverage_at_k(lists, 50, k);
      CHECK(c >= last);
      last = c;
    }
    auto more = lists;
    more.push_back(random_list(rng, 12, 50));
    CHECK(coverage_at_k(more, 50, 12) >= last);

    std::set<Index> distinct;
    for (const auto& l : lists) distinct.insert(l.begin(), l.end());
    CHECK(last == doctest::Approx(100.0 * distinct.size() / 50.0));
  }
}
