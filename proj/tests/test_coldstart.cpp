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
#include <cmath>
#include <numeric>
#include <filesystem>
#include <random>

#include "support/oracles.hpp"
#include "tplrec/coldstart.hpp"

using namespace tplrec;

namespace {

Eigen::MatrixXd unit_rows(std::mt19937_64& rng, Eigen::Index rows,
                          Eigen::Index d, bool positive = false) {
  Eigen::MatrixXd m(rows, d);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m.row(r) = testing::random_unit(rng, d, positive).transpose();
  }
  return m;
}

}  // namespace

TEST_CASE("single-user library at lambda = 1 is exactly the project row") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    EmbeddingTable t{unit_rows(rng, 4, 8), unit_rows(rng, 3, 8)};
    const std::vector<Index> users = {static_cast<Index>(trial % 4)};
    const auto p = representative(1, users, t, 1.0);
    CHECK(p == Eigen::VectorXd(t.projects.row(users[0]).transpose()));
  }
}

TEST_CASE("lambda = 0 gives the library row") {
  std::mt19937_64 rng(2);
  EmbeddingTable t{unit_rows(rng, 5, 6), unit_rows(rng, 3, 6)};
  const std::vector<Index> users = {0, 2, 4};
  CHECK(representative(2, users, t, 0.0) ==
        Eigen::VectorXd(t.libraries.row(2).transpose()));
}

TEST_CASE("two equally similar projects at lambda = 1 give the midpoint") {
  EmbeddingTable t;
  t.projects.resize(2, 2);
  t.projects << 1.0, 0.0, 0.0, 1.0;
  t.libraries.resize(1, 2);
  t.libraries << std::sqrt(0.5), std::sqrt(0.5);
  const std::vector<Index> users = {0, 1};
  const auto p = representative(0, users, t, 1.0);
  CHECK(p(0) == doctest::Approx(0.5));
  CHECK(p(1) == doctest::Approx(0.5));
}

TEST_CASE("weights clamp at zero and fall back to the plain mean") {
  EmbeddingTable t;
  t.projects.resize(3, 2);
  t.projects << 1.0, 0.0, -1.0, 0.0, 0.0, 1.0;
  t.libraries.resize(2, 2);
  t.libraries << 1.0, 0.0, 0.0, -1.0;
  // Library 0: project 1 has negative similarity and drops out.
  const std::vector<Index> mixed = {0, 1};
  const auto p = representative(0, mixed, t, 1.0);
  CHECK(p(0) == doctest::Approx(1.0));
  // Library 1: every similarity is <= 0.
  const std::vector<Index> opposed = {0, 2};
  const auto q = representative(1, opposed, t, 1.0);
  CHECK(q(0) == doctest::Approx(0.5));
  CHECK(q(1) == doctest::Approx(0.5));
}

TEST_CASE("representative without users is an error") {
  std::mt19937_64 rng(3);
  EmbeddingTable t{unit_rows(rng, 2, 3), unit_rows(rng, 2, 3)};
  CHECK_THROWS_AS(representative(0, {}, t, 0.5), DataError);
}

TEST_CASE("representatives and aggregates stay in the unit ball") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = testing::random_bipartite(rng, 12, 10, 0.3);
    EmbeddingTable t{unit_rows(rng, 12, 5), unit_rows(rng, 10, 5)};
    const double lambda = std::uniform_real_distribution<>(0, 1)(rng);
    const auto reps = RepresentativeTable::build(t, ds, lambda);
    std::vector<Index> seen;
    for (Index i = 0; i < 10; ++i) {
      if (!reps.available(i)) continue;
      seen.push_back(i);
      CHECK(reps.row(i).norm() <= 1.0 + 1e-12);
      CHECK(reps.row(i).allFinite());
    }
    if (!seen.empty()) CHECK(reps.aggregate(seen).norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("aggregate is the mean, order invariant and incremental") {
  std::mt19937_64 rng(5);
  const Eigen::Index m = 12;
  std::vector<bool> avail(m, true);
  RepresentativeTable reps(unit_rows(rng, m, 7), avail, 0.5);

  const std::vector<Index> single = {3};
  CHECK(reps.aggregate(single) == reps.row(3));
  const std::vector<Index> pair = {3, 8};
  CHECK((reps.aggregate(pair) - (reps.row(3) + reps.row(8)) / 2).norm() < 1e-15);

  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Index> s(m);
    std::iota(s.begin(), s.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
    const std::size_t n = 1 + rng() % (m - 1);
    std::vector<Index> set(s.begin(), s.begin() + static_cast<long>(n));
    const Index a = s[n];

    auto shuffled = set;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK((reps.aggregate(shuffled) - reps.aggregate(set)).norm() < 1e-12);

    auto grown = set;
    grown.push_back(a);
    const Eigen::VectorXd incremental =
        (static_cast<double>(n) * reps.aggregate(set) + reps.row(a)) /
        static_cast<double>(n + 1);
    CHECK((reps.aggregate(grown) - incremental).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("aggregate rejects empty or unavailable sets") {
  std::mt19937_64 rng(6);
  RepresentativeTable reps(unit_rows(rng, 3, 2), {true, false, true}, 0.5);
  CHECK_THROWS_AS(reps.aggregate({}), DataError);
  const std::vector<Index> bad = {0, 1};
  CHECK_THROWS_AS(reps.aggregate(bad), DataError);
  CHECK_THROWS_AS(reps.row(1), DataError);
}

TEST_CASE("tail libraries of one project separate only with lambda < 1") {
  std::mt19937_64 rng(7);
  // Libraries 1 and 2 are used only by project 0.
  const InteractionDataset ds({"p0", "p1"}, {"a", "b", "c"}, {{0, 1, 2}, {0}});
  EmbeddingTable t{unit_rows(rng, 2, 4), unit_rows(rng, 3, 4)};
  const auto joined = RepresentativeTable::build(t, ds, 1.0);
  CHECK(joined.row(1) == joined.row(2));
  const auto blended = RepresentativeTable::build(t, ds, 0.5);
  CHECK((blended.row(1) - blended.row(2)).norm() > 1e-6);
}

TEST_CASE("build marks unseen libraries unavailable and checks lambda") {
  std::mt19937_64 rng(8);
  const InteractionDataset ds({"p0"}, {"a", "b"}, {{1}});
  EmbeddingTable t{unit_rows(rng, 1, 3), unit_rows(rng, 2, 3)};
  const auto reps = RepresentativeTable::build(t, ds, 0.5);
  CHECK_FALSE(reps.available(0));
  CHECK(reps.available(1));
  CHECK_THROWS_AS(RepresentativeTable::build(t, ds, 1.5), ConfigError);
  CHECK_THROWS_AS(RepresentativeTable::build(t, ds, -0.1), ConfigError);
}

TEST_CASE("representative files round-trip with unavailable rows") {
  std::mt19937_64 rng(9);
  RepresentativeTable reps(unit_rows(rng, 4, 3), {true, false, true, true}, 0.5);
  const auto path =
      (std::filesystem::temp_directory_path() / "tplrec_test.tplr").string();
  save_representatives(path, reps);
  const auto back = load_representatives(path, 0.5);
  CHECK(back.availability() == reps.availability());
  for (Index i : {0u, 2u, 3u}) {
    CHECK((back.row(i) - reps.row(i)).cwiseAbs().maxCoeff() < 1e-6);
  }
  std::filesystem::remove(path);
}
