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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "tplrec/binary_io.hpp"
#include "tplrec/coldstart.hpp"
#include "tplrec/embedding.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "tplrec_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Run run(const std::string& args) {
  const auto out = work_dir() / "stdout.txt";
  const auto err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(TPLREC_CLI) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, '\t');) out.push_back(f);
  return out;
}

const std::string kQuick =
    " --seed 5 --embed_dim 8 --embed_batch_size 256 --embed_lr 0.01"
    " --embed_negatives 8 --embed_max_epochs 5 --agent_epochs 2"
    " --agent_hidden 16 --agent_batch_size 32";

const fs::path& dataset() {
  static const fs::path path = [] {
    const auto p = work_dir() / "planted.tsv";
    const std::string cmd = std::string(MAKE_SYNTHETIC) +
                            " --projects 60 --libraries 40 --communities 2"
                            " --per-project 6 --seed 2 -o " + p.string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    return p;
  }();
  return path;
}

const fs::path& trained() {
  static const fs::path dir = [] {
    const auto d = work_dir() / "model_a";
    const auto r = run("train --dataset " + dataset().string() + " --output " +
                       d.string() + kQuick);
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("ingest reports dataset statistics") {
  const auto r = run("ingest " + dataset().string());
  CHECK(r.code == 0);
  CHECK(r.out.find("projects: 60") != std::string::npos);
  CHECK(r.out.find("libraries: ") != std::string::npos);
  CHECK(r.out.find("interactions: 360") != std::string::npos);
}

TEST_CASE("missing input names the path and exits with a data error") {
  const auto missing = (work_dir() / "nope.tsv").string();
  const auto r = run("ingest " + missing);
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);
}

TEST_CASE("malformed input names the line") {
  const auto bad = work_dir() / "bad.tsv";
  std::ofstream(bad) << "p1\tlibA\nonly-one-field\n";
  const auto r = run("ingest " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected") {
  const auto cfg = work_dir() / "bad.cfg";
  std::ofstream(cfg) << "embed_dimension = 8\n";
  const auto r = run("train --dataset " + dataset().string() + " -c " + cfg.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("embed_dimension") != std::string::npos);
}

TEST_CASE("train writes every artifact and reruns reproduce them") {
  const auto& a = trained();
  for (const char* f : {"embeddings.tple", "representatives.tplr", "model.tplq",
                        "libraries.tsv", "training_curve.csv", "manifest.txt"}) {
    CHECK(fs::exists(a / f));
  }
  const auto manifest = slurp(a / "manifest.txt");
  CHECK(manifest.find("seed = 5") != std::string::npos);
  CHECK(manifest.find("hash model.tplq ") != std::string::npos);
  CHECK(lines(slurp(a / "training_curve.csv"))[0] == "epoch,step,loss,lr,mean_q");

  const auto b = work_dir() / "model_b";
  REQUIRE(run("train --dataset " + dataset().string() + " --output " +
              b.string() + kQuick).code == 0);
  for (const char* f : {"embeddings.tple", "representatives.tplr", "model.tplq"}) {
    CHECK(tplrec::io::file_hash((a / f).string()) ==
          tplrec::io::file_hash((b / f).string()));
  }
  auto without_output = [](const std::string& text) {
    std::vector<std::string> kept;
    for (const auto& l : lines(text)) {
      if (l.rfind("output = ", 0) != 0) kept.push_back(l);
    }
    return kept;
  };
  CHECK(without_output(slurp(a / "manifest.txt")) ==
        without_output(slurp(b / "manifest.txt")));
}

TEST_CASE("lambda = 0 stores the library embeddings as representatives") {
  const auto d = work_dir() / "model_l0";
  REQUIRE(run("train --dataset " + dataset().string() + " --output " +
              d.string() + kQuick + " --lambda 0").code == 0);
  const auto emb = tplrec::load_embeddings((d / "embeddings.tple").string());
  const auto reps =
      tplrec::load_representatives((d / "representatives.tplr").string(), 0.0);
  for (tplrec::Index i = 0; i < reps.num_libraries(); ++i) {
    if (!reps.available(i)) continue;
    CHECK((reps.row(i) - emb.libraries.row(i).transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("recommend prints K ranked libraries outside the query") {
  const auto& m = trained();
  const auto ids = lines(slurp(m / "libraries.tsv"));
  REQUIRE(ids.size() > 10);
  const std::string q1 = split_tabs(ids[0]).back();
  const std::string q2 = split_tabs(ids[1]).back();

  for (const char* mode : {"sequential", "one-shot"}) {
    const auto r = run("recommend -m " + m.string() + " -q " + q1 + "," + q2 +
                       " -k 7 --mode " + mode);
    REQUIRE(r.code == 0);
    const auto out = lines(r.out);
    REQUIRE(out.size() == 7);
    double last = 1e300;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto f = split_tabs(out[k]);
      REQUIRE(f.size() == 3);
      CHECK(f[0] == std::to_string(k + 1));
      CHECK(f[1] != q1);
      CHECK(f[1] != q2);
      if (std::string(mode) == "one-shot") {
        CHECK(std::stod(f[2]) <= last);
        last = std::stod(f[2]);
      }
    }
  }

  const auto bad = run("recommend -m " + m.string() + " -q " + q1 + ",zzz_unknown -k 3");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("zzz_unknown") != std::string::npos);
}

TEST_CASE("evaluate writes a ten-fold report") {
  const auto d = work_dir() / "eval";
  const auto r = run("evaluate --dataset " + dataset().string() + " --output " +
                     d.string() + " --protocol coldstart-30" + kQuick);
  REQUIRE(r.code == 0);
  const auto report = slurp(d / "report.txt");
  CHECK(report.find("coldstart-30") != std::string::npos);
  for (const char* metric : {"P@10", "R@10", "EPC@10", "Cov@10"}) {
    CHECK(report.find(metric) != std::string::npos);
  }
  const auto csv = lines(slurp(d / "report.csv"));
  std::size_t recall_rows = 0;
  for (const auto& l : csv) recall_rows += l.find(",recall,10,") != std::string::npos;
  CHECK(recall_rows == 10 + 1);
  CHECK(fs::exists(d / "splits.tsv"));
  CHECK(fs::exists(d / "manifest.txt"));
}
