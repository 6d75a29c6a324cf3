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

// Writes a synthetic interaction file for demos and benchmarks.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tplrec/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic project-library interaction file"};
  std::string kind = "planted";
  std::string output;
  tplrec::PlantedConfig planted;
  tplrec::HeadTailConfig head_tail;
  std::uint64_t seed = 0;
  app.add_option("--kind", kind, "planted or head-tail");
  app.add_option("-o,--output", output, "output path (default stdout)");
  app.add_option("--seed", seed);
  app.add_option("--projects", planted.projects);
  app.add_option("--libraries", planted.libraries);
  app.add_option("--communities", planted.communities);
  app.add_option("--per-project", planted.per_project);
  app.add_option("--noise", planted.noise);
  app.add_option("--head-rate", head_tail.head_rate);
  app.add_option("--tail-per-project", head_tail.tail_per_project);
  app.add_option("--zipf", planted.zipf);
  CLI11_PARSE(app, argc, argv);

  try {
    tplrec::InteractionDataset ds;
    if (kind == "planted") {
      planted.seed = seed;
      ds = tplrec::planted_communities(planted);
    } else if (kind == "head-tail") {
      head_tail.seed = seed;
      head_tail.projects = planted.projects;
      if (app.count("--communities") > 0) head_tail.communities = planted.communities;
      if (app.count("--noise") > 0) head_tail.noise = planted.noise;
      if (app.count("--zipf") > 0) head_tail.zipf = planted.zipf;
      ds = tplrec::head_tail(head_tail);
    } else {
      std::cerr << "error: unknown kind '" << kind << "'\n";
      return 1;
    }
    if (output.empty()) {
      tplrec::write_interactions(std::cout, ds);
    } else {
      std::ofstream out(output);
      tplrec::write_interactions(out, ds);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
