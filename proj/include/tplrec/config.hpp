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

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "tplrec/protocol.hpp"

namespace tplrec {

// Everything a run needs. Defaults are the published parameter settings.
struct RunConfig {
  std::string dataset;
  std::string output = "out";
  ProtocolConfig protocol;

  // Throws ConfigError for an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);
  // Resolved configuration as `key = value` lines, in registry order.
  std::string to_text() const;
  // Checks cross-field constraints; throws ConfigError.
  void validate() const;

  static std::vector<std::string> keys();
};

// Applies `key = value` lines; blank lines and '#' comments are ignored.
void apply_config(RunConfig& cfg, std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace tplrec
