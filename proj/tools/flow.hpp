// Copyright 2026 The PatternForge Authors
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

#ifndef PATTERNFORGE_TOOLS_FLOW_HPP_
#define PATTERNFORGE_TOOLS_FLOW_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>

namespace patternforge::tools {

enum class Command { kValidate, kGenerate, kSimulate, kReport };
enum class Format { kText, kJson };

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // violations or golden mismatch
inline constexpr int kExitUsage = 2;   // usage, I/O or format errors

struct RunConfig {
  Command command = Command::kValidate;
  std::string spec_path;
  std::string out_dir = ".";
  std::map<std::string, std::string> stimulus;  // interface -> raw stream file
  std::map<std::string, std::string> images;    // interface -> PGM/PPM file
  bool golden = false;
  std::uint64_t seed = 0;
  std::uint64_t max_cycles = 1'000'000;
  unsigned stall_permille = 0;
  std::optional<std::string> waves_path;
  Format format = Format::kText;
};

int run_flow(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace patternforge::tools

#endif  // PATTERNFORGE_TOOLS_FLOW_HPP_
