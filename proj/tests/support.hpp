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

#ifndef PATTERNFORGE_TESTS_SUPPORT_HPP_
#define PATTERNFORGE_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "patternforge/model.hpp"

namespace patternforge::testkit {

inline std::string fixture_path(const std::string& name) { return std::string(PATTERNFORGE_FIXTURE_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline model::SystemSpec load_fixture(const std::string& name) {
  return model::parse_system_spec(read_text(fixture_path(name)));
}

inline std::vector<std::uint64_t> random_elements(std::size_t n, unsigned width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(n);
  std::uint64_t m = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  for (auto& v : out) v = rng() & m;
  return out;
}

}  // namespace patternforge::testkit

#endif  // PATTERNFORGE_TESTS_SUPPORT_HPP_
