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

#ifndef PATTERNFORGE_TOOLS_PNM_HPP_
#define PATTERNFORGE_TOOLS_PNM_HPP_

// Binary PGM (P5, 8-bit gray) and PPM (P6, 24-bit RGB) images, plus raw
// little-endian element streams.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace patternforge::tools {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Image {
  unsigned width = 0;
  unsigned height = 0;
  bool color = false;  // PPM: R in bits 7:0, G in 15:8, B in 23:16
  std::vector<std::uint64_t> pixels;  // row-major
  unsigned pixel_bits() const { return color ? 24 : 8; }
  friend bool operator==(const Image&, const Image&) = default;
};

Image parse_pnm(const std::string& bytes);
std::string format_pnm(const Image& image);

// Elements of `width_bits` bits, each stored in ceil(width_bits/8) bytes.
std::vector<std::uint64_t> parse_raw(const std::string& bytes, unsigned width_bits);
std::string format_raw(const std::vector<std::uint64_t>& elements, unsigned width_bits);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace patternforge::tools

#endif  // PATTERNFORGE_TOOLS_PNM_HPP_
