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

#include "pnm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace patternforge::tools {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : b_(bytes) {}

  void skip_space() {
    while (pos_ < b_.size()) {
      char ch = b_[pos_];
      if (ch == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned number(const char* what) {
    skip_space();
    std::uint64_t v = 0;
    std::size_t start = pos_;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(b_[pos_] - '0');
      if (v > 0xFFFFFFFFu) throw FormatError(std::string("image ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("image header: missing ") + what);
    return static_cast<unsigned>(v);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_start() {
    if (pos_ >= b_.size() || !std::isspace(static_cast<unsigned char>(b_[pos_]))) {
      throw FormatError("image header: expected whitespace before pixel data");
    }
    return pos_ + 1;
  }

 private:
  const std::string& b_;
  std::size_t pos_ = 2;
};

}  // namespace

Image parse_pnm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw FormatError("not a binary PGM (P5) or PPM (P6) image");
  }
  Image img;
  img.color = bytes[1] == '6';
  HeaderReader h(bytes);
  img.width = h.number("width");
  img.height = h.number("height");
  unsigned maxval = h.number("maxval");
  if (img.width == 0 || img.height == 0) throw FormatError("image has no pixels");
  if (maxval == 0 || maxval > 255) throw FormatError("only 8-bit images (maxval 1..255) are supported");
  std::size_t start = h.raster_start();
  std::size_t channels = img.color ? 3 : 1;
  std::size_t count = std::size_t{img.width} * img.height;
  if (bytes.size() - start != count * channels) {
    throw FormatError("image raster holds " + std::to_string(bytes.size() - start) + " bytes, expected " +
                      std::to_string(count * channels));
  }
  img.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    for (std::size_t c = 0; c < channels; ++c) {
      auto byte = static_cast<unsigned char>(bytes[start + i * channels + c]);
      if (byte > maxval) throw FormatError("pixel value exceeds maxval");
      v |= std::uint64_t{byte} << (8 * c);
    }
    img.pixels[i] = v;
  }
  return img;
}

std::string format_pnm(const Image& img) {
  if (img.pixels.size() != std::size_t{img.width} * img.height) throw FormatError("pixel count mismatch");
  std::string out = std::string(img.color ? "P6" : "P5") + "\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  for (std::uint64_t v : img.pixels) {
    if (v >> img.pixel_bits() != 0) throw FormatError("pixel value out of range");
    for (unsigned c = 0; c < (img.color ? 3u : 1u); ++c) out.push_back(static_cast<char>((v >> (8 * c)) & 0xFF));
  }
  return out;
}

std::vector<std::uint64_t> parse_raw(const std::string& bytes, unsigned width_bits) {
  if (width_bits == 0 || width_bits > 64) throw FormatError("element width must be 1..64 bits");
  std::size_t per = (width_bits + 7) / 8;
  if (bytes.size() % per != 0) {
    throw FormatError("stream size " + std::to_string(bytes.size()) + " is not a multiple of " + std::to_string(per) +
                      " bytes");
  }
  std::vector<std::uint64_t> out;
  out.reserve(bytes.size() / per);
  for (std::size_t i = 0; i < bytes.size(); i += per) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < per; ++k) v |= std::uint64_t{static_cast<unsigned char>(bytes[i + k])} << (8 * k);
    if (width_bits < 64 && (v >> width_bits) != 0) {
      throw FormatError("stream element " + std::to_string(i / per) + " exceeds " + std::to_string(width_bits) + " bits");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_raw(const std::vector<std::uint64_t>& elements, unsigned width_bits) {
  std::size_t per = (width_bits + 7) / 8;
  std::string out;
  out.reserve(elements.size() * per);
  for (std::uint64_t v : elements) {
    for (std::size_t k = 0; k < per; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace patternforge::tools
