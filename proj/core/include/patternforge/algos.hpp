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

#ifndef PATTERNFORGE_ALGOS_HPP_
#define PATTERNFORGE_ALGOS_HPP_

// Algorithm FSMs that talk to containers only through iterators, and their
// software reference models.
//
// An algorithm module exposes one method group per iterator, prefixed with
// the iterator name: <it>_m_<op> (out), <it>_data (in), <it>_data_in (out),
// <it>_done (in).

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "patternforge/model.hpp"
#include "patternforge/rtlir.hpp"

namespace patternforge::algo {

class AlgorithmError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BlurKernel {
  std::array<std::array<unsigned, 3>, 3> weights{{{1, 2, 1}, {2, 4, 2}, {1, 2, 1}}};
  unsigned shift = 4;  // divisor is 1 << shift

  // Weights must sum to the divisor.
  void check() const;
  friend bool operator==(const BlurKernel&, const BlurKernel&) = default;
};

// Element loop: read+advance on the source, write+advance on the sink.
// One element register decouples the two sides, so a zero-latency source
// and sink move one element per cycle.
rtl::RtlModule build_copy(const model::AlgorithmBinding& b, const model::IteratorSpec& source,
                          const model::IteratorSpec& sink, unsigned width);

// 3x3 filter over a column stream (3 pixels per read, oldest row in the low
// bits). Emits the valid region, (width-2) x (height-2) pixels, row-major.
rtl::RtlModule build_blur(const model::AlgorithmBinding& b, const model::IteratorSpec& source,
                          const model::IteratorSpec& sink, unsigned pixel_width,
                          const BlurKernel& kernel = {});

struct GoldenParams {
  unsigned element_width = 8;
  unsigned image_width = 0;   // blur only
  unsigned image_height = 0;  // blur only
  BlurKernel kernel;
};

// copy: identity. blur3x3: nested-loop convolution over the valid region,
// row-major input and output.
std::vector<std::uint64_t> golden_reference(model::AlgorithmKind kind, const std::vector<std::uint64_t>& input,
                                            const GoldenParams& params);

}  // namespace patternforge::algo

#endif  // PATTERNFORGE_ALGOS_HPP_
