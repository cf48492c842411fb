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

#include "patternforge/algos.hpp"

#include <string>

namespace patternforge::algo {

using model::IteratorOp;
using namespace rtl;

void BlurKernel::check() const {
  if (shift > 16) throw AlgorithmError("blur kernel divisor too large");
  std::uint64_t sum = 0;
  for (const auto& row : weights) {
    for (unsigned w : row) sum += w;
  }
  if (sum != (std::uint64_t{1} << shift)) {
    throw AlgorithmError("blur kernel weights sum to " + std::to_string(sum) + ", expected " +
                         std::to_string(std::uint64_t{1} << shift));
  }
}

namespace {

// Ports of one iterator as seen from the algorithm.
struct IteratorSide {
  std::string prefix;
  Expr data;  // valid for readers
  Expr done;
  std::string request;  // m_read or m_write
  std::string advance;  // m_inc or m_dec
  std::vector<std::string> idle;  // other request lines, tied low
};

IteratorSide declare_side(ModuleBuilder& b, const model::IteratorSpec& it, IteratorOp transfer,
                          unsigned width) {
  if (!it.uses(transfer)) {
    throw AlgorithmError("iterator '" + it.name + "' does not use " + std::string(model::to_string(transfer)));
  }
  if (!it.uses(IteratorOp::kInc) && !it.uses(IteratorOp::kDec)) {
    throw AlgorithmError("iterator '" + it.name + "' cannot advance");
  }
  IteratorSide side;
  side.prefix = it.name + "_";
  IteratorOp advance = it.uses(IteratorOp::kInc) ? IteratorOp::kInc : IteratorOp::kDec;
  for (IteratorOp op : it.used_ops) {
    std::string port = side.prefix + "m_" + std::string(model::to_string(op));
    b.output(port, 1);
    if (op == transfer) {
      side.request = port;
    } else if (op == advance) {
      side.advance = port;
    } else {
      side.idle.push_back(port);
    }
  }
  if (transfer == IteratorOp::kRead) side.data = b.input(side.prefix + "data", width);
  if (transfer == IteratorOp::kWrite) b.output(side.prefix + "data_in", width);
  side.done = b.input(side.prefix + "done", 1);
  return side;
}

void drive(ModuleBuilder& b, const IteratorSide& side, const Expr& request) {
  b.assign(side.request, request);
  b.assign(side.advance, request);
  for (const std::string& port : side.idle) b.assign(port, lit(1, 0));
}

void check_binding(const model::AlgorithmBinding& b, model::AlgorithmKind kind, const model::IteratorSpec& source,
                   const model::IteratorSpec& sink) {
  if (b.kind != kind) throw AlgorithmError("algorithm '" + b.name + "' has the wrong kind");
  if (b.source_iterator != source.name || b.sink_iterator != sink.name) {
    throw AlgorithmError("algorithm '" + b.name + "' given the wrong iterators");
  }
  if (source.name == sink.name) throw AlgorithmError("source and sink must differ");
}

}  // namespace

RtlModule build_copy(const model::AlgorithmBinding& b, const model::IteratorSpec& source,
                     const model::IteratorSpec& sink, unsigned width) {
  check_binding(b, model::AlgorithmKind::kCopy, source, sink);
  ModuleBuilder mb(b.name);
  IteratorSide src = declare_side(mb, source, IteratorOp::kRead, width);
  IteratorSide snk = declare_side(mb, sink, IteratorOp::kWrite, width);

  Expr held = mb.reg("element", width, 0);
  Fsm& fsm = mb.fsm("copy", {"empty", "full"});
  Expr empty = in_state("copy", "empty");
  Expr full = in_state("copy", "full");
  Expr fetch = bit_or(empty, snk.done);

  fsm.transitions.push_back({"empty", src.done, {{"element", src.data}}, "full"});
  fsm.transitions.push_back({"full", src.done, {{"element", src.data}}, "full"});
  fsm.transitions.push_back({"full", snk.done, {}, "empty"});

  drive(mb, src, fetch);
  drive(mb, snk, full);
  mb.assign(snk.prefix + "data_in", held);
  return std::move(mb).build();
}

RtlModule build_blur(const model::AlgorithmBinding& b, const model::IteratorSpec& source,
                     const model::IteratorSpec& sink, unsigned pixel_width, const BlurKernel& kernel) {
  check_binding(b, model::AlgorithmKind::kBlur3x3, source, sink);
  kernel.check();
  if (b.image_width < 3 || b.image_height < 3) {
    throw AlgorithmError("blur3x3 needs an image of at least 3x3 pixels");
  }
  const unsigned w = pixel_width;
  const unsigned column = 3 * w;
  const unsigned sum_width = w + kernel.shift;
  if (column > kMaxWidth || sum_width > kMaxWidth) throw AlgorithmError("pixel width too large for blur3x3");

  ModuleBuilder mb(b.name);
  IteratorSide src = declare_side(mb, source, IteratorOp::kRead, column);
  IteratorSide snk = declare_side(mb, sink, IteratorOp::kWrite, w);

  // Window columns: col0 oldest, col1, then the column being read.
  Expr col0 = mb.reg("col0", column, 0);
  Expr col1 = mb.reg("col1", column, 0);
  const unsigned xw = bits_for(b.image_width - 1);
  Expr x = mb.reg("x", xw, 0);
  Expr out = mb.reg("out_pix", w, 0);

  std::array<Expr, 3> cols{col0, col1, src.data};
  Expr sum = lit(sum_width, 0);
  for (unsigned c = 0; c < 3; ++c) {
    for (unsigned r = 0; r < 3; ++r) {
      unsigned weight = kernel.weights[r][c];
      if (weight == 0) continue;
      sum = add(sum, mul_const(slice(cols[c], r * w, w), weight, sum_width));
    }
  }
  mb.net("filtered", w);
  mb.assign("filtered", slice(sum, kernel.shift, w));
  Expr filtered = ref("filtered", w);

  Expr window_full = bit_not(any_of({eq_const(x, 0), eq_const(x, 1)}));
  Expr next_x = mux(eq_const(x, b.image_width - 1), lit(xw, 0), add(x, lit(xw, 1)));
  std::vector<Assignment> shift_in{{"col0", col1}, {"col1", src.data}, {"x", next_x}};
  std::vector<Assignment> emit = shift_in;
  emit.push_back({"out_pix", filtered});

  Fsm& fsm = mb.fsm("blur", {"empty", "full"});
  Expr empty = in_state("blur", "empty");
  Expr full = in_state("blur", "full");
  Expr accepted = src.done;
  fsm.transitions.push_back({"empty", bit_and(accepted, window_full), emit, "full"});
  fsm.transitions.push_back({"empty", accepted, shift_in, "empty"});
  fsm.transitions.push_back({"full", bit_and(accepted, window_full), emit, "full"});
  fsm.transitions.push_back({"full", accepted, shift_in, "empty"});
  fsm.transitions.push_back({"full", snk.done, {}, "empty"});

  drive(mb, src, bit_or(empty, snk.done));
  drive(mb, snk, full);
  mb.assign(snk.prefix + "data_in", out);
  return std::move(mb).build();
}

std::vector<std::uint64_t> golden_reference(model::AlgorithmKind kind, const std::vector<std::uint64_t>& input,
                                            const GoldenParams& params) {
  if (params.element_width == 0 || params.element_width > kMaxWidth) {
    throw AlgorithmError("element width must be 1..64");
  }
  const std::uint64_t m = mask(params.element_width);
  if (kind == model::AlgorithmKind::kCopy) {
    std::vector<std::uint64_t> out;
    out.reserve(input.size());
    for (std::uint64_t v : input) out.push_back(v & m);
    return out;
  }
  params.kernel.check();
  const std::size_t width = params.image_width;
  const std::size_t height = params.image_height;
  if (width < 3 || height < 3) throw AlgorithmError("blur3x3 needs an image of at least 3x3 pixels");
  if (3 * params.element_width > kMaxWidth) throw AlgorithmError("pixel width too large for blur3x3");
  if (input.size() != width * height) throw AlgorithmError("image size does not match width x height");
  std::vector<std::uint64_t> out;
  out.reserve((width - 2) * (height - 2));
  for (std::size_t y = 0; y + 2 < height; ++y) {
    for (std::size_t x = 0; x + 2 < width; ++x) {
      std::uint64_t acc = 0;
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          acc += std::uint64_t{params.kernel.weights[r][c]} * (input[(y + r) * width + x + c] & m);
        }
      }
      out.push_back(static_cast<std::uint64_t>(acc >> params.kernel.shift) & m);
    }
  }
  return out;
}

}  // namespace patternforge::algo
