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

#include <algorithm>

#include "patternforge/genlib.hpp"

namespace patternforge::gen {

using model::ContainerKind;
using model::ContainerSpec;
using model::MappingPlan;
using model::TargetKind;
using namespace rtl;

std::vector<std::string> container_ops(ContainerKind kind) {
  switch (kind) {
    case ContainerKind::kReadBuffer: return {"empty", "size", "pop"};
    case ContainerKind::kWriteBuffer: return {"full", "size", "push"};
    case ContainerKind::kQueue: return {"empty", "full", "size", "pop", "push"};
    case ContainerKind::kStack: return {"empty", "full", "pop", "push"};
    case ContainerKind::kVector: return {"read_at", "write_at", "size"};
    case ContainerKind::kAssocArray: return {};
  }
  return {};
}

std::set<std::string> container_ops_used_by(const model::IteratorSpec& it, ContainerKind kind) {
  std::set<std::string> ops;
  bool vector = kind == ContainerKind::kVector;
  if (it.uses(model::IteratorOp::kRead)) ops.insert(vector ? "read_at" : "pop");
  if (it.uses(model::IteratorOp::kWrite)) ops.insert(vector ? "write_at" : "push");
  return ops;
}

std::string container_module_name(const ContainerSpec& spec, const MappingPlan& plan) {
  switch (plan.target_kind) {
    case TargetKind::kFifoCore: return spec.name + "_fifo";
    case TargetKind::kLifoCore: return spec.name + "_lifo";
    case TargetKind::kSram: return spec.name + "_sram";
    case TargetKind::kLineBuffer3: return spec.name + "_linebuf";
  }
  return spec.name;
}

namespace {

bool has(const std::vector<std::string>& ops, const char* op) {
  return std::find(ops.begin(), ops.end(), op) != ops.end();
}

// Method ports shared by every container template.
struct MethodPorts {
  std::map<std::string, Expr> req;  // op -> m_<op>
  Expr data_in;
  Expr index;
};

MethodPorts declare_methods(ModuleBuilder& b, const std::vector<std::string>& ops, unsigned beat,
                            unsigned addr_width, bool with_data_in) {
  MethodPorts mp;
  for (const std::string& op : ops) mp.req[op] = b.input("m_" + op, 1);
  if (addr_width > 0) mp.index = b.input("index", addr_width);
  b.output("data", beat);
  if (with_data_in) mp.data_in = b.input("data_in", beat);
  b.output("done", 1);
  return mp;
}

Expr req_or_zero(const MethodPorts& mp, const char* op) {
  auto it = mp.req.find(op);
  return it == mp.req.end() ? lit(1, 0) : it->second;
}

// Query results override the default data value when requested.
Expr query_data(const MethodPorts& mp, unsigned beat, Expr fallback, Expr empty, Expr full, Expr size) {
  Expr data = std::move(fallback);
  if (mp.req.contains("full")) data = mux(mp.req.at("full"), zext(full, beat), data);
  if (mp.req.contains("empty")) data = mux(mp.req.at("empty"), zext(empty, beat), data);
  if (mp.req.contains("size")) data = mux(mp.req.at("size"), zext(size, beat), data);
  return data;
}

Expr query_done(const MethodPorts& mp) {
  return any_of({req_or_zero(mp, "empty"), req_or_zero(mp, "full"), req_or_zero(mp, "size")});
}

RtlModule gen_core_container(const ContainerSpec& spec, const MappingPlan& plan) {
  const unsigned beat = plan.beat_width_bits;
  const auto ops = container_ops(spec.kind);
  const bool readable = has(ops, "pop");
  const bool writable = has(ops, "push");

  ModuleBuilder b(container_module_name(spec, plan));
  MethodPorts mp = declare_methods(b, ops, beat, 0, writable);
  Expr p_empty, p_full, p_data;
  if (readable) p_empty = b.input("p_empty", 1);
  if (writable) p_full = b.input("p_full", 1);
  if (readable) b.output("p_read", 1);
  if (writable) b.output("p_write", 1);
  if (readable) p_data = b.input("p_data", beat);
  if (writable) b.output("p_data_out", beat);

  Expr pop_ok = readable ? bit_and(mp.req.at("pop"), bit_not(p_empty)) : lit(1, 0);
  Expr push_ok = writable ? bit_and(mp.req.at("push"), bit_not(p_full)) : lit(1, 0);
  if (readable) b.assign("p_read", pop_ok);
  if (writable) {
    b.assign("p_write", push_ok);
    b.assign("p_data_out", mp.data_in);
  }

  // The core exposes no fill level: readable kinds report presence (0/1),
  // write-only buffers report capacity once the core signals full.
  Expr size = readable ? zext(bit_not(p_empty), beat)
                       : mux(p_full, lit(beat, spec.capacity), lit(beat, 0));
  Expr fallback = readable ? p_data : lit(beat, 0);
  b.assign("data", query_data(mp, beat, fallback, readable ? p_empty : lit(1, 0),
                              writable ? p_full : lit(1, 0), size));
  b.assign("done", any_of({pop_ok, push_ok, query_done(mp)}));
  return std::move(b).build();
}

Expr wrap_increment(Expr ptr, std::uint64_t base, std::uint64_t words) {
  unsigned w = ptr.width();
  return mux(eq_const(ptr, base + words - 1), lit(w, base), add(ptr, lit(w, 1)));
}

// Circular buffer (queue, read/write buffer) or stack over an sram region.
RtlModule gen_sram_container(const ContainerSpec& spec, const MappingPlan& plan) {
  const unsigned beat = plan.beat_width_bits;
  const unsigned aw = plan.addr_width_bits;
  const unsigned k = plan.beats_per_element;
  const std::uint64_t base = plan.base_address;
  const std::uint64_t words = plan.footprint_words(spec);
  const auto ops = container_ops(spec.kind);
  const bool stack = spec.kind == ContainerKind::kStack;
  const bool method_pop = has(ops, "pop");
  const bool method_push = has(ops, "push");
  const bool ext_push = spec.kind == ContainerKind::kReadBuffer;
  const bool ext_pop = spec.kind == ContainerKind::kWriteBuffer;

  ModuleBuilder b(container_module_name(spec, plan));
  MethodPorts mp = declare_methods(b, ops, beat, 0, method_push);
  b.output("p_addr", aw);
  Expr p_data = b.input("p_data", beat);
  b.output("p_data_out", beat);
  b.output("p_we", 1);
  b.output("req", 1);
  Expr ack = b.input("ack", 1);
  Expr p_push, p_push_data, p_pop;
  if (ext_push) {
    p_push = b.input("p_push", 1);
    p_push_data = b.input("p_push_data", beat);
    b.output("p_push_done", 1);
  }
  if (ext_pop) {
    p_pop = b.input("p_pop", 1);
    b.output("p_pop_data", beat);
    b.output("p_pop_done", 1);
  }

  const unsigned count_width = aw + 1;
  Expr begin_ptr, end_ptr, top_ptr;
  if (stack) {
    top_ptr = b.reg("top_ptr", aw, base);
  } else {
    begin_ptr = b.reg("begin_ptr", aw, base);
    end_ptr = b.reg("end_ptr", aw, base);
  }
  Expr occupancy = b.reg("occupancy", count_width, 0);
  const unsigned phase_width = bits_for(k - 1);
  Expr pop_phase, push_phase;
  if (k > 1) {
    pop_phase = b.reg("pop_phase", phase_width, 0);
    push_phase = b.reg("push_phase", phase_width, 0);
  }

  Expr pop_req = method_pop ? mp.req.at("pop") : p_pop;
  Expr push_req = method_push ? mp.req.at("push") : p_push;
  Expr push_data = method_push ? mp.data_in : p_push_data;
  Expr empty = eq_const(occupancy, 0);
  Expr full = eq_const(occupancy, spec.capacity);

  Fsm& fsm = b.fsm("mem_fsm", {"idle", "read", "write"});
  Expr reading = in_state("mem_fsm", "read");
  Expr writing = in_state("mem_fsm", "write");

  auto phase_step = [&](Expr phase) {
    return mux(eq_const(phase, k - 1), lit(phase_width, 0), add(phase, lit(phase_width, 1)));
  };
  Expr pop_last = k > 1 ? eq_const(pop_phase, k - 1) : lit(1, 1);
  Expr push_last = k > 1 ? eq_const(push_phase, k - 1) : lit(1, 1);

  fsm.transitions.push_back({"idle", bit_and(pop_req, bit_not(empty)), {}, "read"});
  fsm.transitions.push_back({"idle", bit_and(push_req, bit_not(full)), {}, "write"});

  std::vector<Assignment> on_read{
      {"occupancy", sub(occupancy, zext(pop_last, count_width))}};
  std::vector<Assignment> on_write{
      {"occupancy", add(occupancy, zext(push_last, count_width))}};
  if (stack) {
    on_read.push_back({"top_ptr", sub(top_ptr, lit(aw, 1))});
    on_write.push_back({"top_ptr", add(top_ptr, lit(aw, 1))});
  } else {
    on_read.push_back({"begin_ptr", wrap_increment(begin_ptr, base, words)});
    on_write.push_back({"end_ptr", wrap_increment(end_ptr, base, words)});
  }
  if (k > 1) {
    on_read.push_back({"pop_phase", phase_step(pop_phase)});
    on_write.push_back({"push_phase", phase_step(push_phase)});
  }
  fsm.transitions.push_back({"read", ack, std::move(on_read), "idle"});
  fsm.transitions.push_back({"write", ack, std::move(on_write), "idle"});

  Expr read_addr = stack ? sub(top_ptr, lit(aw, 1)) : begin_ptr;
  Expr write_addr = stack ? top_ptr : end_ptr;
  b.assign("p_addr", mux(reading, read_addr, write_addr));
  b.assign("p_data_out", push_data);
  b.assign("p_we", writing);
  b.assign("req", bit_or(reading, writing));

  Expr read_done = bit_and(reading, ack);
  Expr write_done = bit_and(writing, ack);
  if (ext_push) b.assign("p_push_done", write_done);
  if (ext_pop) {
    b.assign("p_pop_data", p_data);
    b.assign("p_pop_done", read_done);
  }

  Expr fallback = method_pop ? p_data : lit(beat, 0);
  b.assign("data", query_data(mp, beat, fallback, empty, full, occupancy));
  b.assign("done", any_of({method_pop ? read_done : lit(1, 0), method_push ? write_done : lit(1, 0),
                           query_done(mp)}));
  return std::move(b).build();
}

RtlModule gen_vector(const ContainerSpec& spec, const MappingPlan& plan) {
  const unsigned beat = plan.beat_width_bits;
  const unsigned aw = plan.addr_width_bits;
  ModuleBuilder b(container_module_name(spec, plan));
  MethodPorts mp = declare_methods(b, container_ops(spec.kind), beat, aw, true);
  b.output("p_addr", aw);
  Expr p_data = b.input("p_data", beat);
  b.output("p_data_out", beat);
  b.output("p_we", 1);
  b.output("req", 1);
  Expr ack = b.input("ack", 1);

  Expr read_at = mp.req.at("read_at");
  Expr write_at = mp.req.at("write_at");
  Expr access = bit_or(read_at, write_at);
  b.assign("p_addr", add(mp.index, lit(aw, plan.base_address)));
  b.assign("p_data_out", mp.data_in);
  b.assign("p_we", write_at);
  b.assign("req", access);
  b.assign("data", mux(mp.req.at("size"), lit(beat, spec.capacity), p_data));
  b.assign("done", bit_or(bit_and(access, ack), mp.req.at("size")));
  return std::move(b).build();
}

// Read buffer over a 3-line buffer: pixels stream in from p_data; once two
// rows are stored, each accepted pixel yields a column {new, row-1, row-2}
// (most significant first).
RtlModule gen_line_buffer(const ContainerSpec& spec, const MappingPlan& plan) {
  const unsigned pixel = spec.element.width_bits;
  const unsigned column = plan.beat_width_bits;
  const unsigned row_length = spec.capacity;
  ModuleBuilder b(container_module_name(spec, plan));
  MethodPorts mp = declare_methods(b, container_ops(spec.kind), column, 0, false);
  Expr p_empty = b.input("p_empty", 1);
  b.output("p_read", 1);
  Expr p_data = b.input("p_data", pixel);

  const unsigned xw = bits_for(row_length - 1);
  Expr x = b.reg("column", xw, 0);
  Expr rows = b.reg("rows_filled", 2, 0);
  b.memory("line1", row_length, pixel);
  b.memory("line2", row_length, pixel);

  Expr ready = eq_const(rows, 2);
  Expr available = bit_and(ready, bit_not(p_empty));
  Expr accept = bit_and(bit_not(p_empty), bit_or(bit_not(ready), mp.req.at("pop")));
  Expr last_in_row = eq_const(x, row_length - 1);
  Expr above = mem_read("line1", pixel, x);
  Expr above2 = mem_read("line2", pixel, x);

  b.assign("p_read", accept);
  b.set_next("column", mux(accept, mux(last_in_row, lit(xw, 0), add(x, lit(xw, 1))), x));
  b.set_next("rows_filled", mux(bit_and(accept, bit_and(last_in_row, bit_not(ready))), add(rows, lit(2, 1)), rows));
  b.write_memory("line2", accept, x, above);
  b.write_memory("line1", accept, x, p_data);

  Expr col = concat({p_data, above, above2});
  b.assign("data", query_data(mp, column, col, bit_not(available), lit(1, 0), available));
  b.assign("done", bit_or(bit_and(mp.req.at("pop"), available), query_done(mp)));
  return std::move(b).build();
}

}  // namespace

RtlModule gen_container(const ContainerSpec& spec, const MappingPlan& plan) {
  if (!model::mapping_compatible(spec.kind, plan.target_kind)) {
    throw GenerationError("cannot generate " + std::string(model::to_string(spec.kind)) + " over " +
                          std::string(model::to_string(plan.target_kind)));
  }
  if (plan.container != spec.name) {
    throw GenerationError("mapping plan for '" + plan.container + "' applied to '" + spec.name + "'");
  }
  switch (plan.target_kind) {
    case TargetKind::kFifoCore:
    case TargetKind::kLifoCore:
      return gen_core_container(spec, plan);
    case TargetKind::kSram:
      return spec.kind == ContainerKind::kVector ? gen_vector(spec, plan) : gen_sram_container(spec, plan);
    case TargetKind::kLineBuffer3:
      return gen_line_buffer(spec, plan);
  }
  throw GenerationError("unknown target kind");
}

}  // namespace patternforge::gen
