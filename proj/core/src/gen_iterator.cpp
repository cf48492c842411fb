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

#include "patternforge/genlib.hpp"

namespace patternforge::gen {

using model::ContainerKind;
using model::IteratorOp;
using namespace rtl;

namespace {

// Returns `reg` with bits [lo, lo+width(value)) replaced by `value`.
Expr replace_slice(const Expr& reg, unsigned lo, const Expr& value) {
  std::vector<Expr> parts;
  unsigned hi = lo + value.width();
  if (hi < reg.width()) parts.push_back(slice(reg, hi, reg.width() - hi));
  parts.push_back(value);
  if (lo > 0) parts.push_back(slice(reg, 0, lo));
  return concat(std::move(parts));
}

}  // namespace

RtlModule gen_iterator(const model::IteratorSpec& it, const model::ContainerSpec& container,
                       const model::MappingPlan& plan) {
  for (IteratorOp op : it.used_ops) {
    if (!model::op_applicable(op, it.kind)) {
      throw GenerationError("iterator '" + it.name + "': operation " + std::string(model::to_string(op)) +
                            " not permitted for a " + std::string(model::to_string(it.kind)) + " iterator");
    }
  }
  if (it.uses(IteratorOp::kRead) && !it.can_read()) {
    throw GenerationError("iterator '" + it.name + "' uses read without read access");
  }
  if (it.uses(IteratorOp::kWrite) && !it.can_write()) {
    throw GenerationError("iterator '" + it.name + "' uses write without write access");
  }
  if (it.used_ops.empty()) throw GenerationError("iterator '" + it.name + "' uses no operations");
  if (plan.container != container.name || it.container != container.name) {
    throw GenerationError("iterator '" + it.name + "' does not match its container plan");
  }

  const bool vector = container.kind == ContainerKind::kVector;
  const bool lifo_order = container.kind == ContainerKind::kStack;
  const bool line_buffer = plan.target_kind == model::TargetKind::kLineBuffer3;
  const unsigned beat = plan.beat_width_bits;
  const unsigned k = plan.beats_per_element;
  const unsigned element = line_buffer ? plan.beat_width_bits : plan.element_width_bits;
  const bool reads = it.uses(IteratorOp::kRead);
  const bool writes = it.uses(IteratorOp::kWrite);
  const unsigned pos_width = bits_for(container.capacity - 1);

  ModuleBuilder b(it.name);
  std::map<IteratorOp, Expr> req;
  for (IteratorOp op : it.used_ops) req[op] = b.input("m_" + std::string(model::to_string(op)), 1);
  auto requested = [&](IteratorOp op) { return req.contains(op) ? req.at(op) : lit(1, 0); };
  Expr index_in;
  if (it.uses(IteratorOp::kIndex)) index_in = b.input("index_in", pos_width);
  if (reads) b.output("data", element);
  Expr data_in;
  if (writes) data_in = b.input("data_in", element);
  b.output("done", 1);

  const std::string read_op = vector ? "c_m_read_at" : "c_m_pop";
  const std::string write_op = vector ? "c_m_write_at" : "c_m_push";
  if (reads) b.output(read_op, 1);
  if (writes) b.output(write_op, 1);
  if (vector) b.output("c_index", plan.addr_width_bits);
  Expr c_data;
  if (reads) c_data = b.input("c_data", beat);
  if (writes) b.output("c_data_in", beat);
  Expr c_done = b.input("c_done", 1);

  Expr m_read = requested(IteratorOp::kRead);
  Expr m_write = requested(IteratorOp::kWrite);
  Expr transfer = bit_or(m_read, m_write);
  if (reads) b.assign(read_op, m_read);
  if (writes) b.assign(write_op, reads ? bit_and(m_write, bit_not(m_read)) : m_write);

  // Beat sequencing: one state per beat when an element spans several.
  Expr last_beat = lit(1, 1);
  std::vector<Expr> beat_active;  // beat_active[i]: currently transferring beat i
  if (k > 1) {
    std::vector<std::string> states;
    for (unsigned i = 0; i < k; ++i) states.push_back("beat" + std::to_string(i));
    Fsm& fsm = b.fsm("beat_fsm", states);
    for (unsigned i = 0; i < k; ++i) beat_active.push_back(in_state("beat_fsm", states[i]));
    last_beat = beat_active.back();

    Expr assembly;
    if (reads) assembly = b.reg("assembly", (k - 1) * beat, 0);
    for (unsigned i = 0; i < k; ++i) {
      Transition t{states[i], bit_and(transfer, c_done), {}, states[(i + 1) % k]};
      if (reads && i + 1 < k) {
        // Beat i of the transfer carries element beat e; stacks return
        // the most significant beat first.
        unsigned e = lifo_order ? k - 1 - i : i;
        unsigned slot = lifo_order ? e - 1 : e;
        Expr stored = replace_slice(assembly, slot * beat, c_data);
        t.actions.push_back({"assembly", mux(m_read, stored, assembly)});
      }
      fsm.transitions.push_back(std::move(t));
    }
    if (reads) {
      std::vector<Expr> beats;  // most significant first
      for (unsigned j = k; j-- > 0;) {
        bool live = lifo_order ? j == 0 : j == k - 1;
        unsigned slot = lifo_order ? j - 1 : j;
        beats.push_back(live ? c_data : slice(assembly, slot * beat, beat));
      }
      b.assign("data", slice(concat(std::move(beats)), 0, element));
    }
    if (writes) {
      Expr padded = zext(data_in, k * beat);
      Expr out = slice(padded, (k - 1) * beat, beat);
      for (unsigned i = k - 1; i-- > 0;) out = mux(beat_active[i], slice(padded, i * beat, beat), out);
      b.assign("c_data_in", out);
    }
  } else {
    if (reads) b.assign("data", zext(c_data, element));
    if (writes) b.assign("c_data_in", zext(data_in, beat));
  }

  // Stream positions move with each pop/push, so inc/dec complete at once.
  Expr moves = any_of({requested(IteratorOp::kInc), requested(IteratorOp::kDec), requested(IteratorOp::kIndex)});
  Expr done = (reads || writes) ? mux(transfer, bit_and(last_beat, c_done), moves) : moves;
  b.assign("done", done);

  if (vector) {
    const unsigned aw = plan.addr_width_bits;
    Expr pos = b.reg("position", pos_width, 0);
    Expr beat_index = lit(aw, 0);
    for (unsigned i = 1; i < k; ++i) beat_index = mux(beat_active[i], lit(aw, i), beat_index);
    b.assign("c_index", add(mul_const(pos, k, aw), beat_index));

    const std::uint64_t last = container.capacity - 1;
    Expr inc = mux(eq_const(pos, last), lit(pos_width, 0), add(pos, lit(pos_width, 1)));
    Expr dec = mux(eq_const(pos, 0), lit(pos_width, last), sub(pos, lit(pos_width, 1)));
    Expr next = pos;
    next = mux(bit_and(done, requested(IteratorOp::kDec)), dec, next);
    next = mux(bit_and(done, requested(IteratorOp::kInc)), inc, next);
    if (it.uses(IteratorOp::kIndex)) next = mux(bit_and(done, req.at(IteratorOp::kIndex)), index_in, next);
    b.set_next("position", next);
  }
  return std::move(b).build();
}

RtlModule gen_arbiter(const model::PhysicalTarget& target, unsigned client_count) {
  if (client_count < 2) throw GenerationError("arbiter needs at least two clients");
  if (!target.shared) throw GenerationError("target '" + target.name + "' is not shared");
  if (target.kind != model::TargetKind::kSram) {
    throw GenerationError("arbitration is generated for sram targets only");
  }
  const unsigned aw = target.addr_width_bits;
  const unsigned bw = target.data_bus_width_bits;
  const unsigned n = client_count;
  const unsigned iw = bits_for(n - 1);

  ModuleBuilder b(target.name + "_arbiter");
  std::vector<Expr> reqs, addrs, wes, wdatas;
  for (unsigned i = 0; i < n; ++i) {
    std::string c = "c" + std::to_string(i) + "_";
    reqs.push_back(b.input(c + "req", 1));
    addrs.push_back(b.input(c + "addr", aw));
    wes.push_back(b.input(c + "we", 1));
    wdatas.push_back(b.input(c + "wdata", bw));
    b.output(c + "ack", 1);
    b.output(c + "rdata", bw);
  }
  b.output("p_addr", aw);
  Expr p_data = b.input("p_data", bw);
  b.output("p_data_out", bw);
  b.output("p_we", 1);
  b.output("req", 1);
  Expr ack = b.input("ack", 1);

  Expr busy = b.reg("busy", 1, 0);
  Expr owner = b.reg("owner", iw, 0);
  Expr last = b.reg("last_grant", iw, n - 1);

  // Rotating priority: after client `l`, search l+1, l+2, ... wrapping.
  Expr pick = lit(iw, 0);
  for (unsigned l = n; l-- > 0;) {
    Expr choice = lit(iw, l);  // only l itself remains
    for (unsigned step = n - 1; step >= 1; --step) {
      unsigned c = (l + step) % n;
      choice = mux(reqs[c], lit(iw, c), choice);
    }
    pick = l == n - 1 ? choice : mux(eq_const(last, l), choice, pick);
  }
  b.net("grant", iw);
  b.assign("grant", mux(busy, owner, pick));
  Expr grant = ref("grant", iw);

  auto select = [&](const std::vector<Expr>& values) {
    Expr out = values.back();
    for (unsigned i = n - 1; i-- > 0;) out = mux(eq_const(grant, i), values[i], out);
    return out;
  };
  Expr granted_req = select(reqs);
  b.assign("req", granted_req);
  b.assign("p_addr", select(addrs));
  b.assign("p_we", select(wes));
  b.assign("p_data_out", select(wdatas));
  for (unsigned i = 0; i < n; ++i) {
    std::string c = "c" + std::to_string(i) + "_";
    b.assign(c + "ack", bit_and(ack, eq_const(grant, i)));
    b.assign(c + "rdata", p_data);
  }
  b.set_next("busy", bit_and(bit_not(ack), granted_req));
  b.set_next("owner", grant);
  b.set_next("last_grant", mux(ack, grant, last));
  return std::move(b).build();
}

}  // namespace patternforge::gen
