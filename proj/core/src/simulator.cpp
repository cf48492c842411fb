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
#include <deque>
#include <queue>
#include <unordered_map>

#include "patternforge/sim.hpp"

namespace patternforge::sim {

using namespace rtl;

namespace {

enum class Op : std::uint8_t { kCopy, kInState, kMemRead, kSlice, kShiftOr, kNot, kAnd, kOr, kXor, kEq, kAdd, kSub, kMux };

struct Ins {
  Op op;
  std::uint32_t dst = 0, a = 0, b = 0, c = 0;
  std::uint64_t imm = 0;
};

struct Program {
  std::uint32_t begin = 0, end = 0;
  std::uint32_t result = 0;
};

struct RegInfo {
  std::uint32_t slot;
  std::uint64_t reset;
  std::optional<Program> next;
};

struct Action {
  std::uint32_t reg_slot;
  Program value;
};

struct TransInfo {
  Program guard;
  std::vector<Action> actions;
  std::uint64_t to;
};

struct FsmInfo {
  std::uint32_t slot;
  std::uint64_t reset;
  std::vector<std::vector<TransInfo>> by_state;
};

struct MemWriteInfo {
  std::uint32_t memory;
  Program enable, addr, data;
};

struct MemInfo {
  std::vector<std::uint64_t> words;
};

}  // namespace

struct Simulator::Impl {
  std::vector<std::uint64_t> values;
  std::unordered_map<std::string, std::uint32_t> slots;
  std::unordered_map<std::string, std::uint32_t> memory_index;
  std::vector<MemInfo> memories;
  std::vector<Ins> code;
  std::vector<Program> comb;  // levelized
  std::vector<RegInfo> regs;
  std::vector<FsmInfo> fsms;
  std::vector<MemWriteInfo> mem_writes;
  std::map<std::string, unsigned> input_widths;
  std::vector<Port> top_ports;
  std::uint64_t cycle = 0;

  // Per-instance name scope.
  struct Scope {
    std::string prefix;
    std::unordered_map<std::string, std::uint32_t> signals;
    std::unordered_map<std::string, std::pair<std::uint32_t, const Fsm*>> fsms;
    std::unordered_map<std::string, std::uint32_t> memories;
  };

  std::uint32_t new_slot(const std::string& name) {
    auto s = static_cast<std::uint32_t>(values.size());
    values.push_back(0);
    if (!name.empty()) slots[name] = s;
    return s;
  }

  std::uint32_t constant(std::uint64_t v) {
    std::uint32_t s = new_slot({});
    values[s] = v;
    const_slots.push_back({s, v});
    return s;
  }
  std::vector<std::pair<std::uint32_t, std::uint64_t>> const_slots;

  std::uint32_t emit(Op op, std::uint32_t dst, std::uint32_t a, std::uint32_t b = 0, std::uint32_t c = 0,
                     std::uint64_t imm = 0) {
    code.push_back({op, dst, a, b, c, imm});
    return dst;
  }

  std::uint32_t compile(const Expr& e, const Scope& scope, std::optional<std::uint32_t> dst = std::nullopt) {
    auto out = [&]() { return dst ? *dst : new_slot({}); };
    const auto& ops = e.operands();
    switch (e.kind()) {
      case ExprKind::kConst: {
        std::uint32_t s = constant(e.value());
        return dst ? emit(Op::kCopy, *dst, s) : s;
      }
      case ExprKind::kRef: {
        auto it = scope.signals.find(e.name());
        if (it == scope.signals.end()) throw SimulationError("unresolved signal " + scope.prefix + e.name());
        return dst ? emit(Op::kCopy, *dst, it->second) : it->second;
      }
      case ExprKind::kInState: {
        auto it = scope.fsms.find(e.name());
        if (it == scope.fsms.end()) throw SimulationError("unresolved fsm " + scope.prefix + e.name());
        auto index = it->second.second->state_index(e.state());
        if (!index) throw SimulationError("unresolved state " + e.state());
        return emit(Op::kInState, out(), it->second.first, 0, 0, *index);
      }
      case ExprKind::kMemRead: {
        auto it = scope.memories.find(e.name());
        if (it == scope.memories.end()) throw SimulationError("unresolved memory " + scope.prefix + e.name());
        std::uint32_t addr = compile(ops[0], scope);
        return emit(Op::kMemRead, out(), addr, it->second);
      }
      case ExprKind::kSlice: {
        std::uint32_t a = compile(ops[0], scope);
        return emit(Op::kSlice, out(), a, e.lo(), 0, mask(e.width()));
      }
      case ExprKind::kConcat: {
        std::vector<std::uint32_t> parts;
        for (const Expr& op : ops) parts.push_back(compile(op, scope));
        std::uint32_t d = out();
        emit(Op::kCopy, d, parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) emit(Op::kShiftOr, d, parts[i], ops[i].width());
        return d;
      }
      case ExprKind::kNot: {
        std::uint32_t a = compile(ops[0], scope);
        return emit(Op::kNot, out(), a, 0, 0, mask(e.width()));
      }
      case ExprKind::kMux: {
        std::uint32_t s = compile(ops[0], scope);
        std::uint32_t t = compile(ops[1], scope);
        std::uint32_t f = compile(ops[2], scope);
        return emit(Op::kMux, out(), s, t, f);
      }
      default:
        break;
    }
    std::uint32_t a = compile(ops[0], scope);
    std::uint32_t b = compile(ops[1], scope);
    Op op = Op::kAnd;
    switch (e.kind()) {
      case ExprKind::kAnd: op = Op::kAnd; break;
      case ExprKind::kOr: op = Op::kOr; break;
      case ExprKind::kXor: op = Op::kXor; break;
      case ExprKind::kEq: op = Op::kEq; break;
      case ExprKind::kAdd: op = Op::kAdd; break;
      case ExprKind::kSub: op = Op::kSub; break;
      default: throw SimulationError("unknown expression kind");
    }
    return emit(op, out(), a, b, 0, mask(ops[0].width()));
  }

  Program program(const Expr& e, const Scope& scope) {
    Program p;
    p.begin = static_cast<std::uint32_t>(code.size());
    p.result = compile(e, scope);
    p.end = static_cast<std::uint32_t>(code.size());
    return p;
  }

  struct PendingComb {
    Program prog;
    std::uint32_t target;
    std::vector<std::uint32_t> reads;
  };
  std::vector<PendingComb> pending_comb;

  void flatten(const Netlist& n, const RtlModule& m, const std::string& prefix,
               const std::map<std::string, std::uint32_t>& bound, int depth) {
    if (depth > 64) throw SimulationError("instance hierarchy too deep");
    Scope scope;
    scope.prefix = prefix;
    for (const Port& p : m.ports) {
      auto it = bound.find(p.name);
      std::uint32_t s = it != bound.end() ? it->second : new_slot({});
      slots[prefix + p.name] = s;
      scope.signals[p.name] = s;
    }
    for (const Net& x : m.nets) scope.signals[x.name] = new_slot(prefix + x.name);
    for (const Register& r : m.registers) scope.signals[r.name] = new_slot(prefix + r.name);
    for (const Fsm& f : m.fsms) {
      std::uint32_t s = new_slot(prefix + f.state_register());
      scope.fsms[f.name] = {s, &f};
    }
    for (const MemoryPrim& mem : m.memories) {
      auto index = static_cast<std::uint32_t>(memories.size());
      memories.push_back({std::vector<std::uint64_t>(mem.depth, 0)});
      memory_index[prefix + mem.name] = index;
      scope.memories[mem.name] = index;
    }

    for (const Assignment& a : m.comb) {
      PendingComb pc;
      pc.target = scope.signals.at(a.target);
      pc.prog.begin = static_cast<std::uint32_t>(code.size());
      pc.prog.result = compile(a.value, scope, pc.target);
      pc.prog.end = static_cast<std::uint32_t>(code.size());
      visit(a.value, [&](const Expr& x) {
        if (x.kind() == ExprKind::kRef) pc.reads.push_back(scope.signals.at(x.name()));
      });
      pending_comb.push_back(std::move(pc));
    }
    for (const Register& r : m.registers) {
      RegInfo info{scope.signals.at(r.name), r.reset_value, std::nullopt};
      if (r.next) info.next = program(*r.next, scope);
      regs.push_back(info);
    }
    for (const Fsm& f : m.fsms) {
      FsmInfo info;
      info.slot = scope.fsms.at(f.name).first;
      info.reset = *f.state_index(f.reset_state);
      info.by_state.resize(f.states.size());
      for (const Transition& t : f.transitions) {
        TransInfo ti;
        ti.guard = program(t.guard, scope);
        for (const Assignment& a : t.actions) ti.actions.push_back({scope.signals.at(a.target), program(a.value, scope)});
        ti.to = *f.state_index(t.to);
        info.by_state[*f.state_index(t.from)].push_back(std::move(ti));
      }
      fsms.push_back(std::move(info));
    }
    for (const MemWritePort& w : m.mem_writes) {
      mem_writes.push_back({scope.memories.at(w.memory), program(w.enable, scope), program(w.addr, scope),
                            program(w.data, scope)});
    }
    for (const Instance& inst : m.instances) {
      const RtlModule* child = n.find(inst.module);
      if (child == nullptr) throw SimulationError("unknown module " + inst.module);
      std::map<std::string, std::uint32_t> child_bound;
      for (const Connection& c : inst.connections) child_bound[c.port] = scope.signals.at(c.signal);
      flatten(n, *child, prefix + inst.name + ".", child_bound, depth + 1);
    }
  }

  void levelize() {
    std::unordered_map<std::uint32_t, std::size_t> driver;
    for (std::size_t i = 0; i < pending_comb.size(); ++i) driver[pending_comb[i].target] = i;
    std::vector<std::vector<std::size_t>> users(pending_comb.size());
    std::vector<std::size_t> indegree(pending_comb.size(), 0);
    for (std::size_t i = 0; i < pending_comb.size(); ++i) {
      auto reads = pending_comb[i].reads;
      std::sort(reads.begin(), reads.end());
      reads.erase(std::unique(reads.begin(), reads.end()), reads.end());
      for (std::uint32_t s : reads) {
        auto it = driver.find(s);
        if (it == driver.end()) continue;
        users[it->second].push_back(i);
        ++indegree[i];
      }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < indegree.size(); ++i) {
      if (indegree[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
      std::size_t i = ready.top();
      ready.pop();
      comb.push_back(pending_comb[i].prog);
      for (std::size_t u : users[i]) {
        if (--indegree[u] == 0) ready.push(u);
      }
    }
    if (comb.size() != pending_comb.size()) {
      throw SimulationError("combinational logic does not settle (cycle through assignments)");
    }
    pending_comb.clear();
  }

  void run(const Program& p) {
    std::uint64_t* v = values.data();
    for (std::uint32_t pc = p.begin; pc < p.end; ++pc) {
      const Ins& in = code[pc];
      switch (in.op) {
        case Op::kCopy: v[in.dst] = v[in.a]; break;
        case Op::kInState: v[in.dst] = v[in.a] == in.imm ? 1 : 0; break;
        case Op::kMemRead: {
          const auto& words = memories[in.b].words;
          std::uint64_t addr = v[in.a];
          v[in.dst] = addr < words.size() ? words[addr] : 0;
          break;
        }
        case Op::kSlice: v[in.dst] = (v[in.a] >> in.b) & in.imm; break;
        case Op::kShiftOr: v[in.dst] = (v[in.dst] << in.b) | v[in.a]; break;
        case Op::kNot: v[in.dst] = ~v[in.a] & in.imm; break;
        case Op::kAnd: v[in.dst] = v[in.a] & v[in.b]; break;
        case Op::kOr: v[in.dst] = v[in.a] | v[in.b]; break;
        case Op::kXor: v[in.dst] = v[in.a] ^ v[in.b]; break;
        case Op::kEq: v[in.dst] = v[in.a] == v[in.b] ? 1 : 0; break;
        case Op::kAdd: v[in.dst] = (v[in.a] + v[in.b]) & in.imm; break;
        case Op::kSub: v[in.dst] = (v[in.a] - v[in.b]) & in.imm; break;
        case Op::kMux: v[in.dst] = v[in.a] != 0 ? v[in.b] : v[in.c]; break;
      }
    }
  }

  std::uint64_t eval(const Program& p) {
    run(p);
    return values[p.result];
  }

  void settle() {
    for (const Program& p : comb) run(p);
  }

  bool commit() {
    struct Load {
      std::uint32_t slot;
      std::uint64_t value;
    };
    std::vector<Load> loads;
    struct Write {
      std::uint32_t memory;
      std::uint64_t addr, value;
    };
    std::vector<Write> writes;
    for (const RegInfo& r : regs) {
      if (r.next) loads.push_back({r.slot, eval(*r.next)});
    }
    for (const FsmInfo& f : fsms) {
      std::uint64_t state = values[f.slot];
      if (state >= f.by_state.size()) continue;
      for (const TransInfo& t : f.by_state[state]) {
        if (eval(t.guard) == 0) continue;
        for (const Action& a : t.actions) loads.push_back({a.reg_slot, eval(a.value)});
        loads.push_back({f.slot, t.to});
        break;
      }
    }
    for (const MemWriteInfo& w : mem_writes) {
      if (eval(w.enable) == 0) continue;
      std::uint64_t addr = eval(w.addr);
      if (addr < memories[w.memory].words.size()) writes.push_back({w.memory, addr, eval(w.data)});
    }
    bool changed = false;
    for (const Load& l : loads) {
      changed |= values[l.slot] != l.value;
      values[l.slot] = l.value;
    }
    for (const Write& w : writes) {
      auto& word = memories[w.memory].words[w.addr];
      changed |= word != w.value;
      word = w.value;
    }
    ++cycle;
    return changed;
  }

  void reset() {
    for (const RegInfo& r : regs) values[r.slot] = r.reset;
    for (const FsmInfo& f : fsms) values[f.slot] = f.reset;
    for (MemInfo& m : memories) std::fill(m.words.begin(), m.words.end(), 0);
    for (const auto& [slot, v] : const_slots) values[slot] = v;
    cycle = 0;
  }
};

Simulator::Simulator(const Netlist& netlist) : impl_(std::make_unique<Impl>()) {
  const RtlModule* top = netlist.find(netlist.top);
  if (top == nullptr) throw SimulationError("netlist has no top module '" + netlist.top + "'");
  if (auto lint = check_netlist(netlist); !lint.empty()) {
    throw SimulationError("netlist fails lint: " + format_lint(lint.front()));
  }
  for (const Port& p : top->ports) {
    if (p.dir == PortDir::kIn) impl_->input_widths[p.name] = p.width;
  }
  impl_->top_ports = top->ports;
  std::stable_partition(impl_->top_ports.begin(), impl_->top_ports.end(),
                        [](const Port& p) { return p.dir == PortDir::kIn; });
  impl_->flatten(netlist, *top, "", {}, 0);
  impl_->levelize();
  impl_->reset();
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::reset() { impl_->reset(); }

void Simulator::poke(const std::string& input_port, std::uint64_t value) {
  auto it = impl_->input_widths.find(input_port);
  if (it == impl_->input_widths.end()) throw SimulationError("no top-level input '" + input_port + "'");
  impl_->values[impl_->slots.at(input_port)] = value & mask(it->second);
}

std::uint64_t Simulator::peek(const std::string& signal) const {
  auto it = impl_->slots.find(signal);
  if (it == impl_->slots.end()) throw SimulationError("no signal '" + signal + "'");
  return impl_->values[it->second];
}

bool Simulator::has_signal(const std::string& signal) const { return impl_->slots.contains(signal); }

void Simulator::settle() { impl_->settle(); }

bool Simulator::step() {
  impl_->settle();
  return impl_->commit();
}

bool Simulator::commit() { return impl_->commit(); }

std::uint64_t Simulator::cycle() const { return impl_->cycle; }

std::uint64_t Simulator::memory_word(const std::string& memory, std::uint64_t address) const {
  auto it = impl_->memory_index.find(memory);
  if (it == impl_->memory_index.end()) throw SimulationError("no memory '" + memory + "'");
  const auto& words = impl_->memories[it->second].words;
  if (address >= words.size()) throw SimulationError("address out of range for '" + memory + "'");
  return words[address];
}

const std::vector<Port>& Simulator::top_ports() const { return impl_->top_ports; }

}  // namespace patternforge::sim
