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
#include <map>
#include <set>

#include "patternforge/genlib.hpp"

namespace patternforge::gen {

using namespace rtl;

namespace {

// Method parameter/result ports and the operations that need them.
const std::map<std::string, std::set<std::string>>& param_users() {
  static const std::map<std::string, std::set<std::string>> table{
      {"data_in", {"push", "write_at", "write"}},
      {"index", {"read_at", "write_at"}},
      {"index_in", {"index"}},
      {"data", {"pop", "read_at", "empty", "full", "size", "read"}},
  };
  return table;
}

class Rewriter {
 public:
  std::map<std::string, Expr> constants;              // signal -> replacement
  std::map<std::string, std::set<std::string>> dead;  // fsm -> removed states
  std::map<std::string, std::string> only_state;      // fsm collapsed to one state

  Expr operator()(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::kConst: return e;
      case ExprKind::kRef: {
        auto it = constants.find(e.name());
        return it == constants.end() ? e : it->second;
      }
      case ExprKind::kInState: {
        if (auto it = only_state.find(e.name()); it != only_state.end()) {
          return lit(1, it->second == e.state() ? 1 : 0);
        }
        auto it = dead.find(e.name());
        return it != dead.end() && it->second.contains(e.state()) ? lit(1, 0) : e;
      }
      case ExprKind::kMemRead: return mem_read(e.name(), e.width(), (*this)(e.operands()[0]));
      case ExprKind::kSlice: return slice((*this)(e.operands()[0]), e.lo(), e.width());
      case ExprKind::kConcat: {
        std::vector<Expr> parts;
        for (const Expr& op : e.operands()) parts.push_back((*this)(op));
        return concat(std::move(parts));
      }
      case ExprKind::kNot: return bit_not((*this)(e.operands()[0]));
      case ExprKind::kMux:
        return mux((*this)(e.operands()[0]), (*this)(e.operands()[1]), (*this)(e.operands()[2]));
      default: break;
    }
    Expr a = (*this)(e.operands()[0]);
    Expr b = (*this)(e.operands()[1]);
    switch (e.kind()) {
      case ExprKind::kAnd: return bit_and(a, b);
      case ExprKind::kOr: return bit_or(a, b);
      case ExprKind::kXor: return bit_xor(a, b);
      case ExprKind::kEq: return eq(a, b);
      case ExprKind::kAdd: return add(a, b);
      case ExprKind::kSub: return sub(a, b);
      default: throw std::logic_error("unexpected expression kind");
    }
  }

  void apply(RtlModule& m) {
    for (Assignment& a : m.comb) a.value = (*this)(a.value);
    for (Register& r : m.registers) {
      if (r.next) r.next = (*this)(*r.next);
    }
    for (MemWritePort& w : m.mem_writes) {
      w.enable = (*this)(w.enable);
      w.addr = (*this)(w.addr);
      w.data = (*this)(w.data);
    }
    for (Fsm& f : m.fsms) {
      for (Transition& t : f.transitions) {
        t.guard = (*this)(t.guard);
        for (Assignment& a : t.actions) a.value = (*this)(a.value);
      }
    }
  }
};

// Drops never-firing transitions and unreachable states. Returns true when
// anything changed.
bool simplify_fsms(RtlModule& m, Rewriter& rw) {
  bool changed = false;
  for (Fsm& f : m.fsms) {
    auto before = f.transitions.size();
    std::erase_if(f.transitions, [](const Transition& t) { return t.guard.is_const(0); });
    changed |= before != f.transitions.size();

    std::set<std::string> reachable{f.reset_state};
    std::vector<std::string> work{f.reset_state};
    while (!work.empty()) {
      std::string s = work.back();
      work.pop_back();
      for (const Transition& t : f.transitions) {
        if (t.from == s && reachable.insert(t.to).second) work.push_back(t.to);
      }
    }
    if (reachable.size() != f.states.size()) {
      for (const std::string& s : f.states) {
        if (!reachable.contains(s)) rw.dead[f.name].insert(s);
      }
      std::erase_if(f.states, [&](const std::string& s) { return !reachable.contains(s); });
      std::erase_if(f.transitions, [&](const Transition& t) { return !reachable.contains(t.from); });
      changed = true;
    }
  }
  // A single-state machine is a constant; its actions become plain loads.
  for (auto it = m.fsms.begin(); it != m.fsms.end();) {
    if (it->states.size() != 1) {
      ++it;
      continue;
    }
    rw.only_state[it->name] = it->states.front();
    // Build each register's load as a priority chain over the transitions.
    std::map<std::string, Expr> chains;
    for (auto t = it->transitions.rbegin(); t != it->transitions.rend(); ++t) {
      for (const Assignment& a : t->actions) {
        Expr hold = chains.contains(a.target) ? chains.at(a.target) : ref(a.target, a.value.width());
        chains[a.target] = mux(t->guard, a.value, hold);
      }
      // A firing transition without an action on some register keeps it.
      for (auto& [target, chain] : chains) {
        bool assigned = std::any_of(t->actions.begin(), t->actions.end(),
                                    [&](const Assignment& a) { return a.target == target; });
        if (!assigned) chain = mux(t->guard, ref(target, chain.width()), chain);
      }
    }
    for (auto& [target, chain] : chains) {
      for (Register& r : m.registers) {
        if (r.name == target) r.next = chain;
      }
    }
    it = m.fsms.erase(it);
    changed = true;
  }
  return changed;
}

void collect_refs(const Expr& e, std::set<std::string>& signals, std::set<std::string>& fsms,
                  std::set<std::string>& memories) {
  visit(e, [&](const Expr& n) {
    if (n.kind() == ExprKind::kRef) signals.insert(n.name());
    if (n.kind() == ExprKind::kInState) fsms.insert(n.name());
    if (n.kind() == ExprKind::kMemRead) memories.insert(n.name());
  });
}

// Keeps only what output ports and instances depend on.
void remove_dead(RtlModule& m) {
  std::set<std::string> live, live_fsms, live_memories;
  std::vector<Expr> work;
  for (const Port& p : m.ports) {
    if (p.dir == PortDir::kOut) live.insert(p.name);
  }
  for (const Instance& inst : m.instances) {
    for (const Connection& c : inst.connections) live.insert(c.signal);
  }

  std::map<std::string, std::vector<Expr>> drivers;  // signal -> expressions feeding it
  for (const Assignment& a : m.comb) drivers[a.target].push_back(a.value);
  for (const Register& r : m.registers) {
    if (r.next) drivers[r.name].push_back(*r.next);
  }
  std::map<std::string, std::vector<Expr>> fsm_inputs;
  for (const Fsm& f : m.fsms) {
    for (const Transition& t : f.transitions) {
      fsm_inputs[f.name].push_back(t.guard);
      for (const Assignment& a : t.actions) {
        drivers[a.target].push_back(a.value);
        drivers[a.target].push_back(t.guard);
        // Loading a register also depends on the machine's state.
        drivers[a.target].push_back(in_state(f.name, t.from));
      }
    }
  }
  std::map<std::string, std::vector<Expr>> mem_inputs;
  for (const MemWritePort& w : m.mem_writes) {
    mem_inputs[w.memory].insert(mem_inputs[w.memory].end(), {w.enable, w.addr, w.data});
  }

  std::vector<std::string> pending(live.begin(), live.end());
  auto mark = [&](const Expr& e) {
    std::set<std::string> s, f, mem;
    collect_refs(e, s, f, mem);
    for (const std::string& n : s) {
      if (live.insert(n).second) pending.push_back(n);
    }
    for (const std::string& n : f) {
      if (live_fsms.insert(n).second) {
        for (const Expr& g : fsm_inputs[n]) work.push_back(g);
      }
    }
    for (const std::string& n : mem) {
      if (live_memories.insert(n).second) {
        for (const Expr& g : mem_inputs[n]) work.push_back(g);
      }
    }
  };
  while (!pending.empty() || !work.empty()) {
    if (!pending.empty()) {
      std::string n = pending.back();
      pending.pop_back();
      for (const Expr& e : drivers[n]) mark(e);
    } else {
      Expr e = work.back();
      work.pop_back();
      mark(e);
    }
  }

  std::erase_if(m.ports, [&](const Port& p) { return p.dir == PortDir::kIn && !live.contains(p.name); });
  std::erase_if(m.nets, [&](const Net& n) { return !live.contains(n.name); });
  std::erase_if(m.comb, [&](const Assignment& a) { return !live.contains(a.target); });
  std::erase_if(m.registers, [&](const Register& r) { return !live.contains(r.name); });
  std::erase_if(m.memories, [&](const MemoryPrim& p) { return !live_memories.contains(p.name); });
  std::erase_if(m.mem_writes, [&](const MemWritePort& w) { return !live_memories.contains(w.memory); });
  std::erase_if(m.fsms, [&](const Fsm& f) { return !live_fsms.contains(f.name); });
  for (Fsm& f : m.fsms) {
    for (Transition& t : f.transitions) {
      std::erase_if(t.actions, [&](const Assignment& a) { return !live.contains(a.target); });
    }
  }
}

}  // namespace

RtlModule prune_unused(const RtlModule& module, const std::set<std::string>& used_ops) {
  RtlModule m = module;
  const std::vector<std::string> ops = m.method_ops();
  std::set<std::string> kept;
  for (const std::string& op : ops) {
    if (used_ops.contains(op)) kept.insert(op);
  }
  for (const std::string& op : used_ops) {
    if (std::find(ops.begin(), ops.end(), op) == ops.end()) {
      throw GenerationError("module '" + m.name + "' has no operation '" + op + "'");
    }
  }
  if (kept.empty()) throw GenerationError("pruning '" + m.name + "' would remove every operation");

  Rewriter rw;
  std::set<std::string> dropped_ports;
  for (const std::string& op : ops) {
    if (!kept.contains(op)) dropped_ports.insert("m_" + op);
  }
  for (const auto& [port, users] : param_users()) {
    const Port* p = m.find_port(port);
    if (p == nullptr) continue;
    bool needed = std::any_of(users.begin(), users.end(), [&](const std::string& op) { return kept.contains(op); });
    if (!needed) dropped_ports.insert(port);
  }
  for (const std::string& name : dropped_ports) {
    const Port* p = m.find_port(name);
    if (p->dir == PortDir::kIn) rw.constants[name] = lit(p->width, 0);
  }

  do {
    rw.apply(m);
  } while (simplify_fsms(m, rw));
  rw.apply(m);

  // Outputs that can no longer change are dropped, `done` excepted.
  for (const Assignment& a : m.comb) {
    const Port* p = m.find_port(a.target);
    if (p != nullptr && p->dir == PortDir::kOut && a.value.is_const(0) && a.target != "done") {
      dropped_ports.insert(a.target);
    }
  }
  std::erase_if(m.ports, [&](const Port& p) { return dropped_ports.contains(p.name); });
  std::erase_if(m.comb, [&](const Assignment& a) { return dropped_ports.contains(a.target); });
  remove_dead(m);
  return m;
}

}  // namespace patternforge::gen
