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
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "patternforge/rtlir.hpp"

namespace patternforge::rtl {

std::optional<std::size_t> Fsm::state_index(std::string_view state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

const Port* RtlModule::find_port(std::string_view n) const {
  auto it = std::find_if(ports.begin(), ports.end(), [&](const Port& p) { return p.name == n; });
  return it == ports.end() ? nullptr : &*it;
}

const Register* RtlModule::find_register(std::string_view n) const {
  auto it = std::find_if(registers.begin(), registers.end(), [&](const Register& r) { return r.name == n; });
  return it == registers.end() ? nullptr : &*it;
}

const Fsm* RtlModule::find_fsm(std::string_view n) const {
  auto it = std::find_if(fsms.begin(), fsms.end(), [&](const Fsm& f) { return f.name == n; });
  return it == fsms.end() ? nullptr : &*it;
}

std::vector<std::string> RtlModule::method_ops() const {
  std::vector<std::string> ops;
  for (const Port& p : ports) {
    if (p.dir == PortDir::kIn && p.name.starts_with("m_")) ops.push_back(p.name.substr(2));
  }
  return ops;
}

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kStreamSource: return "stream_source";
    case DeviceKind::kStreamSink: return "stream_sink";
    case DeviceKind::kFifoStorage: return "fifo_storage";
    case DeviceKind::kLifoStorage: return "lifo_storage";
    case DeviceKind::kSram: return "sram";
    case DeviceKind::kPushSource: return "push_source";
    case DeviceKind::kPopSink: return "pop_sink";
  }
  return "?";
}

const RtlModule* Netlist::find(std::string_view module) const {
  auto it = std::find_if(modules.begin(), modules.end(), [&](const RtlModule& m) { return m.name == module; });
  return it == modules.end() ? nullptr : &*it;
}

const RtlModule& Netlist::top_module() const {
  const RtlModule* m = find(top);
  if (m == nullptr) throw std::out_of_range("netlist top '" + top + "' not found");
  return *m;
}

Netlist single_module_netlist(RtlModule module) {
  Netlist n;
  n.top = module.name;
  n.modules.push_back(std::move(module));
  return n;
}

// --- builder ------------------------------------------------------------

ModuleBuilder::ModuleBuilder(std::string name) { module_.name = std::move(name); }

void ModuleBuilder::claim(const std::string& name) {
  if (widths_.contains(name)) throw std::logic_error(module_.name + ": duplicate name '" + name + "'");
}

Expr ModuleBuilder::input(const std::string& name, unsigned width) {
  claim(name);
  module_.ports.push_back({name, PortDir::kIn, width});
  widths_[name] = width;
  return ref(name, width);
}

Expr ModuleBuilder::output(const std::string& name, unsigned width) {
  claim(name);
  module_.ports.push_back({name, PortDir::kOut, width});
  widths_[name] = width;
  return ref(name, width);
}

Expr ModuleBuilder::net(const std::string& name, unsigned width) {
  claim(name);
  module_.nets.push_back({name, width});
  widths_[name] = width;
  return ref(name, width);
}

Expr ModuleBuilder::reg(const std::string& name, unsigned width, std::uint64_t reset_value) {
  claim(name);
  module_.registers.push_back({name, width, reset_value & mask(width), std::nullopt});
  widths_[name] = width;
  return ref(name, width);
}

void ModuleBuilder::memory(const std::string& name, unsigned depth, unsigned width) {
  claim(name);
  module_.memories.push_back({name, depth, width});
  widths_[name] = width;
}

unsigned ModuleBuilder::width_of(const std::string& signal) const {
  auto it = widths_.find(signal);
  if (it == widths_.end()) throw std::logic_error(module_.name + ": unknown signal '" + signal + "'");
  return it->second;
}

bool ModuleBuilder::has(const std::string& signal) const { return widths_.contains(signal); }

void ModuleBuilder::assign(const std::string& target, Expr value) {
  if (value.width() != width_of(target)) {
    throw std::logic_error(module_.name + ": width mismatch assigning '" + target + "'");
  }
  module_.comb.push_back({target, std::move(value)});
}

void ModuleBuilder::set_next(const std::string& reg_name, Expr value) {
  for (Register& r : module_.registers) {
    if (r.name == reg_name) {
      if (value.width() != r.width) throw std::logic_error(module_.name + ": width mismatch on " + reg_name);
      r.next = std::move(value);
      return;
    }
  }
  throw std::logic_error(module_.name + ": unknown register '" + reg_name + "'");
}

void ModuleBuilder::write_memory(const std::string& memory, Expr enable, Expr addr, Expr data) {
  module_.mem_writes.push_back({memory, std::move(enable), std::move(addr), std::move(data)});
}

Fsm& ModuleBuilder::fsm(const std::string& name, std::vector<std::string> states) {
  claim(name);
  Fsm f;
  f.name = name;
  f.reset_state = states.front();
  f.states = std::move(states);
  widths_[name] = 0;
  claim(f.state_register());
  widths_[f.state_register()] = 0;
  fsms_.push_back(std::move(f));
  return fsms_.back();
}

void ModuleBuilder::instance(Instance inst) {
  claim(inst.name);
  widths_[inst.name] = 0;
  module_.instances.push_back(std::move(inst));
}

RtlModule ModuleBuilder::build() && {
  module_.fsms.assign(std::make_move_iterator(fsms_.begin()), std::make_move_iterator(fsms_.end()));
  return std::move(module_);
}

// --- lint ---------------------------------------------------------------

std::string_view to_string(LintKind kind) {
  switch (kind) {
    case LintKind::kDuplicateName: return "duplicate_name";
    case LintKind::kDanglingReference: return "dangling_reference";
    case LintKind::kWidthMismatch: return "width_mismatch";
    case LintKind::kWidthLimit: return "width_limit";
    case LintKind::kMultipleDrivers: return "multiple_drivers";
    case LintKind::kUndriven: return "undriven";
    case LintKind::kIllegalTarget: return "illegal_target";
    case LintKind::kBadFsm: return "bad_fsm";
    case LintKind::kCombinationalCycle: return "combinational_cycle";
    case LintKind::kHierarchy: return "hierarchy";
  }
  return "?";
}

std::string format_lint(const LintViolation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << " in " << v.module << " [";
  for (std::size_t i = 0; i < v.signals.size(); ++i) os << (i ? ", " : "") << v.signals[i];
  os << "]: " << v.message;
  return os.str();
}

namespace {

enum class SignalKind { kInPort, kOutPort, kNet, kRegister };

struct SignalInfo {
  SignalKind kind;
  unsigned width;
};

// Combinational dependencies of each output port on input ports.
using CombSummary = std::map<std::string, std::set<std::string>>;

class ModuleChecker {
 public:
  ModuleChecker(const RtlModule& m, const Netlist* context,
                std::function<const CombSummary*(const std::string&)> child_summary)
      : m_(m), context_(context), child_summary_(std::move(child_summary)) {}

  std::vector<LintViolation> run() {
    collect_names();
    check_exprs();
    check_drivers();
    check_fsms();
    check_cycles();
    return std::move(out_);
  }

  // Output-port -> input-port combinational reachability of this module.
  CombSummary summary() {
    collect_names();
    build_graph();
    CombSummary result;
    for (const Port& p : m_.ports) {
      if (p.dir != PortDir::kOut) continue;
      std::set<std::string> seen;
      std::vector<std::string> stack{p.name};
      auto& deps = result[p.name];
      while (!stack.empty()) {
        std::string s = stack.back();
        stack.pop_back();
        if (!seen.insert(s).second) continue;
        auto info = signals_.find(s);
        if (info != signals_.end() && info->second.kind == SignalKind::kInPort) deps.insert(s);
        for (const std::string& pred : preds_[s]) stack.push_back(pred);
      }
    }
    return result;
  }

 private:
  void report(LintKind kind, std::vector<std::string> signals, std::string message) {
    out_.push_back({kind, m_.name, std::move(signals), std::move(message)});
  }

  void declare(const std::string& name) {
    if (name == "clk" || name == "rst") {
      report(LintKind::kDuplicateName, {name}, "name is reserved for the implicit clock/reset");
    }
    if (!names_.insert(name).second) report(LintKind::kDuplicateName, {name}, "name declared twice");
  }

  void limit(const std::string& name, unsigned width) {
    if (width == 0 || width > kMaxWidth) {
      report(LintKind::kWidthLimit, {name}, "width " + std::to_string(width) + " outside 1..64");
    }
  }

  void collect_names() {
    names_.clear();
    signals_.clear();
    for (const Port& p : m_.ports) {
      declare(p.name);
      limit(p.name, p.width);
      signals_[p.name] = {p.dir == PortDir::kIn ? SignalKind::kInPort : SignalKind::kOutPort, p.width};
    }
    for (const Net& n : m_.nets) {
      declare(n.name);
      limit(n.name, n.width);
      signals_[n.name] = {SignalKind::kNet, n.width};
    }
    for (const Register& r : m_.registers) {
      declare(r.name);
      limit(r.name, r.width);
      signals_[r.name] = {SignalKind::kRegister, r.width};
    }
    for (const MemoryPrim& mem : m_.memories) {
      declare(mem.name);
      limit(mem.name, mem.width);
      if (mem.depth == 0) report(LintKind::kWidthLimit, {mem.name}, "memory depth must be at least 1");
      memories_[mem.name] = &mem;
    }
    for (const Fsm& f : m_.fsms) {
      declare(f.name);
      declare(f.state_register());
      fsms_[f.name] = &f;
    }
    for (const Instance& inst : m_.instances) declare(inst.name);
  }

  void check_expr(const Expr& e, const std::string& where) {
    if (!e.valid()) {
      report(LintKind::kDanglingReference, {where}, "missing expression");
      return;
    }
    visit(e, [&](const Expr& x) {
      switch (x.kind()) {
        case ExprKind::kRef: {
          auto it = signals_.find(x.name());
          if (it == signals_.end()) {
            report(LintKind::kDanglingReference, {x.name()}, "reference in " + where + " does not resolve");
          } else if (it->second.width != x.width()) {
            report(LintKind::kWidthMismatch, {x.name()},
                   "referenced as " + std::to_string(x.width()) + " bits in " + where + ", declared " +
                       std::to_string(it->second.width));
          }
          break;
        }
        case ExprKind::kInState: {
          auto it = fsms_.find(x.name());
          if (it == fsms_.end() || !it->second->state_index(x.state())) {
            report(LintKind::kDanglingReference, {x.name() + "." + x.state()},
                   "state test in " + where + " does not resolve");
          }
          break;
        }
        case ExprKind::kMemRead: {
          auto it = memories_.find(x.name());
          if (it == memories_.end()) {
            report(LintKind::kDanglingReference, {x.name()}, "memory read in " + where + " does not resolve");
          } else if (it->second->width != x.width()) {
            report(LintKind::kWidthMismatch, {x.name()}, "memory read width differs from memory width");
          }
          break;
        }
        default:
          break;
      }
    });
  }

  void drive(const std::string& signal, const std::string& source) {
    drivers_[signal].push_back(source);
  }

  void check_exprs() {
    drivers_.clear();
    for (const Assignment& a : m_.comb) {
      check_expr(a.value, a.target);
      auto it = signals_.find(a.target);
      if (it == signals_.end()) {
        report(LintKind::kDanglingReference, {a.target}, "assignment target does not resolve");
        continue;
      }
      if (it->second.kind == SignalKind::kInPort || it->second.kind == SignalKind::kRegister) {
        report(LintKind::kIllegalTarget, {a.target}, "continuous assignment must drive an output port or net");
        continue;
      }
      if (a.value.valid() && a.value.width() != it->second.width) {
        report(LintKind::kWidthMismatch, {a.target},
               "assigned " + std::to_string(a.value.width()) + " bits, declared " +
                   std::to_string(it->second.width));
      }
      drive(a.target, "assign");
    }
    for (const Register& r : m_.registers) {
      if (r.next) {
        check_expr(*r.next, r.name);
        if (r.next->valid() && r.next->width() != r.width) {
          report(LintKind::kWidthMismatch, {r.name}, "next-state width differs from register width");
        }
        reg_writers_[r.name].insert("<next>");
      }
      if ((r.reset_value & ~mask(r.width)) != 0) {
        report(LintKind::kWidthMismatch, {r.name}, "reset value wider than register");
      }
    }
    for (const MemWritePort& w : m_.mem_writes) {
      auto it = memories_.find(w.memory);
      if (it == memories_.end()) {
        report(LintKind::kDanglingReference, {w.memory}, "memory write does not resolve");
        continue;
      }
      check_expr(w.enable, w.memory + " write enable");
      check_expr(w.addr, w.memory + " write address");
      check_expr(w.data, w.memory + " write data");
      if (w.enable.valid() && w.enable.width() != 1) {
        report(LintKind::kWidthMismatch, {w.memory}, "write enable must be 1 bit");
      }
      if (w.data.valid() && w.data.width() != it->second->width) {
        report(LintKind::kWidthMismatch, {w.memory}, "write data width differs from memory width");
      }
    }
    for (const Instance& inst : m_.instances) check_instance(inst);
  }

  void check_instance(const Instance& inst) {
    const RtlModule* child = context_ ? context_->find(inst.module) : nullptr;
    if (child == nullptr) {
      report(LintKind::kDanglingReference, {inst.name, inst.module}, "instantiated module does not resolve");
      return;
    }
    std::set<std::string> connected;
    for (const Connection& c : inst.connections) {
      const Port* port = child->find_port(c.port);
      if (port == nullptr) {
        report(LintKind::kDanglingReference, {inst.name + "." + c.port}, "connection names no such port");
        continue;
      }
      if (!connected.insert(c.port).second) {
        report(LintKind::kMultipleDrivers, {inst.name + "." + c.port}, "port connected twice");
      }
      auto sig = signals_.find(c.signal);
      if (sig == signals_.end() || sig->second.kind == SignalKind::kRegister) {
        report(LintKind::kDanglingReference, {c.signal}, "connection of " + inst.name + "." + c.port +
                                                             " must name a port or net");
        continue;
      }
      if (sig->second.width != port->width) {
        report(LintKind::kWidthMismatch, {c.signal, inst.name + "." + c.port},
               "connection widths " + std::to_string(sig->second.width) + " and " +
                   std::to_string(port->width) + " differ");
      }
      if (port->dir == PortDir::kOut) {
        if (sig->second.kind == SignalKind::kInPort) {
          report(LintKind::kIllegalTarget, {c.signal}, "child output drives an input port");
        } else {
          drive(c.signal, inst.name + "." + c.port);
        }
      }
    }
    for (const Port& p : child->ports) {
      if (p.dir == PortDir::kIn && !connected.contains(p.name)) {
        report(LintKind::kUndriven, {inst.name + "." + p.name}, "instance input left unconnected");
      }
    }
  }

  void check_drivers() {
    for (const auto& [name, info] : signals_) {
      if (info.kind != SignalKind::kOutPort && info.kind != SignalKind::kNet) continue;
      auto it = drivers_.find(name);
      std::size_t n = it == drivers_.end() ? 0 : it->second.size();
      if (n == 0) report(LintKind::kUndriven, {name}, "signal has no driver");
      if (n > 1) report(LintKind::kMultipleDrivers, {name}, std::to_string(n) + " drivers");
    }
  }

  void check_fsms() {
    for (const Fsm& f : m_.fsms) {
      if (f.states.empty()) {
        report(LintKind::kBadFsm, {f.name}, "fsm has no states");
        continue;
      }
      std::set<std::string> unique(f.states.begin(), f.states.end());
      if (unique.size() != f.states.size()) report(LintKind::kBadFsm, {f.name}, "duplicate state names");
      if (!f.state_index(f.reset_state)) report(LintKind::kBadFsm, {f.name, f.reset_state}, "reset state unknown");
      for (const Transition& t : f.transitions) {
        if (!f.state_index(t.from) || !f.state_index(t.to)) {
          report(LintKind::kBadFsm, {f.name, t.from, t.to}, "transition endpoint is not a state");
        }
        check_expr(t.guard, f.name + " guard");
        if (t.guard.valid() && t.guard.width() != 1) {
          report(LintKind::kWidthMismatch, {f.name}, "guard must be 1 bit");
        }
        for (const Assignment& a : t.actions) {
          check_expr(a.value, a.target);
          auto it = signals_.find(a.target);
          if (it == signals_.end() || it->second.kind != SignalKind::kRegister) {
            report(LintKind::kIllegalTarget, {a.target}, "fsm actions may only load registers");
            continue;
          }
          if (a.value.valid() && a.value.width() != it->second.width) {
            report(LintKind::kWidthMismatch, {a.target}, "action width differs from register width");
          }
          reg_writers_[a.target].insert(f.name);
        }
      }
    }
    for (const auto& [reg, writers] : reg_writers_) {
      if (writers.size() > 1) {
        std::vector<std::string> s{reg};
        s.insert(s.end(), writers.begin(), writers.end());
        report(LintKind::kMultipleDrivers, s, "register loaded from more than one process");
      }
    }
  }

  void add_edges_from(const Expr& e, const std::string& target) {
    visit(e, [&](const Expr& x) {
      if (x.kind() != ExprKind::kRef) return;
      auto it = signals_.find(x.name());
      if (it != signals_.end() && it->second.kind != SignalKind::kRegister) preds_[target].insert(x.name());
    });
  }

  void build_graph() {
    preds_.clear();
    for (const Assignment& a : m_.comb) {
      if (a.value.valid()) add_edges_from(a.value, a.target);
    }
    for (const Instance& inst : m_.instances) {
      const CombSummary* summary = child_summary_ ? child_summary_(inst.module) : nullptr;
      if (summary == nullptr) continue;
      std::map<std::string, std::string> wiring;
      for (const Connection& c : inst.connections) wiring[c.port] = c.signal;
      for (const auto& [out, ins] : *summary) {
        auto o = wiring.find(out);
        if (o == wiring.end()) continue;
        for (const std::string& in : ins) {
          auto i = wiring.find(in);
          if (i != wiring.end()) preds_[o->second].insert(i->second);
        }
      }
    }
  }

  // Tarjan's strongly connected components over the predecessor graph.
  void check_cycles() {
    build_graph();
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::function<void(const std::string&)> strong = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const std::string& w : preds_[v]) {
        if (!index.contains(w)) {
          strong(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::string> component;
        std::string w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          component.push_back(w);
        } while (w != v);
        bool self_loop = preds_[v].contains(v);
        if (component.size() > 1 || self_loop) {
          std::sort(component.begin(), component.end());
          report(LintKind::kCombinationalCycle, component, "combinational cycle");
        }
      }
    };
    std::vector<std::string> nodes;
    for (const auto& [n, _] : preds_) nodes.push_back(n);
    for (const std::string& n : nodes) {
      if (!index.contains(n)) strong(n);
    }
  }

  const RtlModule& m_;
  const Netlist* context_;
  std::function<const CombSummary*(const std::string&)> child_summary_;
  std::vector<LintViolation> out_;
  std::set<std::string> names_;
  std::map<std::string, SignalInfo> signals_;
  std::map<std::string, const MemoryPrim*> memories_;
  std::map<std::string, const Fsm*> fsms_;
  std::map<std::string, std::vector<std::string>> drivers_;
  std::map<std::string, std::set<std::string>> reg_writers_;
  std::map<std::string, std::set<std::string>> preds_;
};

class SummaryCache {
 public:
  explicit SummaryCache(const Netlist* netlist) : netlist_(netlist) {}

  const CombSummary* get(const std::string& module) {
    if (netlist_ == nullptr) return nullptr;
    if (auto it = cache_.find(module); it != cache_.end()) return &it->second;
    const RtlModule* m = netlist_->find(module);
    if (m == nullptr || in_progress_.contains(module)) return nullptr;
    in_progress_.insert(module);
    ModuleChecker checker(*m, netlist_, [this](const std::string& child) { return get(child); });
    CombSummary s = checker.summary();
    in_progress_.erase(module);
    return &cache_.emplace(module, std::move(s)).first->second;
  }

 private:
  const Netlist* netlist_;
  std::map<std::string, CombSummary> cache_;
  std::set<std::string> in_progress_;
};

}  // namespace

std::vector<LintViolation> check_module(const RtlModule& module, const Netlist* context) {
  SummaryCache cache(context);
  ModuleChecker checker(module, context, [&](const std::string& child) { return cache.get(child); });
  return checker.run();
}

std::vector<LintViolation> check_netlist(const Netlist& netlist) {
  std::vector<LintViolation> out;
  std::set<std::string> names;
  for (const RtlModule& m : netlist.modules) {
    if (!names.insert(m.name).second) {
      out.push_back({LintKind::kDuplicateName, m.name, {m.name}, "module defined twice"});
    }
  }
  if (netlist.find(netlist.top) == nullptr) {
    out.push_back({LintKind::kDanglingReference, netlist.top, {netlist.top}, "top module does not resolve"});
  }

  // Instantiation graph must be acyclic.
  std::map<std::string, int> color;
  std::function<bool(const RtlModule&)> acyclic = [&](const RtlModule& m) {
    color[m.name] = 1;
    for (const Instance& inst : m.instances) {
      const RtlModule* child = netlist.find(inst.module);
      if (child == nullptr) continue;
      if (color[child->name] == 1) return false;
      if (color[child->name] == 0 && !acyclic(*child)) return false;
    }
    color[m.name] = 2;
    return true;
  };
  for (const RtlModule& m : netlist.modules) {
    if (color[m.name] == 0 && !acyclic(m)) {
      out.push_back({LintKind::kHierarchy, m.name, {m.name}, "recursive instantiation"});
      return out;
    }
  }

  SummaryCache cache(&netlist);
  for (const RtlModule& m : netlist.modules) {
    ModuleChecker checker(m, &netlist, [&](const std::string& child) { return cache.get(child); });
    auto v = checker.run();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace patternforge::rtl
