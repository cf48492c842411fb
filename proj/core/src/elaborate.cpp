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

#include <map>
#include <set>

#include "patternforge/emit.hpp"
#include "patternforge/genlib.hpp"

namespace patternforge::emit {

using model::ContainerKind;
using model::TargetKind;
using namespace rtl;

namespace {

// Children of the top module and the signals their ports attach to.
class TopWiring {
 public:
  explicit TopWiring(const std::string& name) : top_(name) {}

  void add(const RtlModule& module, std::string instance, bool free_methods) {
    Child c;
    c.module = &module;
    c.instance = std::move(instance);
    c.free_methods = free_methods;
    index_[c.instance] = children_.size();
    children_.push_back(std::move(c));
  }

  bool has_port(const std::string& instance, const std::string& port) const {
    return child(instance).module->find_port(port) != nullptr;
  }

  // Joins two child ports through a top-level net.
  void join(const std::string& a, const std::string& a_port, const std::string& b, const std::string& b_port,
            const std::string& net) {
    const Port* pa = child(a).module->find_port(a_port);
    const Port* pb = child(b).module->find_port(b_port);
    if (pa == nullptr || pb == nullptr) return;
    if (!top_.has(net)) top_.net(net, pa->width);
    connect(a, a_port, net);
    connect(b, b_port, net);
  }

  // Brings a child port out as a top-level port of the same direction.
  std::string expose(const std::string& instance, const std::string& port, const std::string& top_port) {
    const Port* p = child(instance).module->find_port(port);
    if (p == nullptr) return {};
    if (p->dir == PortDir::kIn) {
      top_.input(top_port, p->width);
    } else {
      top_.output(top_port, p->width);
    }
    connect(instance, port, top_port);
    return top_port;
  }

  void connect(const std::string& instance, const std::string& port, const std::string& signal) {
    Child& c = child(instance);
    if (!c.wired.emplace(port, signal).second) {
      throw std::logic_error("port " + instance + "." + port + " wired twice");
    }
  }

  // Remaining inputs are tied low or, for free method groups, exposed.
  void finish() {
    for (Child& c : children_) {
      for (const Port& p : c.module->ports) {
        if (c.wired.contains(p.name)) continue;
        if (c.free_methods) {
          expose(c.instance, p.name, c.module->name + "_" + p.name);
        } else if (p.dir == PortDir::kIn) {
          std::string tie = c.module->name + "_" + p.name;
          top_.net(tie, p.width);
          top_.assign(tie, lit(p.width, 0));
          connect(c.instance, p.name, tie);
        }
      }
      Instance inst;
      inst.name = c.instance;
      inst.module = c.module->name;
      for (const Port& p : c.module->ports) {
        auto it = c.wired.find(p.name);
        if (it != c.wired.end()) inst.connections.push_back({p.name, it->second});
      }
      top_.instance(std::move(inst));
    }
  }

  ModuleBuilder& builder() { return top_; }

 private:
  struct Child {
    const RtlModule* module = nullptr;
    std::string instance;
    bool free_methods = false;
    std::map<std::string, std::string> wired;
  };

  Child& child(const std::string& instance) { return children_.at(index_.at(instance)); }
  const Child& child(const std::string& instance) const { return children_.at(index_.at(instance)); }

  ModuleBuilder top_;
  std::vector<Child> children_;
  std::map<std::string, std::size_t> index_;
};

const std::vector<std::string>& sram_roles() {
  static const std::vector<std::string> roles{"p_addr", "p_data", "p_data_out", "p_we", "req", "ack"};
  return roles;
}

DeviceKind core_device(ContainerKind kind) {
  switch (kind) {
    case ContainerKind::kReadBuffer: return DeviceKind::kStreamSource;
    case ContainerKind::kWriteBuffer: return DeviceKind::kStreamSink;
    case ContainerKind::kStack: return DeviceKind::kLifoStorage;
    default: return DeviceKind::kFifoStorage;
  }
}

std::string instance_name(const std::string& module) { return "u_" + module; }

struct Placed {
  const model::ContainerSpec* container = nullptr;
  const model::PhysicalTarget* target = nullptr;
  const model::IteratorSpec* iterator = nullptr;
  model::MappingPlan plan;
  std::size_t module = 0;  // index into modules
};

}  // namespace

Netlist elaborate(const model::SystemSpec& spec, const ElaborateOptions& opts) {
  auto violations = model::validate_system(spec);
  if (!violations.empty()) {
    throw ElaborationError("system description has " + std::to_string(violations.size()) + " violation(s)",
                           std::move(violations));
  }
  if (!model::is_identifier(opts.top_name)) throw ElaborationError("bad top module name", {});

  Netlist n;
  n.top = opts.top_name;
  std::vector<Placed> placed;
  std::map<std::string, std::uint64_t> next_base;
  std::map<std::string, std::vector<std::size_t>> clients;  // sram target -> placed indices

  for (const model::ContainerSpec& c : spec.containers) {
    Placed p;
    p.container = &c;
    p.target = spec.target_of(c.name);
    p.plan = model::plan_mapping(c, *p.target);
    if (p.target->kind == TargetKind::kSram) {
      p.plan.base_address = next_base[p.target->name];
      next_base[p.target->name] += p.plan.footprint_words(c);
      clients[p.target->name].push_back(placed.size());
    }
    auto its = spec.iterators_of(c.name);
    p.iterator = its.empty() ? nullptr : its.front();
    RtlModule m = gen::gen_container(c, p.plan);
    if (p.iterator != nullptr) {
      auto used = gen::container_ops_used_by(*p.iterator, c.kind);
      if (!used.empty()) m = gen::prune_unused(m, used);
    }
    p.module = n.modules.size();
    n.modules.push_back(std::move(m));
    placed.push_back(p);
  }

  std::map<std::string, std::size_t> arbiters;  // target -> module index
  for (const model::PhysicalTarget& t : spec.targets) {
    auto it = clients.find(t.name);
    if (!t.shared || it == clients.end() || it->second.size() < 2) continue;
    arbiters[t.name] = n.modules.size();
    n.modules.push_back(gen::gen_arbiter(t, static_cast<unsigned>(it->second.size())));
  }

  std::map<std::string, std::size_t> iterator_modules;
  for (const Placed& p : placed) {
    if (p.iterator == nullptr) continue;
    iterator_modules[p.iterator->name] = n.modules.size();
    n.modules.push_back(gen::gen_iterator(*p.iterator, *p.container, p.plan));
  }

  std::set<std::string> bound_iterators;
  std::vector<std::size_t> algorithm_modules;
  for (const model::AlgorithmBinding& a : spec.algorithms) {
    const model::IteratorSpec* src = spec.find_iterator(a.source_iterator);
    const model::IteratorSpec* snk = spec.find_iterator(a.sink_iterator);
    const model::ContainerSpec* sc = spec.find_container(src->container);
    bound_iterators.insert(src->name);
    bound_iterators.insert(snk->name);
    algorithm_modules.push_back(n.modules.size());
    if (a.kind == model::AlgorithmKind::kCopy) {
      n.modules.push_back(algo::build_copy(a, *src, *snk, sc->element.width_bits));
    } else {
      n.modules.push_back(algo::build_blur(a, *src, *snk, sc->element.width_bits, opts.kernel));
    }
  }

  std::set<std::string> names{opts.top_name};
  for (const RtlModule& m : n.modules) {
    if (!names.insert(m.name).second) {
      throw ElaborationError("two generated modules would be named '" + m.name + "'", {});
    }
  }

  try {
    TopWiring top(opts.top_name);
    for (const Placed& p : placed) {
      top.add(n.modules[p.module], instance_name(n.modules[p.module].name), p.iterator == nullptr);
    }
    for (const auto& [target, index] : arbiters) top.add(n.modules[index], instance_name(n.modules[index].name), false);
    for (const Placed& p : placed) {
      if (p.iterator == nullptr) continue;
      const RtlModule& m = n.modules[iterator_modules.at(p.iterator->name)];
      top.add(m, instance_name(m.name), !bound_iterators.contains(p.iterator->name));
    }
    for (std::size_t index : algorithm_modules) top.add(n.modules[index], instance_name(n.modules[index].name), false);

    // Iterator <-> container method interfaces.
    for (const Placed& p : placed) {
      if (p.iterator == nullptr) continue;
      const RtlModule& cm = n.modules[p.module];
      const RtlModule& im = n.modules[iterator_modules.at(p.iterator->name)];
      for (const Port& port : im.ports) {
        if (port.name.rfind("c_", 0) != 0) continue;
        std::string cport = port.name.substr(2);
        top.join(instance_name(im.name), port.name, instance_name(cm.name), cport, p.container->name + "_" + cport);
      }
    }

    // Algorithm <-> iterator method interfaces.
    for (std::size_t index : algorithm_modules) {
      const RtlModule& am = n.modules[index];
      for (const Port& port : am.ports) {
        for (const auto& [it_name, it_index] : iterator_modules) {
          std::string prefix = it_name + "_";
          if (port.name.rfind(prefix, 0) != 0) continue;
          const RtlModule& im = n.modules[it_index];
          std::string iport = port.name.substr(prefix.size());
          if (im.find_port(iport) == nullptr) continue;
          top.join(instance_name(am.name), port.name, instance_name(im.name), iport, port.name);
          break;
        }
      }
    }

    // Implementation interfaces out to the devices.
    for (const Placed& p : placed) {
      const RtlModule& cm = n.modules[p.module];
      const std::string inst = instance_name(cm.name);
      const std::string& cname = p.container->name;
      ExternalInterface dev;
      dev.beat_width = p.plan.beat_width_bits;
      dev.element_width = p.plan.element_width_bits;
      dev.beats_per_element = p.plan.beats_per_element;

      if (p.target->kind != TargetKind::kSram) {
        dev.name = cname;
        dev.kind = p.target->kind == TargetKind::kLineBuffer3 ? DeviceKind::kStreamSource
                                                              : core_device(p.container->kind);
        if (p.target->kind == TargetKind::kLineBuffer3) {
          dev.beat_width = dev.element_width = p.container->element.width_bits;
          dev.beats_per_element = 1;
        }
        dev.depth = p.plan.footprint_words(*p.container);
        for (const char* role : {"p_empty", "p_full", "p_read", "p_write", "p_data", "p_data_out"}) {
          std::string name = top.expose(inst, role, cname + "_" + role);
          if (!name.empty()) dev.ports[role] = name;
        }
        n.interfaces.push_back(std::move(dev));
        continue;
      }

      // Fill/drain groups of sram-backed buffers.
      for (auto [kind, roles] : {std::pair{DeviceKind::kPushSource, std::vector<std::string>{"p_push", "p_push_data", "p_push_done"}},
                                 std::pair{DeviceKind::kPopSink, std::vector<std::string>{"p_pop", "p_pop_data", "p_pop_done"}}}) {
        ExternalInterface group;
        group.name = cname;
        group.kind = kind;
        group.beat_width = p.plan.beat_width_bits;
        group.element_width = p.plan.element_width_bits;
        group.beats_per_element = p.plan.beats_per_element;
        for (const std::string& role : roles) {
          std::string name = top.expose(inst, role, cname + "_" + role);
          if (!name.empty()) group.ports[role] = name;
        }
        if (!group.ports.empty()) n.interfaces.push_back(std::move(group));
      }

      if (arbiters.contains(p.target->name)) continue;
      dev.name = p.target->name;
      dev.kind = DeviceKind::kSram;
      dev.depth = std::uint64_t{1} << p.target->addr_width_bits;
      dev.read_latency = p.target->read_latency_cycles;
      for (const std::string& role : sram_roles()) {
        std::string name = top.expose(inst, role, p.target->name + "_" + role);
        if (!name.empty()) dev.ports[role] = name;
      }
      n.interfaces.push_back(std::move(dev));
    }

    for (const auto& [target_name, index] : arbiters) {
      const RtlModule& am = n.modules[index];
      const std::string arb = instance_name(am.name);
      const auto& members = clients.at(target_name);
      for (std::size_t i = 0; i < members.size(); ++i) {
        const Placed& p = placed[members[i]];
        const std::string inst = instance_name(n.modules[p.module].name);
        const std::string c = "c" + std::to_string(i) + "_";
        const std::string& cname = p.container->name;
        top.join(inst, "p_addr", arb, c + "addr", cname + "_p_addr");
        top.join(inst, "p_we", arb, c + "we", cname + "_p_we");
        top.join(inst, "p_data_out", arb, c + "wdata", cname + "_p_data_out");
        top.join(inst, "req", arb, c + "req", cname + "_req");
        top.join(inst, "ack", arb, c + "ack", cname + "_ack");
        top.join(inst, "p_data", arb, c + "rdata", cname + "_p_data");
      }
      const model::PhysicalTarget* t = spec.find_target(target_name);
      ExternalInterface dev;
      dev.name = target_name;
      dev.kind = DeviceKind::kSram;
      dev.beat_width = dev.element_width = t->data_bus_width_bits;
      dev.depth = std::uint64_t{1} << t->addr_width_bits;
      dev.read_latency = t->read_latency_cycles;
      for (const std::string& role : sram_roles()) {
        std::string name = top.expose(arb, role, target_name + "_" + role);
        if (!name.empty()) dev.ports[role] = name;
      }
      n.interfaces.push_back(std::move(dev));
    }

    top.finish();
    n.modules.push_back(std::move(top.builder()).build());
  } catch (const std::logic_error& e) {
    throw ElaborationError(std::string("top-level wiring failed: ") + e.what(), {});
  }

  auto lint = check_netlist(n);
  if (!lint.empty()) throw ElaborationError("generated netlist fails lint", {}, std::move(lint));
  return n;
}

}  // namespace patternforge::emit
