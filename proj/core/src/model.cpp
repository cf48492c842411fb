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

#include "patternforge/model.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

namespace patternforge::model {
namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<ContainerKind, 6> kContainerNames{{
    {ContainerKind::kStack, "stack"},
    {ContainerKind::kQueue, "queue"},
    {ContainerKind::kReadBuffer, "read_buffer"},
    {ContainerKind::kWriteBuffer, "write_buffer"},
    {ContainerKind::kVector, "vector"},
    {ContainerKind::kAssocArray, "assoc_array"},
}};
constexpr NameTable<IteratorKind, 4> kIteratorNames{{
    {IteratorKind::kForward, "forward"},
    {IteratorKind::kBackward, "backward"},
    {IteratorKind::kBidirectional, "bidirectional"},
    {IteratorKind::kRandom, "random"},
}};
constexpr NameTable<Access, 3> kAccessNames{{
    {Access::kRead, "read"},
    {Access::kWrite, "write"},
    {Access::kReadWrite, "read_write"},
}};
constexpr NameTable<IteratorOp, 5> kOpNames{{
    {IteratorOp::kInc, "inc"},
    {IteratorOp::kDec, "dec"},
    {IteratorOp::kRead, "read"},
    {IteratorOp::kWrite, "write"},
    {IteratorOp::kIndex, "index"},
}};
constexpr NameTable<TargetKind, 4> kTargetNames{{
    {TargetKind::kFifoCore, "fifo_core"},
    {TargetKind::kLifoCore, "lifo_core"},
    {TargetKind::kSram, "sram"},
    {TargetKind::kLineBuffer3, "line_buffer3"},
}};
constexpr NameTable<AlgorithmKind, 2> kAlgorithmNames{{
    {AlgorithmKind::kCopy, "copy"},
    {AlgorithmKind::kBlur3x3, "blur3x3"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [v, n] : table) {
    if (v == value) return n;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view text) {
  for (const auto& [v, n] : table) {
    if (n == text) return v;
  }
  return std::nullopt;
}

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& t) { return t.name == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

std::string_view to_string(ContainerKind kind) { return name_of(kContainerNames, kind); }
std::string_view to_string(IteratorKind kind) { return name_of(kIteratorNames, kind); }
std::string_view to_string(Access access) { return name_of(kAccessNames, access); }
std::string_view to_string(IteratorOp op) { return name_of(kOpNames, op); }
std::string_view to_string(TargetKind kind) { return name_of(kTargetNames, kind); }
std::string_view to_string(AlgorithmKind kind) { return name_of(kAlgorithmNames, kind); }

std::optional<ContainerKind> container_kind_from_string(std::string_view t) {
  return value_of(kContainerNames, t);
}
std::optional<IteratorKind> iterator_kind_from_string(std::string_view t) {
  return value_of(kIteratorNames, t);
}
std::optional<Access> access_from_string(std::string_view t) { return value_of(kAccessNames, t); }
std::optional<IteratorOp> iterator_op_from_string(std::string_view t) {
  return value_of(kOpNames, t);
}
std::optional<TargetKind> target_kind_from_string(std::string_view t) {
  return value_of(kTargetNames, t);
}
std::optional<AlgorithmKind> algorithm_kind_from_string(std::string_view t) {
  return value_of(kAlgorithmNames, t);
}

const ContainerSpec* SystemSpec::find_container(std::string_view name) const {
  return find_named(containers, name);
}
const IteratorSpec* SystemSpec::find_iterator(std::string_view name) const {
  return find_named(iterators, name);
}
const PhysicalTarget* SystemSpec::find_target(std::string_view name) const {
  return find_named(targets, name);
}
const AlgorithmBinding* SystemSpec::find_algorithm(std::string_view name) const {
  return find_named(algorithms, name);
}

const PhysicalTarget* SystemSpec::target_of(std::string_view container) const {
  auto it = bindings.find(std::string(container));
  return it == bindings.end() ? nullptr : find_target(it->second);
}

std::vector<const IteratorSpec*> SystemSpec::iterators_of(std::string_view container) const {
  std::vector<const IteratorSpec*> out;
  for (const auto& it : iterators) {
    if (it.container == container) out.push_back(&it);
  }
  return out;
}

const Capability& capability(ContainerKind kind) {
  using enum Direction;
  static const Capability kStack{false, false, {kForward}, {kBackward}};
  static const Capability kQueue{false, false, {kForward}, {kForward}};
  static const Capability kReadBuffer{false, false, {kForward}, {}};
  static const Capability kWriteBuffer{false, false, {}, {kForward}};
  static const Capability kVector{true, true, {kForward, kBackward}, {kForward, kBackward}};
  static const Capability kAssoc{true, true, {}, {}};
  switch (kind) {
    case ContainerKind::kStack: return kStack;
    case ContainerKind::kQueue: return kQueue;
    case ContainerKind::kReadBuffer: return kReadBuffer;
    case ContainerKind::kWriteBuffer: return kWriteBuffer;
    case ContainerKind::kVector: return kVector;
    case ContainerKind::kAssocArray: return kAssoc;
  }
  return kAssoc;
}

bool op_applicable(IteratorOp op, IteratorKind kind) {
  switch (op) {
    case IteratorOp::kInc:
      return kind != IteratorKind::kBackward;
    case IteratorOp::kDec:
      return kind != IteratorKind::kForward;
    case IteratorOp::kRead:
    case IteratorOp::kWrite:
      return true;
    case IteratorOp::kIndex:
      return kind == IteratorKind::kRandom;
  }
  return false;
}

bool mapping_compatible(ContainerKind kind, TargetKind target) {
  switch (kind) {
    case ContainerKind::kStack:
      return target == TargetKind::kLifoCore || target == TargetKind::kSram;
    case ContainerKind::kQueue:
    case ContainerKind::kWriteBuffer:
      return target == TargetKind::kFifoCore || target == TargetKind::kSram;
    case ContainerKind::kReadBuffer:
      return target == TargetKind::kFifoCore || target == TargetKind::kSram ||
             target == TargetKind::kLineBuffer3;
    case ContainerKind::kVector:
      return target == TargetKind::kSram;
    case ContainerKind::kAssocArray:
      return false;
  }
  return false;
}

MappingPlan plan_mapping(const ContainerSpec& container, const PhysicalTarget& target) {
  if (!mapping_compatible(container.kind, target.kind)) {
    throw ModelError("container '" + container.name + "' (" +
                     std::string(to_string(container.kind)) + ") cannot be mapped onto target '" +
                     target.name + "' (" + std::string(to_string(target.kind)) + ")");
  }
  if (container.element.width_bits == 0 || target.data_bus_width_bits == 0) {
    throw ModelError("zero-width element or bus in mapping of '" + container.name + "'");
  }
  MappingPlan plan;
  plan.container = container.name;
  plan.target = target.name;
  plan.target_kind = target.kind;
  plan.addr_width_bits = target.addr_width_bits;
  plan.read_latency_cycles = target.read_latency_cycles;
  plan.element_width_bits = container.element.width_bits;
  plan.beat_width_bits = target.data_bus_width_bits;
  plan.beats_per_element =
      (container.element.width_bits + target.data_bus_width_bits - 1) / target.data_bus_width_bits;
  plan.needs_arbitration_port = target.shared;
  plan.address_units = plan.beats_per_element == 1 ? AddressUnits::kElement : AddressUnits::kBeat;
  return plan;
}

namespace {

class ViolationSink {
 public:
  void add(std::string code, std::vector<std::string> subjects, std::string message) {
    out_.push_back({std::move(code), std::move(subjects), std::move(message)});
  }
  std::vector<Violation> take() {
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  std::vector<Violation> out_;
};

std::string str(std::string_view s) { return std::string(s); }

bool supports_traversal(const std::set<Direction>& dirs, IteratorKind kind) {
  switch (kind) {
    case IteratorKind::kForward: return dirs.contains(Direction::kForward);
    case IteratorKind::kBackward: return dirs.contains(Direction::kBackward);
    case IteratorKind::kBidirectional:
      return dirs.contains(Direction::kForward) && dirs.contains(Direction::kBackward);
    case IteratorKind::kRandom: return false;
  }
  return false;
}

std::string op_rule(IteratorOp op) {
  switch (op) {
    case IteratorOp::kInc: return "inc (move forward) needs a forward, bidirectional or random iterator";
    case IteratorOp::kDec: return "dec (move backwards) needs a backward, bidirectional or random iterator";
    case IteratorOp::kIndex: return "index (set the current position) is for random iterators only";
    default: return "";
  }
}

void check_targets(const SystemSpec& spec, ViolationSink& sink) {
  for (const auto& t : spec.targets) {
    if (t.data_bus_width_bits == 0 || t.data_bus_width_bits > kMaxSignalWidth) {
      sink.add("target_invariant", {t.name}, "data bus width must be within 1..64 bits");
    }
    switch (t.kind) {
      case TargetKind::kSram:
        if (t.addr_width_bits < 1 || t.addr_width_bits > 24) {
          sink.add("target_invariant", {t.name}, "sram address width must be within 1..24 bits");
        }
        if (t.read_latency_cycles < 1) {
          sink.add("target_invariant", {t.name}, "sram read latency must be at least 1 cycle");
        }
        break;
      case TargetKind::kFifoCore:
      case TargetKind::kLifoCore:
        if (t.addr_width_bits != 0) {
          sink.add("target_invariant", {t.name}, "sequential cores have no address bus (addr_width_bits = 0)");
        }
        break;
      case TargetKind::kLineBuffer3:
        break;
    }
  }

  std::map<std::string, std::vector<std::string>> users;
  for (const auto& [container, target] : spec.bindings) users[target].push_back(container);
  for (const auto& [target_name, containers] : users) {
    const PhysicalTarget* t = spec.find_target(target_name);
    if (t == nullptr || containers.size() < 2) continue;
    std::vector<std::string> subjects{target_name};
    subjects.insert(subjects.end(), containers.begin(), containers.end());
    if (!t->shared) {
      sink.add("shared_target_not_marked", subjects,
               "target is bound by several containers but is not marked shared");
    }
    if (t->kind != TargetKind::kSram) {
      sink.add("unshareable_target", subjects, "only sram targets can be shared between containers");
    }
  }
}

void check_containers(const SystemSpec& spec, ViolationSink& sink) {
  std::map<std::string, std::uint64_t> sram_words;
  for (const auto& c : spec.containers) {
    if (c.element.width_bits == 0 || c.element.width_bits > kMaxSignalWidth) {
      sink.add("width_limit", {c.name}, "element width must be within 1..64 bits");
    }
    if (c.capacity == 0) sink.add("capacity", {c.name}, "capacity must be at least 1");
    if (c.kind == ContainerKind::kAssocArray) {
      sink.add("unsupported_target", {c.name},
               "associative arrays have no hardware implementation in this generator");
    }
    auto binding = spec.bindings.find(c.name);
    if (binding == spec.bindings.end()) {
      sink.add("unbound_container", {c.name}, "container has no physical target binding");
      continue;
    }
    const PhysicalTarget* t = spec.find_target(binding->second);
    if (t == nullptr) {
      sink.add("dangling_reference", {c.name, binding->second}, "binding names an unknown target");
      continue;
    }
    if (c.kind != ContainerKind::kAssocArray && !mapping_compatible(c.kind, t->kind)) {
      sink.add("incompatible_mapping", {c.name, t->name},
               str(to_string(c.kind)) + " cannot be implemented over " + str(to_string(t->kind)));
      continue;
    }
    if (t->kind == TargetKind::kLineBuffer3 &&
        t->data_bus_width_bits != 3 * c.element.width_bits) {
      sink.add("line_buffer_bus_width", {c.name, t->name},
               "a 3-line buffer serves columns of three elements; bus width must be 3x the element width");
    }
    if (t->kind == TargetKind::kSram && t->data_bus_width_bits > 0) {
      auto plan = plan_mapping(c, *t);
      sram_words[t->name] += plan.footprint_words(c);
    }
  }
  for (const auto& [target_name, words] : sram_words) {
    const PhysicalTarget* t = spec.find_target(target_name);
    if (t->addr_width_bits == 0 || t->addr_width_bits > 24) continue;
    if (words > (std::uint64_t{1} << t->addr_width_bits)) {
      sink.add("sram_overflow", {target_name},
               "containers need " + std::to_string(words) + " words but the sram has " +
                   std::to_string(std::uint64_t{1} << t->addr_width_bits));
    }
  }
}

void check_iterators(const SystemSpec& spec, ViolationSink& sink) {
  std::map<std::string, std::vector<std::string>> per_container;
  for (const auto& it : spec.iterators) {
    if (it.used_ops.empty()) {
      sink.add("empty_used_ops", {it.name}, "iterator uses no operations");
    }
    for (IteratorOp op : it.used_ops) {
      if (!op_applicable(op, it.kind)) {
        sink.add("op_not_applicable", {it.name, str(to_string(op))},
                 op_rule(op) + "; iterator is " + str(to_string(it.kind)));
      }
      if (op == IteratorOp::kRead && !it.can_read()) {
        sink.add("op_requires_access", {it.name, "read"}, "read needs read or read_write access");
      }
      if (op == IteratorOp::kWrite && !it.can_write()) {
        sink.add("op_requires_access", {it.name, "write"}, "write needs write or read_write access");
      }
    }
    const ContainerSpec* c = spec.find_container(it.container);
    if (c == nullptr) {
      sink.add("dangling_reference", {it.name, it.container}, "iterator names an unknown container");
      continue;
    }
    per_container[c->name].push_back(it.name);
    const Capability& cap = capability(c->kind);
    auto traversal_ok = [&](bool random_ok, const std::set<Direction>& dirs) {
      return it.kind == IteratorKind::kRandom ? random_ok : supports_traversal(dirs, it.kind);
    };
    if (it.can_read() && !traversal_ok(cap.random_input, cap.sequential_input)) {
      sink.add("traversal_not_supported", {it.name, c->name},
               str(to_string(c->kind)) + " cannot be read by a " + str(to_string(it.kind)) +
                   " iterator");
    }
    if (it.can_write() && !traversal_ok(cap.random_output, cap.sequential_output)) {
      sink.add("traversal_not_supported", {it.name, c->name},
               str(to_string(c->kind)) + " cannot be written by a " + str(to_string(it.kind)) +
                   " iterator");
    }
    const PhysicalTarget* t = spec.target_of(c->name);
    if (t != nullptr && t->kind == TargetKind::kLineBuffer3 && it.can_write()) {
      sink.add("traversal_not_supported", {it.name, c->name}, "a 3-line buffer is read-only");
    }
  }
  for (auto& [container, names] : per_container) {
    if (names.size() > 1) {
      std::vector<std::string> subjects{container};
      subjects.insert(subjects.end(), names.begin(), names.end());
      sink.add("multiple_iterators", subjects, "at most one iterator may bind a container");
    }
  }
}

void check_algorithms(const SystemSpec& spec, ViolationSink& sink) {
  std::map<std::string, std::vector<std::string>> iterator_users;
  for (const auto& a : spec.algorithms) {
    const IteratorSpec* src = spec.find_iterator(a.source_iterator);
    const IteratorSpec* dst = spec.find_iterator(a.sink_iterator);
    if (src == nullptr) {
      sink.add("dangling_reference", {a.name, a.source_iterator}, "unknown source iterator");
    }
    if (dst == nullptr) {
      sink.add("dangling_reference", {a.name, a.sink_iterator}, "unknown sink iterator");
    }
    iterator_users[a.source_iterator].push_back(a.name);
    iterator_users[a.sink_iterator].push_back(a.name);
    if (src == nullptr || dst == nullptr) continue;
    if (src->name == dst->name) {
      sink.add("iterator_shared", {a.name, src->name}, "source and sink must be different iterators");
    }
    if (!src->can_read() || !src->uses(IteratorOp::kRead)) {
      sink.add("algorithm_source_access", {a.name, src->name},
               "source iterator must have read access and use read");
    }
    if (!dst->can_write() || !dst->uses(IteratorOp::kWrite)) {
      sink.add("algorithm_sink_access", {a.name, dst->name},
               "sink iterator must have write access and use write");
    }
    for (const IteratorSpec* it : {src, dst}) {
      if (!it->uses(IteratorOp::kInc) && !it->uses(IteratorOp::kDec)) {
        sink.add("algorithm_needs_advance", {a.name, it->name},
                 "algorithm iterators must use inc or dec to advance");
      }
    }
    const ContainerSpec* sc = spec.find_container(src->container);
    const ContainerSpec* dc = spec.find_container(dst->container);
    if (sc == nullptr || dc == nullptr) continue;
    if (sc->element.width_bits != dc->element.width_bits) {
      sink.add("width_mismatch", {a.name, sc->name, dc->name},
               "source and sink element widths differ");
    }
    const PhysicalTarget* st = spec.target_of(sc->name);
    const PhysicalTarget* dt = spec.target_of(dc->name);
    bool src_is_line_buffer = st != nullptr && st->kind == TargetKind::kLineBuffer3;
    if (dt != nullptr && dt->kind == TargetKind::kLineBuffer3) {
      sink.add("line_buffer_requires_blur", {a.name, dc->name}, "a 3-line buffer cannot be a sink");
    }
    if (a.kind == AlgorithmKind::kCopy) {
      if (src_is_line_buffer) {
        sink.add("line_buffer_requires_blur", {a.name, sc->name},
                 "3-line buffers serve pixel columns and feed blur3x3 only");
      }
      continue;
    }
    if (a.image_width < 3 || a.image_height < 3) {
      sink.add("image_too_small", {a.name}, "blur3x3 needs an image of at least 3x3 pixels");
    }
    if (!src_is_line_buffer) {
      sink.add("blur_requires_line_buffer", {a.name, sc->name},
               "blur3x3 source container must be bound to a line_buffer3 target");
    } else if (sc->capacity != a.image_width) {
      sink.add("line_buffer_length", {a.name, sc->name},
               "line buffer capacity (pixels per row) must equal image_width");
    }
  }
  for (auto& [iterator, users] : iterator_users) {
    if (users.size() > 1) {
      std::vector<std::string> subjects{iterator};
      subjects.insert(subjects.end(), users.begin(), users.end());
      sink.add("iterator_shared", subjects, "an iterator can serve only one algorithm port");
    }
  }
}

}  // namespace

std::vector<Violation> validate_system(const SystemSpec& spec) {
  ViolationSink sink;
  check_targets(spec, sink);
  check_containers(spec, sink);
  check_iterators(spec, sink);
  check_algorithms(spec, sink);
  return sink.take();
}

std::string format_violation(const Violation& v) {
  std::ostringstream os;
  os << v.code << " [";
  for (std::size_t i = 0; i < v.subjects.size(); ++i) os << (i ? ", " : "") << v.subjects[i];
  os << "]: " << v.message;
  return os.str();
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char ch) { return alpha(ch) || (ch >= '0' && ch <= '9'); });
}

}  // namespace patternforge::model
