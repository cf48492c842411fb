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

#ifndef PATTERNFORGE_MODEL_HPP_
#define PATTERNFORGE_MODEL_HPP_

// Pattern vocabulary: containers, iterators, algorithms, physical targets,
// and the rules that decide whether a system description can be built.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace patternforge::model {

enum class ContainerKind { kStack, kQueue, kReadBuffer, kWriteBuffer, kVector, kAssocArray };
enum class IteratorKind { kForward, kBackward, kBidirectional, kRandom };
enum class Access { kRead, kWrite, kReadWrite };
enum class IteratorOp { kInc, kDec, kRead, kWrite, kIndex };
enum class TargetKind { kFifoCore, kLifoCore, kSram, kLineBuffer3 };
enum class AlgorithmKind { kCopy, kBlur3x3 };
enum class Direction { kForward, kBackward };

std::string_view to_string(ContainerKind kind);
std::string_view to_string(IteratorKind kind);
std::string_view to_string(Access access);
std::string_view to_string(IteratorOp op);
std::string_view to_string(TargetKind kind);
std::string_view to_string(AlgorithmKind kind);

std::optional<ContainerKind> container_kind_from_string(std::string_view text);
std::optional<IteratorKind> iterator_kind_from_string(std::string_view text);
std::optional<Access> access_from_string(std::string_view text);
std::optional<IteratorOp> iterator_op_from_string(std::string_view text);
std::optional<TargetKind> target_kind_from_string(std::string_view text);
std::optional<AlgorithmKind> algorithm_kind_from_string(std::string_view text);

struct ElementType {
  unsigned width_bits = 8;
  friend bool operator==(const ElementType&, const ElementType&) = default;
};

struct ContainerSpec {
  std::string name;
  ContainerKind kind = ContainerKind::kQueue;
  ElementType element;
  unsigned capacity = 1;  // elements, not beats
  friend bool operator==(const ContainerSpec&, const ContainerSpec&) = default;
};

struct IteratorSpec {
  std::string name;
  IteratorKind kind = IteratorKind::kForward;
  Access access = Access::kRead;
  std::string container;
  std::set<IteratorOp> used_ops;

  bool uses(IteratorOp op) const { return used_ops.contains(op); }
  bool can_read() const { return access != Access::kWrite; }
  bool can_write() const { return access != Access::kRead; }
  friend bool operator==(const IteratorSpec&, const IteratorSpec&) = default;
};

struct PhysicalTarget {
  std::string name;
  TargetKind kind = TargetKind::kFifoCore;
  unsigned data_bus_width_bits = 8;
  unsigned addr_width_bits = 0;
  unsigned read_latency_cycles = 0;
  bool shared = false;
  friend bool operator==(const PhysicalTarget&, const PhysicalTarget&) = default;
};

struct AlgorithmBinding {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::kCopy;
  std::string source_iterator;
  std::string sink_iterator;
  unsigned image_width = 0;   // blur only
  unsigned image_height = 0;  // blur only
  friend bool operator==(const AlgorithmBinding&, const AlgorithmBinding&) = default;
};

struct SystemSpec {
  std::vector<ContainerSpec> containers;
  std::vector<IteratorSpec> iterators;
  std::vector<AlgorithmBinding> algorithms;
  std::vector<PhysicalTarget> targets;
  std::map<std::string, std::string> bindings;  // container -> target

  const ContainerSpec* find_container(std::string_view name) const;
  const IteratorSpec* find_iterator(std::string_view name) const;
  const PhysicalTarget* find_target(std::string_view name) const;
  const AlgorithmBinding* find_algorithm(std::string_view name) const;
  // Target bound to `container`, or nullptr when unbound or dangling.
  const PhysicalTarget* target_of(std::string_view container) const;
  std::vector<const IteratorSpec*> iterators_of(std::string_view container) const;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

// One row of the container capability table. "Input" is the algorithm
// reading elements out of the container, "output" is writing them in.
struct Capability {
  bool random_input = false;
  bool random_output = false;
  std::set<Direction> sequential_input;
  std::set<Direction> sequential_output;
  friend bool operator==(const Capability&, const Capability&) = default;
};

const Capability& capability(ContainerKind kind);

// Whether `op` may appear in the used_ops of an iterator of `kind`.
bool op_applicable(IteratorOp op, IteratorKind kind);

// Whether a container of `kind` may be mapped onto a device of `target`.
bool mapping_compatible(ContainerKind kind, TargetKind target);

enum class AddressUnits { kElement, kBeat };

struct MappingPlan {
  std::string container;
  std::string target;
  TargetKind target_kind = TargetKind::kFifoCore;
  unsigned addr_width_bits = 0;
  unsigned read_latency_cycles = 0;
  unsigned element_width_bits = 0;
  unsigned beat_width_bits = 0;
  unsigned beats_per_element = 1;
  bool needs_arbitration_port = false;
  AddressUnits address_units = AddressUnits::kElement;
  // First SRAM word of this container's region; assigned at elaboration
  // when several containers share one memory.
  std::uint64_t base_address = 0;

  // Words (beats) of backing storage this container consumes.
  std::uint64_t footprint_words(const ContainerSpec& c) const {
    return std::uint64_t{c.capacity} * beats_per_element;
  }
  friend bool operator==(const MappingPlan&, const MappingPlan&) = default;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ModelError when the pair fails the mapping-compatibility rule.
MappingPlan plan_mapping(const ContainerSpec& container, const PhysicalTarget& target);

struct Violation {
  std::string code;
  std::vector<std::string> subjects;  // offending entity names
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

// Accumulates every rule violation; the result is sorted so that the
// outcome does not depend on the order of the input lists.
std::vector<Violation> validate_system(const SystemSpec& spec);

std::string format_violation(const Violation& v);

// Largest signal the IR carries; wider elements are rejected by validation.
inline constexpr unsigned kMaxSignalWidth = 64;

// --- system description files -------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(std::move(what)), byte_offset_(byte_offset) {}
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  std::optional<std::size_t> byte_offset_;
};

SystemSpec parse_system_spec(std::string_view document);

// Canonical JSON text (sorted keys, fixed field order); stable across runs.
std::string serialize_system_spec(const SystemSpec& spec);

bool is_identifier(std::string_view name);

}  // namespace patternforge::model

#endif  // PATTERNFORGE_MODEL_HPP_
