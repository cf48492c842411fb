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

#ifndef PATTERNFORGE_RTLIR_HPP_
#define PATTERNFORGE_RTLIR_HPP_

// Structural RTL intermediate representation shared by the generators, the
// Verilog emitter and the cycle simulator.
//
// A design is a Netlist of RtlModules. Every module has an implicit clock and
// synchronous active-high reset; registers, FSM state and memory writes update
// on the clock edge, everything else is combinational. All values are unsigned
// bit vectors of 1..64 bits.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace patternforge::rtl {

inline constexpr unsigned kMaxWidth = 64;

inline std::uint64_t mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

// Bits needed to hold values 0..max_value (at least 1).
unsigned bits_for(std::uint64_t max_value);

enum class ExprKind : std::uint8_t {
  kConst,
  kRef,      // port, net or register
  kInState,  // 1 when an FSM is in a given state
  kMemRead,  // asynchronous memory read
  kSlice,
  kConcat,   // operands most-significant first
  kNot,
  kAnd,
  kOr,
  kXor,
  kEq,
  kAdd,  // modular
  kSub,  // modular
  kMux,  // operands: select, when-true, when-false
};

struct ExprNode;

class Expr {
 public:
  Expr() = default;

  bool valid() const { return node_ != nullptr; }
  ExprKind kind() const;
  unsigned width() const;
  std::uint64_t value() const;
  const std::string& name() const;   // ref / memory / fsm name
  const std::string& state() const;  // kInState only
  unsigned lo() const;               // kSlice only
  const std::vector<Expr>& operands() const;

  bool is_const() const { return valid() && kind() == ExprKind::kConst; }
  bool is_const(std::uint64_t v) const { return is_const() && value() == v; }
  bool is_ones() const { return is_const() && value() == mask(width()); }

  friend bool operator==(const Expr& a, const Expr& b);

  static Expr make(ExprNode node);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::kConst;
  unsigned width = 1;
  std::uint64_t value = 0;
  std::string name;
  std::string state;
  unsigned lo = 0;
  std::vector<Expr> operands;
};

// Builders. They enforce the per-operator width rules (throwing
// std::invalid_argument) and fold constants, so rebuilding an already built
// tree reproduces it exactly.
Expr lit(unsigned width, std::uint64_t value);
Expr ref(std::string name, unsigned width);
Expr in_state(std::string fsm, std::string state);
Expr mem_read(std::string memory, unsigned width, Expr addr);
Expr slice(Expr e, unsigned lo, unsigned width);
Expr concat(std::vector<Expr> msb_first);
Expr bit_not(Expr e);
Expr bit_and(Expr a, Expr b);
Expr bit_or(Expr a, Expr b);
Expr bit_xor(Expr a, Expr b);
Expr eq(Expr a, Expr b);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mux(Expr select, Expr when_true, Expr when_false);

// Conveniences composed from the primitives above.
Expr bit(Expr e, unsigned index);
Expr zext(Expr e, unsigned width);  // zero-extend or truncate
Expr ne(Expr a, Expr b);
Expr eq_const(Expr e, std::uint64_t v);
Expr any_of(const std::vector<Expr>& bits);
Expr all_of(const std::vector<Expr>& bits);
// e * factor computed in `width` bits with shifts and adds.
Expr mul_const(Expr e, std::uint64_t factor, unsigned width);

// Visits every node, parents before operands.
void visit(const Expr& e, const std::function<void(const Expr&)>& fn);
std::size_t operator_count(const Expr& e);
std::string to_string(const Expr& e);

enum class PortDir { kIn, kOut };

struct Port {
  std::string name;
  PortDir dir = PortDir::kIn;
  unsigned width = 1;
  friend bool operator==(const Port&, const Port&) = default;
};

struct Net {
  std::string name;
  unsigned width = 1;
  friend bool operator==(const Net&, const Net&) = default;
};

struct Register {
  std::string name;
  unsigned width = 1;
  std::uint64_t reset_value = 0;
  // Loaded every cycle when present; otherwise the register is written only
  // by FSM actions and holds its value between them.
  std::optional<Expr> next;
  friend bool operator==(const Register&, const Register&) = default;
};

struct MemoryPrim {
  std::string name;
  unsigned depth = 1;
  unsigned width = 1;
  friend bool operator==(const MemoryPrim&, const MemoryPrim&) = default;
};

struct MemWritePort {
  std::string memory;
  Expr enable;
  Expr addr;
  Expr data;
  friend bool operator==(const MemWritePort&, const MemWritePort&) = default;
};

struct Assignment {
  std::string target;
  Expr value;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Transition {
  std::string from;
  Expr guard;
  std::vector<Assignment> actions;  // register loads
  std::string to;
  friend bool operator==(const Transition&, const Transition&) = default;
};

// Guards are tried in list order per state; no match means stay.
struct Fsm {
  std::string name;
  std::vector<std::string> states;
  std::string reset_state;
  std::vector<Transition> transitions;

  std::optional<std::size_t> state_index(std::string_view state) const;
  unsigned state_bits() const { return bits_for(states.empty() ? 0 : states.size() - 1); }
  std::string state_register() const { return name + "_state"; }
  friend bool operator==(const Fsm&, const Fsm&) = default;
};

struct Connection {
  std::string port;    // child port
  std::string signal;  // parent port or net
  friend bool operator==(const Connection&, const Connection&) = default;
};

struct Instance {
  std::string name;
  std::string module;
  std::vector<Connection> connections;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct RtlModule {
  std::string name;
  std::vector<Port> ports;
  std::vector<Net> nets;
  std::vector<Register> registers;
  std::vector<MemoryPrim> memories;
  std::vector<MemWritePort> mem_writes;
  std::vector<Fsm> fsms;
  std::vector<Assignment> comb;
  std::vector<Instance> instances;

  const Port* find_port(std::string_view name) const;
  const Register* find_register(std::string_view name) const;
  const Fsm* find_fsm(std::string_view name) const;
  bool has_state() const { return !registers.empty() || !fsms.empty() || !mem_writes.empty(); }
  // Operation names taken from m_<op> request ports, in port order.
  std::vector<std::string> method_ops() const;
  friend bool operator==(const RtlModule&, const RtlModule&) = default;
};

// Devices outside the generated design that the simulator models.
enum class DeviceKind {
  kStreamSource,  // producer behind a fifo core (p_empty/p_read/p_data)
  kStreamSink,    // consumer behind a fifo core (p_full/p_write/p_data_out)
  kFifoStorage,   // fifo core used as a queue's storage
  kLifoStorage,   // lifo core used as a stack's storage
  kSram,          // p_addr/p_data/p_data_out/p_we/req/ack
  kPushSource,    // producer filling an sram-backed buffer (p_push/...)
  kPopSink,       // consumer draining an sram-backed buffer (p_pop/...)
};

std::string_view to_string(DeviceKind kind);

struct ExternalInterface {
  std::string name;  // container or target name
  DeviceKind kind = DeviceKind::kStreamSource;
  unsigned beat_width = 8;
  unsigned element_width = 8;
  unsigned beats_per_element = 1;
  std::uint64_t depth = 0;  // storage beats or sram words
  unsigned read_latency = 0;
  std::map<std::string, std::string> ports;  // role -> top-level port
  friend bool operator==(const ExternalInterface&, const ExternalInterface&) = default;
};

struct Netlist {
  std::vector<RtlModule> modules;
  std::string top;
  std::vector<ExternalInterface> interfaces;

  const RtlModule* find(std::string_view module) const;
  const RtlModule& top_module() const;
  // Top-level wires.
  const std::vector<Net>& nets() const { return top_module().nets; }
  friend bool operator==(const Netlist&, const Netlist&) = default;
};

enum class LintKind {
  kDuplicateName,
  kDanglingReference,
  kWidthMismatch,
  kWidthLimit,
  kMultipleDrivers,
  kUndriven,
  kIllegalTarget,
  kBadFsm,
  kCombinationalCycle,
  kHierarchy,
};

std::string_view to_string(LintKind kind);

struct LintViolation {
  LintKind kind;
  std::string module;
  std::vector<std::string> signals;
  std::string message;
  friend bool operator==(const LintViolation&, const LintViolation&) = default;
};

std::string format_lint(const LintViolation& v);

std::vector<LintViolation> check_netlist(const Netlist& netlist);

// Checks one module in isolation; instances are checked against `context`
// when given.
std::vector<LintViolation> check_module(const RtlModule& module, const Netlist* context = nullptr);

// Netlist holding a single module as its top.
Netlist single_module_netlist(RtlModule module);

// Incremental construction with width checks; throws std::logic_error on a
// generator bug (duplicate names, width mismatches).
class ModuleBuilder {
 public:
  explicit ModuleBuilder(std::string name);

  Expr input(const std::string& name, unsigned width);
  Expr output(const std::string& name, unsigned width);  // returns a readable ref
  Expr net(const std::string& name, unsigned width);
  Expr reg(const std::string& name, unsigned width, std::uint64_t reset_value = 0);
  void memory(const std::string& name, unsigned depth, unsigned width);

  void assign(const std::string& target, Expr value);
  void set_next(const std::string& reg_name, Expr value);
  void write_memory(const std::string& memory, Expr enable, Expr addr, Expr data);
  Fsm& fsm(const std::string& name, std::vector<std::string> states);
  void instance(Instance inst);

  unsigned width_of(const std::string& signal) const;
  bool has(const std::string& signal) const;

  RtlModule build() &&;

 private:
  void claim(const std::string& name);
  RtlModule module_;
  std::deque<Fsm> fsms_;  // stable references while building
  std::map<std::string, unsigned> widths_;
};

}  // namespace patternforge::rtl

#endif  // PATTERNFORGE_RTLIR_HPP_
