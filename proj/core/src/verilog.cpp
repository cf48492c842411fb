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

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "patternforge/emit.hpp"

namespace patternforge::emit {

using namespace rtl;

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> words{
      "always", "and", "assign", "automatic", "begin", "buf", "bufif0", "bufif1", "case", "casex", "casez",
      "cell", "cmos", "config", "deassign", "default", "defparam", "design", "disable", "edge", "else", "end",
      "endcase", "endconfig", "endfunction", "endgenerate", "endmodule", "endprimitive", "endspecify",
      "endtable", "endtask", "event", "for", "force", "forever", "fork", "function", "generate", "genvar",
      "highz0", "highz1", "if", "ifnone", "incdir", "include", "initial", "inout", "input", "instance",
      "integer", "join", "large", "liblist", "library", "localparam", "macromodule", "medium", "module",
      "nand", "negedge", "nmos", "nor", "noshowcancelled", "not", "notif0", "notif1", "or", "output",
      "parameter", "pmos", "posedge", "primitive", "pull0", "pull1", "pulldown", "pullup",
      "pulsestyle_onevent", "pulsestyle_ondetect", "rcmos", "real", "realtime", "reg", "release", "repeat",
      "rnmos", "rpmos", "rtran", "rtranif0", "rtranif1", "scalared", "showcancelled", "signed", "small",
      "specify", "specparam", "strong0", "strong1", "supply0", "supply1", "table", "task", "time", "tran",
      "tranif0", "tranif1", "tri", "tri0", "tri1", "triand", "trior", "trireg", "unsigned", "use", "uwire",
      "vectored", "wait", "wand", "weak0", "weak1", "while", "wire", "wor", "xnor", "xor",
      // SystemVerilog words that strict tools also reserve
      "bit", "logic", "byte", "int", "shortint", "longint", "type", "final", "alias", "string", "const",
      "class", "interface", "package", "program", "property", "sequence", "assert", "assume", "cover",
      "unique", "priority", "return", "break", "continue", "do", "enum", "struct", "union", "typedef",
      "void", "import", "export", "extern", "static", "virtual", "local", "protected", "new", "null", "this",
      "super", "context", "clocking", "default_nettype"};
  return words;
}

std::string id(const std::string& name) {
  return keywords().contains(name) ? "\\" + name + " " : name;
}

std::string range(unsigned width) { return width == 1 ? "" : "[" + std::to_string(width - 1) + ":0] "; }

std::string literal(unsigned width, std::uint64_t value) {
  return std::to_string(width) + "'d" + std::to_string(value);
}

// Renders one module; expression temporaries become module-level wires.
class ModuleWriter {
 public:
  ModuleWriter(const RtlModule& m, bool clocked, const Netlist& n) : m_(m), clocked_(clocked), n_(n) {
    for (const Port& p : m.ports) taken_.insert(p.name);
    for (const Net& x : m.nets) taken_.insert(x.name);
    for (const Register& r : m.registers) taken_.insert(r.name);
    for (const MemoryPrim& mem : m.memories) taken_.insert(mem.name);
    for (const Fsm& f : m.fsms) {
      taken_.insert(f.name);
      taken_.insert(f.state_register());
      for (const std::string& s : f.states) taken_.insert(state_param(f, s));
    }
    for (const Instance& i : m.instances) taken_.insert(i.name);
  }

  std::string render(const std::string& module_name) {
    // Logic first so hoisted temporaries are known before declarations.
    std::ostringstream logic;
    for (const Assignment& a : m_.comb) logic << "  assign " << id(a.target) << " = " << expr(a.value) << ";\n";
    render_registers(logic);
    render_fsms(logic);
    render_memories(logic);
    render_instances(logic);

    std::ostringstream out;
    out << "module " << id(module_name) << " (";
    std::vector<std::string> ports;
    if (clocked_) {
      ports.push_back("  input wire clk");
      ports.push_back("  input wire rst");
    }
    for (const Port& p : m_.ports) {
      ports.push_back(std::string("  ") + (p.dir == PortDir::kIn ? "input" : "output") + " wire " + range(p.width) +
                      id(p.name));
    }
    for (std::size_t i = 0; i < ports.size(); ++i) out << "\n" << ports[i] << (i + 1 < ports.size() ? "," : "");
    out << (ports.empty() ? ");\n" : "\n);\n");
    for (const Fsm& f : m_.fsms) {
      for (std::size_t i = 0; i < f.states.size(); ++i) {
        out << "  localparam " << range(f.state_bits()) << id(state_param(f, f.states[i])) << " = "
            << literal(f.state_bits(), i) << ";\n";
      }
    }
    for (const Net& x : m_.nets) out << "  wire " << range(x.width) << id(x.name) << ";\n";
    for (const auto& [name, width] : temps_) out << "  wire " << range(width) << name << ";\n";
    for (const Register& r : m_.registers) out << "  reg " << range(r.width) << id(r.name) << ";\n";
    for (const Fsm& f : m_.fsms) out << "  reg " << range(f.state_bits()) << id(f.state_register()) << ";\n";
    for (const MemoryPrim& mem : m_.memories) {
      out << "  reg " << range(mem.width) << id(mem.name) << " [0:" << mem.depth - 1 << "];\n";
    }
    out << temp_assigns_.str() << logic.str() << "endmodule\n";
    return out.str();
  }

 private:
  static std::string state_param(const Fsm& f, const std::string& state) { return f.name + "_S_" + state; }

  std::string fresh() {
    for (;;) {
      std::string name = "pf_t" + std::to_string(next_temp_++);
      if (!taken_.contains(name)) return name;
    }
  }

  // Part selects apply to identifiers only, so other operands are hoisted.
  std::string hoist(const Expr& e) {
    if (e.kind() == ExprKind::kRef) return id(e.name());
    auto it = hoisted_.find(e);
    if (it != hoisted_.end()) return it->second;
    std::string name = fresh();
    std::string text = expr(e);
    temps_.emplace_back(name, e.width());
    temp_assigns_ << "  assign " << name << " = " << text << ";\n";
    hoisted_.emplace(e, name);
    return name;
  }

  std::string expr(const Expr& e) {
    const auto& ops = e.operands();
    switch (e.kind()) {
      case ExprKind::kConst: return literal(e.width(), e.value());
      case ExprKind::kRef: return id(e.name());
      case ExprKind::kInState: {
        const Fsm* f = m_.find_fsm(e.name());
        return "(" + id(f->state_register()) + " == " + id(state_param(*f, e.state())) + ")";
      }
      case ExprKind::kMemRead: return id(e.name()) + "[" + expr(ops[0]) + "]";
      case ExprKind::kSlice: {
        std::string base = hoist(ops[0]);
        if (e.width() == 1) return base + "[" + std::to_string(e.lo()) + "]";
        return base + "[" + std::to_string(e.lo() + e.width() - 1) + ":" + std::to_string(e.lo()) + "]";
      }
      case ExprKind::kConcat: {
        std::string s = "{";
        for (std::size_t i = 0; i < ops.size(); ++i) s += (i ? ", " : "") + expr(ops[i]);
        return s + "}";
      }
      case ExprKind::kNot: return "(~" + expr(ops[0]) + ")";
      case ExprKind::kAnd: return "(" + expr(ops[0]) + " & " + expr(ops[1]) + ")";
      case ExprKind::kOr: return "(" + expr(ops[0]) + " | " + expr(ops[1]) + ")";
      case ExprKind::kXor: return "(" + expr(ops[0]) + " ^ " + expr(ops[1]) + ")";
      case ExprKind::kEq: return "(" + expr(ops[0]) + " == " + expr(ops[1]) + ")";
      case ExprKind::kAdd: return "(" + expr(ops[0]) + " + " + expr(ops[1]) + ")";
      case ExprKind::kSub: return "(" + expr(ops[0]) + " - " + expr(ops[1]) + ")";
      case ExprKind::kMux: return "(" + expr(ops[0]) + " ? " + expr(ops[1]) + " : " + expr(ops[2]) + ")";
    }
    throw EmitError("unknown expression kind");
  }

  // Registers loaded only by FSM actions are reset inside that FSM's block.
  std::set<std::string> fsm_loaded() const {
    std::set<std::string> loaded;
    for (const Fsm& f : m_.fsms) {
      for (const Transition& t : f.transitions) {
        for (const Assignment& a : t.actions) loaded.insert(a.target);
      }
    }
    return loaded;
  }

  void render_registers(std::ostream& os) {
    auto loaded = fsm_loaded();
    for (const Register& r : m_.registers) {
      if (loaded.contains(r.name) && !r.next) continue;
      os << "  always @(posedge clk) begin\n"
         << "    if (rst) " << id(r.name) << " <= " << literal(r.width, r.reset_value) << ";\n";
      if (r.next) os << "    else " << id(r.name) << " <= " << expr(*r.next) << ";\n";
      os << "  end\n";
    }
  }

  void render_fsms(std::ostream& os) {
    std::set<std::string> reset_done;
    for (const Fsm& f : m_.fsms) {
      std::vector<const Register*> owned;
      for (const Transition& t : f.transitions) {
        for (const Assignment& a : t.actions) {
          const Register* r = m_.find_register(a.target);
          if (r != nullptr && !r->next && reset_done.insert(r->name).second) owned.push_back(r);
        }
      }
      os << "  always @(posedge clk) begin\n"
         << "    if (rst) begin\n"
         << "      " << id(f.state_register()) << " <= " << id(state_param(f, f.reset_state)) << ";\n";
      for (const Register* r : owned) os << "      " << id(r->name) << " <= " << literal(r->width, r->reset_value) << ";\n";
      os << "    end else begin\n"
         << "      case (" << id(f.state_register()) << ")\n";
      for (const std::string& s : f.states) {
        std::vector<const Transition*> out;
        for (const Transition& t : f.transitions) {
          if (t.from == s) out.push_back(&t);
        }
        if (out.empty()) continue;
        os << "        " << id(state_param(f, s)) << ": begin\n";
        for (std::size_t i = 0; i < out.size(); ++i) {
          os << "          " << (i ? "else if (" : "if (") << expr(out[i]->guard) << ") begin\n";
          for (const Assignment& a : out[i]->actions) {
            os << "            " << id(a.target) << " <= " << expr(a.value) << ";\n";
          }
          os << "            " << id(f.state_register()) << " <= " << id(state_param(f, out[i]->to)) << ";\n"
             << "          end\n";
        }
        os << "        end\n";
      }
      os << "        default: ;\n"
         << "      endcase\n"
         << "    end\n"
         << "  end\n";
    }
  }

  void render_memories(std::ostream& os) {
    for (const MemWritePort& w : m_.mem_writes) {
      os << "  always @(posedge clk) begin\n"
         << "    if (" << expr(w.enable) << ") " << id(w.memory) << "[" << expr(w.addr) << "] <= " << expr(w.data)
         << ";\n"
         << "  end\n";
    }
  }

  void render_instances(std::ostream& os) {
    for (const Instance& inst : m_.instances) {
      const RtlModule* child = n_.find(inst.module);
      std::vector<std::string> conns;
      if (child != nullptr && needs_clock(n_, *child)) {
        conns.push_back(".clk(clk)");
        conns.push_back(".rst(rst)");
      }
      for (const Connection& c : inst.connections) conns.push_back("." + id(c.port) + "(" + id(c.signal) + ")");
      os << "  " << id(inst.module) << " " << id(inst.name) << " (";
      for (std::size_t i = 0; i < conns.size(); ++i) {
        os << "\n    " << conns[i] << (i + 1 < conns.size() ? "," : "");
      }
      os << "\n  );\n";
    }
  }

  struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return to_string(a) < to_string(b); }
  };

  const RtlModule& m_;
  bool clocked_;
  const Netlist& n_;
  std::set<std::string> taken_;
  unsigned next_temp_ = 0;
  std::map<Expr, std::string, ExprLess> hoisted_;
  std::vector<std::pair<std::string, unsigned>> temps_;
  std::ostringstream temp_assigns_;
};

}  // namespace

bool needs_clock(const Netlist& netlist, const RtlModule& module) {
  if (module.has_state()) return true;
  for (const Instance& inst : module.instances) {
    const RtlModule* child = netlist.find(inst.module);
    if (child != nullptr && child != &module && needs_clock(netlist, *child)) return true;
  }
  return false;
}

std::string emit_verilog(const Netlist& netlist, const EmitOptions& opts) {
  auto lint = check_netlist(netlist);
  if (!lint.empty()) throw EmitError("netlist fails lint: " + format_lint(lint.front()));
  if (!opts.top_name.empty() && !model::is_identifier(opts.top_name)) throw EmitError("bad top module name");

  std::ostringstream out;
  out << "// Generated by patternforge " << kToolVersion << "\n";
  if (!opts.spec_digest.empty()) out << "// system description sha256: " << opts.spec_digest << "\n";
  std::istringstream extra(opts.header_comment);
  for (std::string line; std::getline(extra, line);) out << "// " << line << "\n";
  out << "`default_nettype none\n";
  for (const RtlModule& m : netlist.modules) {
    std::string name = m.name == netlist.top && !opts.top_name.empty() ? opts.top_name : m.name;
    out << "\n" << ModuleWriter(m, needs_clock(netlist, m), netlist).render(name);
  }
  out << "\n`default_nettype wire\n";
  return out.str();
}

std::string spec_digest(const model::SystemSpec& spec) {
  std::string text = model::serialize_system_spec(spec);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw EmitError("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < length; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 15];
  }
  return s;
}

}  // namespace patternforge::emit
