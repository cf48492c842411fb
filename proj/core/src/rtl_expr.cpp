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
#include <bit>
#include <sstream>
#include <stdexcept>

#include "patternforge/rtlir.hpp"

namespace patternforge::rtl {
namespace {

void require_width(unsigned width) {
  if (width == 0 || width > kMaxWidth) {
    throw std::invalid_argument("expression width " + std::to_string(width) + " outside 1..64");
  }
}

void require_same(const Expr& a, const Expr& b, const char* op) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument(std::string(op) + ": null operand");
  if (a.width() != b.width()) {
    throw std::invalid_argument(std::string(op) + ": operand widths " + std::to_string(a.width()) +
                                " and " + std::to_string(b.width()) + " differ");
  }
}

Expr node(ExprKind kind, unsigned width, std::vector<Expr> operands) {
  ExprNode n;
  n.kind = kind;
  n.width = width;
  n.operands = std::move(operands);
  return Expr::make(std::move(n));
}

}  // namespace

unsigned bits_for(std::uint64_t max_value) {
  return max_value == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_value));
}

Expr Expr::make(ExprNode n) {
  Expr e;
  e.node_ = std::make_shared<const ExprNode>(std::move(n));
  return e;
}

ExprKind Expr::kind() const { return node_->kind; }
unsigned Expr::width() const { return node_->width; }
std::uint64_t Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::string& Expr::state() const { return node_->state; }
unsigned Expr::lo() const { return node_->lo; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  return x.kind == y.kind && x.width == y.width && x.value == y.value && x.lo == y.lo &&
         x.name == y.name && x.state == y.state && x.operands == y.operands;
}

Expr lit(unsigned width, std::uint64_t value) {
  require_width(width);
  ExprNode n;
  n.kind = ExprKind::kConst;
  n.width = width;
  n.value = value & mask(width);
  return Expr::make(std::move(n));
}

Expr ref(std::string name, unsigned width) {
  require_width(width);
  ExprNode n;
  n.kind = ExprKind::kRef;
  n.width = width;
  n.name = std::move(name);
  return Expr::make(std::move(n));
}

Expr in_state(std::string fsm, std::string state) {
  ExprNode n;
  n.kind = ExprKind::kInState;
  n.width = 1;
  n.name = std::move(fsm);
  n.state = std::move(state);
  return Expr::make(std::move(n));
}

Expr mem_read(std::string memory, unsigned width, Expr addr) {
  require_width(width);
  if (!addr.valid()) throw std::invalid_argument("mem_read: null address");
  ExprNode n;
  n.kind = ExprKind::kMemRead;
  n.width = width;
  n.name = std::move(memory);
  n.operands = {std::move(addr)};
  return Expr::make(std::move(n));
}

Expr slice(Expr e, unsigned lo, unsigned width) {
  require_width(width);
  if (!e.valid() || lo + width > e.width()) {
    throw std::invalid_argument("slice [" + std::to_string(lo + width - 1) + ":" + std::to_string(lo) +
                                "] out of range");
  }
  if (lo == 0 && width == e.width()) return e;
  if (e.is_const()) return lit(width, e.value() >> lo);
  ExprNode n;
  n.kind = ExprKind::kSlice;
  n.width = width;
  n.lo = lo;
  n.operands = {std::move(e)};
  return Expr::make(std::move(n));
}

Expr concat(std::vector<Expr> parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no operands");
  if (parts.size() == 1) return parts.front();
  unsigned width = 0;
  bool all_const = true;
  for (const Expr& p : parts) {
    if (!p.valid()) throw std::invalid_argument("concat: null operand");
    width += p.width();
    all_const = all_const && p.is_const();
  }
  require_width(width);
  if (all_const) {
    std::uint64_t v = 0;
    for (const Expr& p : parts) v = (p.width() >= 64 ? 0 : v << p.width()) | p.value();
    return lit(width, v);
  }
  return node(ExprKind::kConcat, width, std::move(parts));
}

Expr bit_not(Expr e) {
  if (!e.valid()) throw std::invalid_argument("not: null operand");
  if (e.is_const()) return lit(e.width(), ~e.value());
  if (e.kind() == ExprKind::kNot) return e.operands()[0];
  unsigned w = e.width();
  return node(ExprKind::kNot, w, {std::move(e)});
}

Expr bit_and(Expr a, Expr b) {
  require_same(a, b, "and");
  if (a.is_const() && b.is_const()) return lit(a.width(), a.value() & b.value());
  if (a.is_const(0) || b.is_ones()) return a;
  if (b.is_const(0) || a.is_ones()) return b;
  if (a == b) return a;
  unsigned w = a.width();
  return node(ExprKind::kAnd, w, {std::move(a), std::move(b)});
}

Expr bit_or(Expr a, Expr b) {
  require_same(a, b, "or");
  if (a.is_const() && b.is_const()) return lit(a.width(), a.value() | b.value());
  if (a.is_const(0) || b.is_ones()) return b;
  if (b.is_const(0) || a.is_ones()) return a;
  if (a == b) return a;
  unsigned w = a.width();
  return node(ExprKind::kOr, w, {std::move(a), std::move(b)});
}

Expr bit_xor(Expr a, Expr b) {
  require_same(a, b, "xor");
  if (a.is_const() && b.is_const()) return lit(a.width(), a.value() ^ b.value());
  if (a.is_const(0)) return b;
  if (b.is_const(0)) return a;
  unsigned w = a.width();
  return node(ExprKind::kXor, w, {std::move(a), std::move(b)});
}

Expr eq(Expr a, Expr b) {
  require_same(a, b, "eq");
  if (a.is_const() && b.is_const()) return lit(1, a.value() == b.value() ? 1 : 0);
  if (a == b) return lit(1, 1);
  if (a.width() == 1 && b.is_const()) return b.value() ? a : bit_not(a);
  if (a.width() == 1 && a.is_const()) return a.value() ? b : bit_not(b);
  return node(ExprKind::kEq, 1, {std::move(a), std::move(b)});
}

Expr add(Expr a, Expr b) {
  require_same(a, b, "add");
  if (a.is_const() && b.is_const()) return lit(a.width(), a.value() + b.value());
  if (b.is_const(0)) return a;
  if (a.is_const(0)) return b;
  unsigned w = a.width();
  return node(ExprKind::kAdd, w, {std::move(a), std::move(b)});
}

Expr sub(Expr a, Expr b) {
  require_same(a, b, "sub");
  if (a.is_const() && b.is_const()) return lit(a.width(), a.value() - b.value());
  if (b.is_const(0)) return a;
  unsigned w = a.width();
  return node(ExprKind::kSub, w, {std::move(a), std::move(b)});
}

Expr mux(Expr select, Expr when_true, Expr when_false) {
  if (!select.valid() || select.width() != 1) throw std::invalid_argument("mux: select must be 1 bit");
  require_same(when_true, when_false, "mux");
  if (select.is_const()) return select.value() ? when_true : when_false;
  if (when_true == when_false) return when_true;
  if (when_true.width() == 1 && when_true.is_const(1) && when_false.is_const(0)) return select;
  if (when_true.width() == 1 && when_true.is_const(0) && when_false.is_const(1)) return bit_not(select);
  unsigned w = when_true.width();
  return node(ExprKind::kMux, w, {std::move(select), std::move(when_true), std::move(when_false)});
}

Expr bit(Expr e, unsigned index) { return slice(std::move(e), index, 1); }

Expr zext(Expr e, unsigned width) {
  if (e.width() == width) return e;
  if (e.width() > width) return slice(std::move(e), 0, width);
  return concat({lit(width - e.width(), 0), std::move(e)});
}

Expr ne(Expr a, Expr b) { return bit_not(eq(std::move(a), std::move(b))); }

Expr eq_const(Expr e, std::uint64_t v) {
  unsigned w = e.width();
  return eq(std::move(e), lit(w, v));
}

Expr any_of(const std::vector<Expr>& bits) {
  Expr acc = lit(1, 0);
  for (const Expr& b : bits) acc = bit_or(acc, b);
  return acc;
}

Expr all_of(const std::vector<Expr>& bits) {
  Expr acc = lit(1, 1);
  for (const Expr& b : bits) acc = bit_and(acc, b);
  return acc;
}

Expr mul_const(Expr e, std::uint64_t factor, unsigned width) {
  Expr wide = zext(e, width);
  Expr acc = lit(width, 0);
  for (unsigned shift = 0; shift < width; ++shift) {
    if (((factor >> shift) & 1) == 0) continue;
    Expr term = shift == 0 ? wide : concat({slice(wide, 0, width - shift), lit(shift, 0)});
    acc = add(acc, term);
  }
  return acc;
}

void visit(const Expr& e, const std::function<void(const Expr&)>& fn) {
  if (!e.valid()) return;
  fn(e);
  for (const Expr& op : e.operands()) visit(op, fn);
}

std::size_t operator_count(const Expr& e) {
  std::size_t n = 0;
  visit(e, [&](const Expr& x) {
    switch (x.kind()) {
      case ExprKind::kConst:
      case ExprKind::kRef:
      case ExprKind::kSlice:
      case ExprKind::kConcat:
        break;
      default:
        ++n;
    }
  });
  return n;
}

std::string to_string(const Expr& e) {
  if (!e.valid()) return "<null>";
  std::ostringstream os;
  auto join = [&](const char* op) {
    os << "(";
    for (std::size_t i = 0; i < e.operands().size(); ++i) {
      if (i) os << " " << op << " ";
      os << to_string(e.operands()[i]);
    }
    os << ")";
  };
  switch (e.kind()) {
    case ExprKind::kConst: os << e.width() << "'d" << e.value(); break;
    case ExprKind::kRef: os << e.name(); break;
    case ExprKind::kInState: os << e.name() << "@" << e.state(); break;
    case ExprKind::kMemRead: os << e.name() << "[" << to_string(e.operands()[0]) << "]"; break;
    case ExprKind::kSlice:
      os << to_string(e.operands()[0]) << "[" << e.lo() + e.width() - 1 << ":" << e.lo() << "]";
      break;
    case ExprKind::kConcat: os << "{"; join(","); os << "}"; break;
    case ExprKind::kNot: os << "~" << to_string(e.operands()[0]); break;
    case ExprKind::kAnd: join("&"); break;
    case ExprKind::kOr: join("|"); break;
    case ExprKind::kXor: join("^"); break;
    case ExprKind::kEq: join("=="); break;
    case ExprKind::kAdd: join("+"); break;
    case ExprKind::kSub: join("-"); break;
    case ExprKind::kMux:
      os << "(" << to_string(e.operands()[0]) << " ? " << to_string(e.operands()[1]) << " : "
         << to_string(e.operands()[2]) << ")";
      break;
  }
  return os.str();
}

}  // namespace patternforge::rtl
