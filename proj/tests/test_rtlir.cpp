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

#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>

#include "patternforge/rtlir.hpp"

namespace {

using namespace patternforge::rtl;

bool has_kind(const std::vector<LintViolation>& vs, LintKind k) {
  return std::any_of(vs.begin(), vs.end(), [&](const LintViolation& v) { return v.kind == k; });
}

TEST(Expr, WidthRules) {
  EXPECT_THROW(lit(0, 0), std::invalid_argument);
  EXPECT_THROW(lit(65, 0), std::invalid_argument);
  EXPECT_THROW(bit_and(ref("a", 4), ref("b", 5)), std::invalid_argument);
  EXPECT_THROW(mux(ref("s", 2), ref("a", 4), ref("b", 4)), std::invalid_argument);
  EXPECT_THROW(slice(ref("a", 4), 2, 3), std::invalid_argument);
  EXPECT_THROW(concat({ref("a", 40), ref("b", 40)}), std::invalid_argument);
  EXPECT_EQ(concat({ref("a", 3), ref("b", 5)}).width(), 8u);
  EXPECT_EQ(eq(ref("a", 7), ref("b", 7)).width(), 1u);
}

TEST(Expr, ConstantFolding) {
  EXPECT_TRUE(add(lit(8, 250), lit(8, 10)).is_const(4));  // modular
  EXPECT_TRUE(sub(lit(4, 1), lit(4, 2)).is_const(15));
  EXPECT_TRUE(bit_not(lit(3, 5)).is_const(2));
  EXPECT_TRUE(concat({lit(4, 0xA), lit(4, 0x5)}).is_const(0xA5));
  EXPECT_TRUE(slice(lit(8, 0xA5), 4, 4).is_const(0xA));
  Expr a = ref("a", 8);
  EXPECT_EQ(bit_and(a, lit(8, 0)), lit(8, 0));
  EXPECT_EQ(bit_and(a, lit(8, 0xFF)), a);
  EXPECT_EQ(bit_or(a, lit(8, 0)), a);
  EXPECT_EQ(mux(lit(1, 1), a, ref("b", 8)), a);
  EXPECT_EQ(mux(ref("s", 1), a, a), a);
  EXPECT_EQ(bit_not(bit_not(a)), a);
  EXPECT_EQ(slice(a, 0, 8), a);
  EXPECT_TRUE(eq(a, a).is_const(1));
}

TEST(Expr, StructuralEquality) {
  EXPECT_EQ(add(ref("a", 8), ref("b", 8)), add(ref("a", 8), ref("b", 8)));
  EXPECT_NE(add(ref("a", 8), ref("b", 8)), add(ref("b", 8), ref("a", 8)));
  EXPECT_NE(ref("a", 8), ref("a", 7));
}

TEST(Expr, OperatorCount) {
  Expr a = ref("a", 8);
  Expr b = ref("b", 8);
  EXPECT_EQ(operator_count(a), 0u);
  EXPECT_EQ(operator_count(concat({a, b})), 0u);
  EXPECT_EQ(operator_count(slice(a, 1, 3)), 0u);
  // mux(eq(a,b), add(a,b), not(a)) -> mux, eq, add, not.
  EXPECT_EQ(operator_count(mux(eq(a, b), add(a, b), bit_not(a))), 4u);
}

TEST(Expr, MulConst) {
  Expr e = mul_const(lit(4, 5), 6, 8);
  EXPECT_TRUE(e.is_const(30));
  EXPECT_TRUE(mul_const(lit(8, 200), 3, 8).is_const((200 * 3) & 0xFF));
}

TEST(Helpers, BitsFor) {
  EXPECT_EQ(bits_for(0), 1u);
  EXPECT_EQ(bits_for(1), 1u);
  EXPECT_EQ(bits_for(2), 2u);
  EXPECT_EQ(bits_for(255), 8u);
  EXPECT_EQ(bits_for(256), 9u);
  EXPECT_EQ(mask(64), ~std::uint64_t{0});
  EXPECT_EQ(mask(3), 7u);
}

TEST(Builder, RejectsDuplicatesAndWidthMismatch) {
  ModuleBuilder b("m");
  b.input("a", 4);
  EXPECT_THROW(b.net("a", 4), std::logic_error);
  b.output("y", 4);
  EXPECT_THROW(b.assign("y", lit(5, 0)), std::logic_error);
  EXPECT_THROW(b.assign("nope", lit(4, 0)), std::logic_error);
  b.reg("r", 4);
  EXPECT_THROW(b.set_next("r", lit(3, 0)), std::logic_error);
  EXPECT_THROW(b.set_next("y", lit(4, 0)), std::logic_error);
}

TEST(Builder, BuildsCleanModule) {
  ModuleBuilder b("counter");
  Expr en = b.input("en", 1);
  b.output("count", 4);
  Expr r = b.reg("r", 4, 3);
  b.assign("count", r);
  b.set_next("r", mux(en, add(r, lit(4, 1)), r));
  RtlModule m = std::move(b).build();
  EXPECT_TRUE(check_module(m).empty());
  ASSERT_NE(m.find_register("r"), nullptr);
  EXPECT_EQ(m.find_register("r")->reset_value, 3u);
  EXPECT_TRUE(m.has_state());
  EXPECT_TRUE(check_netlist(single_module_netlist(m)).empty());
}

TEST(Builder, FsmStateBits) {
  ModuleBuilder b("f");
  Expr go = b.input("go", 1);
  Fsm& f = b.fsm("ctl", {"a", "b", "c"});
  f.transitions.push_back({"a", go, {}, "b"});
  f.transitions.push_back({"b", lit(1, 1), {}, "c"});
  f.transitions.push_back({"c", lit(1, 1), {}, "a"});
  b.output("y", 1);
  b.assign("y", in_state("ctl", "c"));
  RtlModule m = std::move(b).build();
  ASSERT_NE(m.find_fsm("ctl"), nullptr);
  EXPECT_EQ(m.find_fsm("ctl")->state_bits(), 2u);
  EXPECT_EQ(m.find_fsm("ctl")->state_register(), "ctl_state");
  EXPECT_EQ(m.find_fsm("ctl")->state_index("c"), 2u);
  EXPECT_TRUE(check_module(m).empty());
}

TEST(Lint, MethodOps) {
  ModuleBuilder b("c");
  b.input("m_pop", 1);
  b.input("data_in", 8);
  b.input("m_push", 1);
  RtlModule m = std::move(b).build();
  EXPECT_EQ(m.method_ops(), (std::vector<std::string>{"pop", "push"}));
}

RtlModule bare(const char* name) {
  RtlModule m;
  m.name = name;
  m.ports = {{"a", PortDir::kIn, 4}, {"y", PortDir::kOut, 4}};
  return m;
}

TEST(Lint, Dangling) {
  RtlModule m = bare("m");
  m.comb = {{"y", ref("ghost", 4)}};
  EXPECT_TRUE(has_kind(check_module(m), LintKind::kDanglingReference));
}

TEST(Lint, Undriven) {
  RtlModule m = bare("m");
  EXPECT_TRUE(has_kind(check_module(m), LintKind::kUndriven));
}

TEST(Lint, MultipleDrivers) {
  RtlModule m = bare("m");
  m.comb = {{"y", ref("a", 4)}, {"y", bit_not(ref("a", 4))}};
  EXPECT_TRUE(has_kind(check_module(m), LintKind::kMultipleDrivers));
}

TEST(Lint, WidthMismatch) {
  RtlModule m = bare("m");
  m.comb = {{"y", ref("a", 3)}};
  auto vs = check_module(m);
  EXPECT_TRUE(has_kind(vs, LintKind::kWidthMismatch));
}

TEST(Lint, IllegalTarget) {
  RtlModule m = bare("m");
  m.comb = {{"y", ref("a", 4)}, {"a", lit(4, 0)}};
  EXPECT_TRUE(has_kind(check_module(m), LintKind::kIllegalTarget));
}

TEST(Lint, CombinationalCycle) {
  RtlModule m = bare("m");
  m.nets = {{"p", 4}, {"q", 4}};
  m.comb = {{"p", bit_xor(ref("q", 4), ref("a", 4))}, {"q", ref("p", 4)}, {"y", ref("q", 4)}};
  auto vs = check_module(m);
  ASSERT_TRUE(has_kind(vs, LintKind::kCombinationalCycle));
  // A register breaks the loop.
  RtlModule ok = bare("m");
  ok.nets = {{"p", 4}};
  ok.registers = {{"q", 4, 0, ref("p", 4)}};
  ok.comb = {{"p", bit_xor(ref("q", 4), ref("a", 4))}, {"y", ref("q", 4)}};
  EXPECT_TRUE(check_module(ok).empty());
}

TEST(Lint, BadFsm) {
  RtlModule m = bare("m");
  m.comb = {{"y", ref("a", 4)}};
  m.fsms = {{"f", {"s0", "s1"}, "s9", {}}};
  EXPECT_TRUE(has_kind(check_module(m), LintKind::kBadFsm));
}

TEST(Lint, HierarchyAndDuplicates) {
  RtlModule leaf = bare("leaf");
  leaf.comb = {{"y", ref("a", 4)}};
  RtlModule top = bare("top");
  top.nets = {{"w", 4}};
  top.comb = {{"y", ref("w", 4)}};
  top.instances = {{"u0", "leaf", {{"a", "a"}, {"y", "w"}}}};
  Netlist n{{leaf, top}, "top", {}};
  EXPECT_TRUE(check_netlist(n).empty());

  Netlist missing{{top}, "top", {}};
  EXPECT_TRUE(has_kind(check_netlist(missing), LintKind::kDanglingReference));

  RtlModule loop = bare("loop");
  loop.comb = {{"y", ref("a", 4)}};
  loop.instances = {{"self", "loop", {{"a", "a"}}}};
  Netlist rec{{loop}, "loop", {}};
  EXPECT_TRUE(has_kind(check_netlist(rec), LintKind::kHierarchy));

  Netlist dup{{leaf, leaf, top}, "top", {}};
  EXPECT_TRUE(has_kind(check_netlist(dup), LintKind::kDuplicateName));
}

TEST(Lint, FormatMentionsModule) {
  RtlModule m = bare("widget");
  auto vs = check_module(m);
  ASSERT_FALSE(vs.empty());
  EXPECT_NE(format_lint(vs.front()).find("widget"), std::string::npos);
}

}  // namespace
