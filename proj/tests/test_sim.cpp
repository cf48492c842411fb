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

#include <functional>
#include <map>
#include <random>

#include "fixtures/reference_copy.hpp"
#include "patternforge/algos.hpp"
#include "patternforge/emit.hpp"
#include "patternforge/sim.hpp"
#include "prune_matrix.hpp"
#include "support.hpp"

namespace {

using namespace patternforge;
using rtl::Expr;
using testkit::load_fixture;
using testkit::random_elements;

// Plain recursive evaluator used as the oracle for compiled evaluation.
std::uint64_t eval(const Expr& e, const std::map<std::string, std::uint64_t>& env) {
  const auto& o = e.operands();
  const std::uint64_t m = rtl::mask(e.width());
  switch (e.kind()) {
    case rtl::ExprKind::kConst: return e.value();
    case rtl::ExprKind::kRef: return env.at(e.name());
    case rtl::ExprKind::kSlice: return (eval(o[0], env) >> e.lo()) & m;
    case rtl::ExprKind::kConcat: {
      std::uint64_t v = 0;
      for (const Expr& p : o) v = (v << p.width()) | eval(p, env);
      return v & m;
    }
    case rtl::ExprKind::kNot: return ~eval(o[0], env) & m;
    case rtl::ExprKind::kAnd: return eval(o[0], env) & eval(o[1], env);
    case rtl::ExprKind::kOr: return eval(o[0], env) | eval(o[1], env);
    case rtl::ExprKind::kXor: return eval(o[0], env) ^ eval(o[1], env);
    case rtl::ExprKind::kEq: return eval(o[0], env) == eval(o[1], env);
    case rtl::ExprKind::kAdd: return (eval(o[0], env) + eval(o[1], env)) & m;
    case rtl::ExprKind::kSub: return (eval(o[0], env) - eval(o[1], env)) & m;
    case rtl::ExprKind::kMux: return eval(o[0], env) ? eval(o[1], env) : eval(o[2], env);
    default: ADD_FAILURE() << "unexpected kind"; return 0;
  }
}

Expr random_expr(std::mt19937_64& rng, unsigned width, int depth) {
  auto leaf = [&](unsigned w) -> Expr {
    if (rng() % 4 == 0) return rtl::lit(w, rng() & rtl::mask(w));
    // Inputs are a..d, 16 bits each; slice to the wanted width.
    Expr in = rtl::ref(std::string(1, static_cast<char>('a' + rng() % 4)), 16);
    return w == 16 ? in : w < 16 ? rtl::slice(in, rng() % (17 - w), w) : rtl::zext(in, w);
  };
  if (depth == 0) return leaf(width);
  switch (rng() % 9) {
    case 0: return rtl::bit_not(random_expr(rng, width, depth - 1));
    case 1: return rtl::bit_and(random_expr(rng, width, depth - 1), random_expr(rng, width, depth - 1));
    case 2: return rtl::bit_or(random_expr(rng, width, depth - 1), random_expr(rng, width, depth - 1));
    case 3: return rtl::bit_xor(random_expr(rng, width, depth - 1), random_expr(rng, width, depth - 1));
    case 4: return rtl::add(random_expr(rng, width, depth - 1), random_expr(rng, width, depth - 1));
    case 5: return rtl::sub(random_expr(rng, width, depth - 1), random_expr(rng, width, depth - 1));
    case 6:
      return rtl::mux(random_expr(rng, 1, depth - 1), random_expr(rng, width, depth - 1),
                      random_expr(rng, width, depth - 1));
    case 7: {
      if (width == 1) return rtl::eq(random_expr(rng, 5, depth - 1), random_expr(rng, 5, depth - 1));
      unsigned hi = 1 + rng() % (width - 1);
      return rtl::concat({random_expr(rng, hi, depth - 1), random_expr(rng, width - hi, depth - 1)});
    }
    default: return leaf(width);
  }
}

TEST(Evaluate, RandomExpressionsMatchInterpreter) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    unsigned width = 1 + rng() % 40;
    Expr e = random_expr(rng, width, 4);
    rtl::ModuleBuilder b("expr");
    for (char c = 'a'; c <= 'd'; ++c) b.input(std::string(1, c), 16);
    b.output("y", width);
    b.assign("y", e);
    sim::Simulator s(rtl::single_module_netlist(std::move(b).build()));
    for (int v = 0; v < 10; ++v) {
      std::map<std::string, std::uint64_t> env;
      for (char c = 'a'; c <= 'd'; ++c) {
        env[std::string(1, c)] = rng() & 0xFFFF;
        s.poke(std::string(1, c), env[std::string(1, c)]);
      }
      s.settle();
      ASSERT_EQ(s.peek("y"), eval(e, env)) << rtl::to_string(e);
    }
  }
}

TEST(Evaluate, RegistersUpdateOnCommitOnly) {
  rtl::ModuleBuilder b("acc");
  Expr in = b.input("in", 8);
  b.output("sum", 8);
  Expr r = b.reg("r", 8, 5);
  b.assign("sum", r);
  b.set_next("r", rtl::add(r, in));
  sim::Simulator s(rtl::single_module_netlist(std::move(b).build()));
  s.reset();
  s.poke("in", 3);
  s.settle();
  EXPECT_EQ(s.peek("sum"), 5u);
  EXPECT_TRUE(s.step());
  EXPECT_EQ(s.peek("r"), 8u);
  EXPECT_EQ(s.peek("sum"), 5u);  // combinational outputs wait for the next settle
  s.settle();
  EXPECT_EQ(s.peek("sum"), 8u);
  s.poke("in", 0);
  EXPECT_FALSE(s.step());
  EXPECT_EQ(s.cycle(), 2u);
  s.reset();
  s.settle();
  EXPECT_EQ(s.peek("sum"), 5u);
}

TEST(Evaluate, FsmActionsAndMemory) {
  rtl::ModuleBuilder b("m");
  Expr we = b.input("we", 1);
  Expr addr = b.input("addr", 2);
  Expr data = b.input("data", 8);
  b.output("q", 8);
  b.output("busy", 1);
  b.memory("ram", 4, 8);
  b.write_memory("ram", we, addr, data);
  b.assign("q", rtl::mem_read("ram", 8, addr));
  Expr hits = b.reg("hits", 4);
  auto& f = b.fsm("ctl", {"idle", "run"});
  f.transitions.push_back({"idle", we, {{"hits", rtl::add(hits, rtl::lit(4, 1))}}, "run"});
  f.transitions.push_back({"run", rtl::lit(1, 1), {}, "idle"});
  b.assign("busy", rtl::in_state("ctl", "run"));
  sim::Simulator s(rtl::single_module_netlist(std::move(b).build()));
  s.reset();
  s.poke("we", 1);
  s.poke("addr", 2);
  s.poke("data", 77);
  s.step();
  s.settle();
  EXPECT_EQ(s.memory_word("ram", 2), 77u);
  EXPECT_EQ(s.peek("busy"), 1u);
  EXPECT_EQ(s.peek("hits"), 1u);
  s.poke("we", 0);
  s.settle();
  EXPECT_EQ(s.peek("q"), 77u);
  s.step();
  s.settle();
  EXPECT_EQ(s.peek("busy"), 0u);
  EXPECT_EQ(s.peek("hits"), 1u);  // held between FSM actions
}

TEST(Evaluate, Errors) {
  sim::Simulator s(emit::elaborate(load_fixture("copy_fifo.json")));
  EXPECT_THROW(s.poke("nope", 1), sim::SimulationError);
  EXPECT_THROW(s.peek("nope"), sim::SimulationError);
  EXPECT_TRUE(s.has_signal("rbuffer_p_empty"));
  EXPECT_TRUE(s.has_signal("u_copy.element"));
}

struct SystemCase {
  const char* fixture;
  unsigned width;
  unsigned permille;
};

class Systems : public ::testing::TestWithParam<SystemCase> {};

TEST_P(Systems, CopyMatchesGolden) {
  const auto& c = GetParam();
  rtl::Netlist n = emit::elaborate(load_fixture(c.fixture));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    sim::Stimulus st;
    st.sources["rbuffer"] = random_elements(300, c.width, seed);
    st.seed = seed;
    if (c.permille) {
      for (const auto& itf : n.interfaces) {
        if (itf.kind != rtl::DeviceKind::kSram) st.stall_permille[itf.name] = c.permille;
      }
    }
    sim::Trace t = sim::run_simulation(n, st);
    EXPECT_TRUE(t.quiesced);
    EXPECT_EQ(t.captured.at("wbuffer"), st.sources["rbuffer"]) << c.fixture << " seed " << seed;
    EXPECT_EQ(t.counters.at("wbuffer").elements, 300u);
  }
}

INSTANTIATE_TEST_SUITE_P(All, Systems,
                         ::testing::Values(SystemCase{"copy_fifo.json", 8, 0}, SystemCase{"copy_fifo.json", 8, 400},
                                           SystemCase{"copy_sram.json", 8, 0}, SystemCase{"copy_sram.json", 8, 300},
                                           SystemCase{"copy_sram_rgb.json", 24, 0},
                                           SystemCase{"copy_sram_rgb.json", 24, 300},
                                           SystemCase{"copy_shared_sram.json", 8, 0},
                                           SystemCase{"copy_shared_sram.json", 8, 500}));

TEST(Systems, BlurMatchesGoldenUnderStalls) {
  model::SystemSpec s = load_fixture("blur.json");
  s.containers[0].capacity = 16;
  s.algorithms[0].image_width = 16;
  s.algorithms[0].image_height = 9;
  rtl::Netlist n = emit::elaborate(s);
  sim::Stimulus st;
  st.sources["rows"] = random_elements(16 * 9, 8, 5);
  st.stall_permille = {{"rows", 300}, {"pixels", 300}};
  st.seed = 9;
  sim::Trace t = sim::run_simulation(n, st);
  algo::GoldenParams p;
  p.image_width = 16;
  p.image_height = 9;
  EXPECT_EQ(t.captured.at("pixels"), algo::golden_reference(model::AlgorithmKind::kBlur3x3, st.sources["rows"], p));
}

// The copy FSM forwards one element per clock when nothing stalls.
TEST(Throughput, FifoCopyIsOneElementPerCycle) {
  sim::Stimulus st;
  st.sources["rbuffer"] = random_elements(500, 8, 4);
  sim::Trace t = sim::run_simulation(emit::elaborate(load_fixture("copy_fifo.json")), st);
  EXPECT_EQ(sim::measure_throughput(t, "wbuffer"), (sim::Rational{1, 1}));
  EXPECT_EQ(sim::measure_throughput(t, "rbuffer"), (sim::Rational{1, 1}));
}

TEST(Throughput, RationalArithmetic) {
  sim::Trace t;
  t.counters["x"] = {4, 10, 28};
  EXPECT_EQ(sim::measure_throughput(t, "x"), (sim::Rational{6, 1}));
  t.counters["y"] = {3, 0, 3};
  EXPECT_EQ(sim::measure_throughput(t, "y"), (sim::Rational{3, 2}));
  EXPECT_EQ(sim::to_string(sim::Rational{3, 2}), "3/2");
  t.counters["z"] = {1, 0, 0};
  EXPECT_THROW(sim::measure_throughput(t, "z"), sim::SimulationError);
  EXPECT_THROW(sim::measure_throughput(t, "w"), sim::SimulationError);
}

TEST(Run, StimulusValidation) {
  rtl::Netlist n = emit::elaborate(load_fixture("copy_fifo.json"));
  sim::Stimulus none;
  EXPECT_THROW(sim::run_simulation(n, none), sim::SimulationError);
  sim::Stimulus bad_name;
  bad_name.sources["rbuffer"] = {1};
  bad_name.sources["ghost"] = {1};
  EXPECT_THROW(sim::run_simulation(n, bad_name), sim::SimulationError);
  sim::Stimulus too_wide;
  too_wide.sources["rbuffer"] = {256};
  EXPECT_THROW(sim::run_simulation(n, too_wide), sim::SimulationError);
  sim::Stimulus stall;
  stall.sources["rbuffer"] = {1};
  stall.stall_permille["wbuffer"] = 1000;
  EXPECT_THROW(sim::run_simulation(n, stall), sim::SimulationError);
}

TEST(Run, MaxCyclesAndQuiescence) {
  rtl::Netlist n = emit::elaborate(load_fixture("copy_fifo.json"));
  sim::Stimulus st;
  st.sources["rbuffer"] = random_elements(100, 8, 1);
  st.max_cycles = 20;
  sim::Trace cut = sim::run_simulation(n, st);
  EXPECT_EQ(cut.cycles, 20u);
  EXPECT_FALSE(cut.quiesced);
  EXPECT_LT(cut.captured["wbuffer"].size(), 100u);

  st.max_cycles = 1000;
  st.stop_when_quiescent = false;
  EXPECT_EQ(sim::run_simulation(n, st).cycles, 1000u);

  st.stop_when_quiescent = true;
  sim::Trace done = sim::run_simulation(n, st);
  EXPECT_TRUE(done.quiesced);
  // Last element leaves, then the quiet window elapses.
  EXPECT_LE(done.cycles, done.counters["wbuffer"].last_cycle + 1 + sim::kQuiescentCycles + 1);
}

TEST(Run, Deterministic) {
  rtl::Netlist n = emit::elaborate(load_fixture("copy_shared_sram.json"));
  sim::Stimulus st;
  st.sources["rbuffer"] = random_elements(200, 8, 6);
  st.stall_permille = {{"rbuffer", 200}, {"wbuffer", 200}};
  st.seed = 42;
  EXPECT_EQ(sim::run_simulation(n, st), sim::run_simulation(n, st));
  sim::Stimulus other = st;
  other.seed = 43;
  EXPECT_NE(sim::run_simulation(n, st).cycles, sim::run_simulation(n, other).cycles);
}

TEST(Run, WavesAndMemories) {
  rtl::Netlist n = emit::elaborate(load_fixture("copy_sram.json"));
  sim::Stimulus st;
  st.sources["rbuffer"] = {9, 8, 7};
  st.wave_signals = {"rmem_req", "u_copy.element"};
  sim::Trace t = sim::run_simulation(n, st);
  ASSERT_EQ(t.waves.size(), t.cycles);
  std::string csv = sim::waves_csv(t);
  EXPECT_EQ(csv.rfind("rmem_req,u_copy.element\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.cycles + 1);
  // Element words land at the start of each buffer's region.
  ASSERT_GE(t.memories.at("rmem").size(), 3u);
  EXPECT_EQ(std::vector<std::uint64_t>(t.memories["rmem"].begin(), t.memories["rmem"].begin() + 3),
            (std::vector<std::uint64_t>{9, 8, 7}));
  st.wave_signals = {"nothing_here"};
  EXPECT_THROW(sim::run_simulation(n, st), sim::SimulationError);
}

rtl::Netlist reference_netlist() {
  rtl::Netlist n = rtl::single_module_netlist(testkit::reference_copy(8));
  rtl::ExternalInterface src{"rbuffer", rtl::DeviceKind::kStreamSource, 8, 8, 1, 0, 0,
                             {{"p_empty", "p_empty"}, {"p_read", "p_read"}, {"p_data", "p_data"}}};
  rtl::ExternalInterface dst{"wbuffer", rtl::DeviceKind::kStreamSink, 8, 8, 1, 0, 0,
                             {{"p_full", "p_full"}, {"p_write", "p_write"}, {"p_data_out", "p_data_out"}}};
  n.interfaces = {src, dst};
  return n;
}

// The pattern-based system and the hand-written engine accept and emit
// elements on the same cycles.
TEST(Reference, CycleEquivalentToHandWrittenCopy) {
  rtl::Netlist pattern = emit::elaborate(load_fixture("copy_fifo.json"));
  rtl::Netlist custom = reference_netlist();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    sim::Stimulus st;
    st.sources["rbuffer"] = random_elements(400, 8, seed);
    st.stall_permille = {{"rbuffer", 250}, {"wbuffer", 250}};
    st.seed = seed;
    sim::Trace a = sim::run_simulation(pattern, st);
    sim::Trace b = sim::run_simulation(custom, st);
    EXPECT_EQ(a.captured, b.captured);
    EXPECT_EQ(a.element_cycles, b.element_cycles);
  }
}

TEST(Prune, MatrixIsCycleEquivalent) {
  auto cases = testkit::prune_matrix();
  EXPECT_GT(cases.size(), 60u);
  for (const auto& pc : cases) {
    auto err = testkit::check_prune_case(pc, 300, 17);
    EXPECT_FALSE(err) << pc.label() << ": " << *err;
  }
}

}  // namespace
