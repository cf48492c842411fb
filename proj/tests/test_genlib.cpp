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

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "patternforge/genlib.hpp"
#include "patternforge/report.hpp"
#include "patternforge/sim.hpp"
#include "support.hpp"

namespace {

using namespace patternforge;
using model::ContainerKind;
using model::ContainerSpec;
using model::PhysicalTarget;
using model::TargetKind;

PhysicalTarget fifo_core(unsigned bus = 8) { return {"core", TargetKind::kFifoCore, bus, 0, 0, false}; }
PhysicalTarget lifo_core(unsigned bus = 8) { return {"core", TargetKind::kLifoCore, bus, 0, 0, false}; }
PhysicalTarget sram(unsigned latency, unsigned bus = 8) { return {"mem", TargetKind::kSram, bus, 6, latency, false}; }

rtl::RtlModule container(ContainerKind kind, const PhysicalTarget& t, unsigned width = 8, unsigned cap = 4) {
  ContainerSpec c{"c", kind, {width}, cap};
  return gen::gen_container(c, model::plan_mapping(c, t));
}

// Drives a lone container module through its method ports, modelling the
// physical side in plain C++.
class Harness {
 public:
  enum class Device { kFifo, kLifo, kSram };

  Harness(rtl::RtlModule m, Device dev, unsigned latency = 0)
      : module_(m), sim_(rtl::single_module_netlist(std::move(m))), dev_(dev), latency_(latency) {
    sim_.reset();
    for (const auto& p : module_.ports) {
      if (p.dir == rtl::PortDir::kIn) sim_.poke(p.name, 0);
    }
  }

  bool has(const std::string& port) const { return module_.find_port(port) != nullptr; }

  // Issues one method call and holds it until done. Returns data at done.
  std::uint64_t call(const std::string& op, std::uint64_t data_in = 0, std::uint64_t index = 0,
                     unsigned limit = 64) {
    sim_.poke("m_" + op, 1);
    if (has("data_in")) sim_.poke("data_in", data_in);
    if (has("index")) sim_.poke("index", index);
    for (unsigned i = 0; i < limit; ++i) {
      settle();
      if (sim_.peek("done")) {
        std::uint64_t d = sim_.peek("data");
        clock();
        sim_.poke("m_" + op, 0);
        return d;
      }
      clock();
    }
    ADD_FAILURE() << op << " never completed";
    sim_.poke("m_" + op, 0);
    return 0;
  }

  std::deque<std::uint64_t> core;  // fifo/lifo storage, front = next out
  unsigned core_capacity = 4;
  std::map<std::uint64_t, std::uint64_t> mem;
  unsigned max_req_run = 0;

 private:
  void settle() {
    switch (dev_) {
      case Device::kFifo:
      case Device::kLifo:
        if (has("p_empty")) sim_.poke("p_empty", core.empty());
        if (has("p_full")) sim_.poke("p_full", core.size() >= core_capacity);
        if (has("p_data")) sim_.poke("p_data", core.empty() ? 0 : core.front());
        sim_.settle();
        break;
      case Device::kSram:
        sim_.poke("ack", held_ >= latency_ ? 1 : 0);
        sim_.settle();
        sim_.poke("p_data", mem[sim_.peek("p_addr")]);
        sim_.settle();
        break;
    }
  }

  void clock() {
    switch (dev_) {
      case Device::kFifo:
      case Device::kLifo:
        if (has("p_read") && sim_.peek("p_read")) core.pop_front();
        if (has("p_write") && sim_.peek("p_write")) {
          if (dev_ == Device::kFifo) core.push_back(sim_.peek("p_data_out"));
          else core.push_front(sim_.peek("p_data_out"));
        }
        break;
      case Device::kSram: {
        bool req = sim_.peek("req");
        bool ack = sim_.peek("ack");
        if (req && ack && sim_.peek("p_we")) mem[sim_.peek("p_addr")] = sim_.peek("p_data_out");
        held_ = req && !ack ? held_ + 1 : 0;
        if (req) max_req_run = std::max(max_req_run, held_ + (ack ? 1u : 0u));
        break;
      }
    }
    sim_.commit();
  }

  rtl::RtlModule module_;
  sim::Simulator sim_;
  Device dev_;
  unsigned latency_;
  unsigned held_ = 0;
};

TEST(Container, ModuleNamesFollowTarget) {
  EXPECT_EQ(container(ContainerKind::kQueue, fifo_core()).name, "c_fifo");
  EXPECT_EQ(container(ContainerKind::kStack, lifo_core()).name, "c_lifo");
  EXPECT_EQ(container(ContainerKind::kQueue, sram(1)).name, "c_sram");
}

TEST(Container, EveryCompatiblePairIsLintClean) {
  for (auto kind : {ContainerKind::kStack, ContainerKind::kQueue, ContainerKind::kReadBuffer,
                    ContainerKind::kWriteBuffer, ContainerKind::kVector}) {
    for (const auto& t : {fifo_core(), lifo_core(), sram(1), sram(3, 8)}) {
      if (!model::mapping_compatible(kind, t.kind)) {
        EXPECT_THROW(container(kind, t), model::ModelError);
        continue;
      }
      for (unsigned width : {8u, 24u}) {
        if (width > t.data_bus_width_bits && t.kind != TargetKind::kSram) continue;
        SCOPED_TRACE(std::string(model::to_string(kind)) + "/" + std::string(model::to_string(t.kind)));
        rtl::RtlModule m = container(kind, t, width);
        auto lint = rtl::check_module(m);
        for (const auto& v : lint) ADD_FAILURE() << rtl::format_lint(v);
        for (const std::string& op : gen::container_ops(kind)) EXPECT_NE(m.find_port("m_" + op), nullptr) << op;
      }
    }
  }
}

TEST(Container, QueueOnFifoCoreIsPureWiring) {
  rtl::RtlModule m = container(ContainerKind::kQueue, fifo_core());
  EXPECT_FALSE(m.has_state());
  Harness h(m, Harness::Device::kFifo);
  for (std::uint64_t v : {5u, 7u, 9u}) h.call("push", v);
  EXPECT_EQ(h.core.size(), 3u);
  EXPECT_EQ(h.call("empty"), 0u);
  EXPECT_EQ(h.call("pop"), 5u);
  EXPECT_EQ(h.call("pop"), 7u);
  EXPECT_EQ(h.call("pop"), 9u);
  EXPECT_EQ(h.call("empty"), 1u);
}

TEST(Container, StackOnLifoCore) {
  Harness h(container(ContainerKind::kStack, lifo_core()), Harness::Device::kLifo);
  for (std::uint64_t v : {1u, 2u, 3u}) h.call("push", v);
  EXPECT_EQ(h.call("pop"), 3u);
  EXPECT_EQ(h.call("pop"), 2u);
  h.call("push", 4);
  EXPECT_EQ(h.call("pop"), 4u);
  EXPECT_EQ(h.call("pop"), 1u);
}

class SramLatency : public ::testing::TestWithParam<unsigned> {};

TEST_P(SramLatency, QueueOrderAndQueries) {
  Harness h(container(ContainerKind::kQueue, sram(GetParam()), 8, 4), Harness::Device::kSram, GetParam());
  EXPECT_EQ(h.call("empty"), 1u);
  EXPECT_EQ(h.call("size"), 0u);
  // Wrap the circular region twice.
  std::deque<std::uint64_t> model;
  std::uint64_t next = 10;
  for (int round = 0; round < 3; ++round) {
    for (int i = 0; i < 3; ++i) {
      h.call("push", next);
      model.push_back(next++);
    }
    EXPECT_EQ(h.call("size"), model.size());
    while (model.size() > 1) {
      EXPECT_EQ(h.call("pop"), model.front());
      model.pop_front();
    }
  }
  h.call("push", 1);
  h.call("push", 2);
  h.call("push", 3);
  EXPECT_EQ(h.call("full"), 1u);
  EXPECT_LE(h.max_req_run, GetParam() + 1);
}

TEST_P(SramLatency, StackOrder) {
  Harness h(container(ContainerKind::kStack, sram(GetParam()), 8, 4), Harness::Device::kSram, GetParam());
  for (std::uint64_t v : {11u, 22u, 33u}) h.call("push", v);
  EXPECT_EQ(h.call("pop"), 33u);
  h.call("push", 44);
  EXPECT_EQ(h.call("pop"), 44u);
  EXPECT_EQ(h.call("pop"), 22u);
  EXPECT_EQ(h.call("pop"), 11u);
  EXPECT_EQ(h.call("empty"), 1u);
}

TEST_P(SramLatency, VectorRandomAccess) {
  Harness h(container(ContainerKind::kVector, sram(GetParam()), 8, 8), Harness::Device::kSram, GetParam());
  for (std::uint64_t i = 0; i < 8; ++i) h.call("write_at", 100 + i * 3, i);
  for (std::uint64_t i : {5u, 0u, 7u, 3u}) EXPECT_EQ(h.call("read_at", 0, i), 100 + i * 3);
  EXPECT_EQ(h.call("size"), 8u);
}

INSTANTIATE_TEST_SUITE_P(Latencies, SramLatency, ::testing::Values(0u, 1u, 3u));

TEST(Container, MultiBeatQueueOccupancyCountsElements) {
  // 24-bit elements, 8-bit beats: three pushes make one element.
  Harness h(container(ContainerKind::kQueue, sram(1), 24, 4), Harness::Device::kSram, 1);
  h.call("push", 0x11);
  EXPECT_EQ(h.call("size"), 0u);
  h.call("push", 0x22);
  h.call("push", 0x33);
  EXPECT_EQ(h.call("size"), 1u);
  EXPECT_EQ(h.call("pop"), 0x11u);
  EXPECT_EQ(h.call("pop"), 0x22u);
  EXPECT_EQ(h.call("pop"), 0x33u);
  EXPECT_EQ(h.call("empty"), 1u);
}

model::IteratorSpec iterator(model::IteratorKind kind, model::Access access, std::set<model::IteratorOp> ops) {
  return {"it", kind, access, "c", std::move(ops)};
}

TEST(Iterator, SingleBeatFifoIteratorHasNoState) {
  using model::IteratorOp;
  ContainerSpec c{"c", ContainerKind::kReadBuffer, {8}, 16};
  auto plan = model::plan_mapping(c, fifo_core());
  auto it = iterator(model::IteratorKind::kForward, model::Access::kRead, {IteratorOp::kInc, IteratorOp::kRead});
  rtl::RtlModule m = gen::gen_iterator(it, c, plan);
  EXPECT_EQ(m.name, "it");
  EXPECT_FALSE(m.has_state());
  EXPECT_TRUE(rtl::check_module(m).empty());
  for (const char* p : {"m_inc", "m_read", "data", "done", "c_m_pop", "c_data", "c_done"}) {
    EXPECT_NE(m.find_port(p), nullptr) << p;
  }
  EXPECT_EQ(m.find_port("m_write"), nullptr);
}

TEST(Iterator, MultiBeatIteratorAssemblesElement) {
  using model::IteratorOp;
  ContainerSpec c{"c", ContainerKind::kReadBuffer, {24}, 16};
  auto plan = model::plan_mapping(c, sram(1));
  auto it = iterator(model::IteratorKind::kForward, model::Access::kRead, {IteratorOp::kInc, IteratorOp::kRead});
  rtl::RtlModule m = gen::gen_iterator(it, c, plan);
  EXPECT_TRUE(rtl::check_module(m).empty());
  ASSERT_NE(m.find_fsm("beat_fsm"), nullptr);
  EXPECT_EQ(m.find_fsm("beat_fsm")->states.size(), 3u);
  ASSERT_NE(m.find_register("assembly"), nullptr);
  EXPECT_EQ(m.find_register("assembly")->width, 16u);
  EXPECT_EQ(m.find_port("data")->width, 24u);
  EXPECT_EQ(m.find_port("c_data")->width, 8u);
}

TEST(Iterator, RandomVectorIteratorKeepsPosition) {
  using model::IteratorOp;
  ContainerSpec c{"c", ContainerKind::kVector, {8}, 16};
  auto plan = model::plan_mapping(c, sram(1));
  auto it = iterator(model::IteratorKind::kRandom, model::Access::kReadWrite,
                     {IteratorOp::kInc, IteratorOp::kDec, IteratorOp::kIndex, IteratorOp::kRead, IteratorOp::kWrite});
  rtl::RtlModule m = gen::gen_iterator(it, c, plan);
  EXPECT_TRUE(rtl::check_module(m).empty());
  ASSERT_NE(m.find_register("position"), nullptr);
  EXPECT_EQ(m.find_register("position")->width, 4u);
  EXPECT_NE(m.find_port("index_in"), nullptr);
  EXPECT_NE(m.find_port("c_m_read_at"), nullptr);
  EXPECT_NE(m.find_port("c_m_write_at"), nullptr);
}

TEST(Iterator, RejectsOpsOutsideKindOrAccess) {
  using model::IteratorOp;
  ContainerSpec c{"c", ContainerKind::kQueue, {8}, 16};
  auto plan = model::plan_mapping(c, fifo_core());
  EXPECT_THROW(gen::gen_iterator(iterator(model::IteratorKind::kForward, model::Access::kRead,
                                          {IteratorOp::kDec, IteratorOp::kRead}),
                                 c, plan),
               gen::GenerationError);
  EXPECT_THROW(gen::gen_iterator(iterator(model::IteratorKind::kForward, model::Access::kRead,
                                          {IteratorOp::kInc, IteratorOp::kWrite}),
                                 c, plan),
               gen::GenerationError);
}

TEST(Iterator, ContainerOpsUsedBy) {
  using model::IteratorOp;
  auto it = iterator(model::IteratorKind::kForward, model::Access::kRead, {IteratorOp::kInc, IteratorOp::kRead});
  EXPECT_EQ(gen::container_ops_used_by(it, ContainerKind::kQueue), (std::set<std::string>{"pop"}));
  EXPECT_EQ(gen::container_ops_used_by(it, ContainerKind::kVector), (std::set<std::string>{"read_at"}));
}

// Arbiter driven by random client requests against a fixed-latency device.
TEST(Arbiter, MutualExclusionAndBoundedWait) {
  PhysicalTarget t{"mem", TargetKind::kSram, 8, 6, 2, true};
  rtl::RtlModule m = gen::gen_arbiter(t, 2);
  EXPECT_EQ(m.name, "mem_arbiter");
  ASSERT_TRUE(rtl::check_module(m).empty());
  sim::Simulator s(rtl::single_module_netlist(m));
  s.reset();
  std::mt19937_64 rng(7);
  bool req[2] = {false, false};
  unsigned wait[2] = {0, 0};
  unsigned held = 0;
  unsigned worst = 0;
  std::map<std::uint64_t, std::uint64_t> mem;
  for (int cycle = 0; cycle < 5000; ++cycle) {
    for (int c = 0; c < 2; ++c) {
      if (!req[c] && rng() % 3 == 0) req[c] = true;
      std::string p = "c" + std::to_string(c) + "_";
      s.poke(p + "req", req[c]);
      s.poke(p + "addr", c * 8 + rng() % 8);
      s.poke(p + "we", 1);
      s.poke(p + "wdata", rng() & 0xFF);
    }
    s.poke("ack", held >= t.read_latency_cycles);
    s.poke("p_data", 0);
    s.settle();
    s.poke("ack", s.peek("req") && held >= t.read_latency_cycles);
    s.settle();
    bool a0 = s.peek("c0_ack");
    bool a1 = s.peek("c1_ack");
    ASSERT_FALSE(a0 && a1) << "cycle " << cycle;
    bool dev_ack = s.peek("ack");
    held = s.peek("req") && !dev_ack ? held + 1 : 0;
    bool acks[2] = {a0, a1};
    for (int c = 0; c < 2; ++c) {
      if (acks[c]) {
        worst = std::max(worst, wait[c]);
        wait[c] = 0;
        req[c] = false;
      } else if (req[c]) {
        ++wait[c];
      }
    }
    s.commit();
  }
  // One transaction takes latency + 1 cycles; a client waits at most for
  // the other's transaction plus its own.
  EXPECT_LE(worst, 2 * (t.read_latency_cycles + 1));
}

TEST(Arbiter, RejectsFewerThanTwoClients) {
  PhysicalTarget t{"mem", TargetKind::kSram, 8, 6, 1, true};
  EXPECT_THROW(gen::gen_arbiter(t, 1), gen::GenerationError);
}

TEST(Prune, DropsUnusedMethodPorts) {
  rtl::RtlModule full = container(ContainerKind::kQueue, sram(1));
  rtl::RtlModule pruned = gen::prune_unused(full, {"pop"});
  EXPECT_EQ(pruned.method_ops(), (std::vector<std::string>{"pop"}));
  EXPECT_EQ(pruned.find_port("data_in"), nullptr);
  EXPECT_TRUE(rtl::check_module(pruned).empty());
  auto a = report::module_resources(full);
  auto b = report::module_resources(pruned);
  EXPECT_LT(b.comb_node_count, a.comb_node_count);
  EXPECT_LE(b.register_bits, a.register_bits);
}

TEST(Prune, RejectsUnknownOrEmpty) {
  rtl::RtlModule full = container(ContainerKind::kQueue, fifo_core());
  EXPECT_THROW(gen::prune_unused(full, {"teleport"}), gen::GenerationError);
  EXPECT_THROW(gen::prune_unused(full, {}), gen::GenerationError);
}

TEST(Prune, KeepingEverythingIsIdentity) {
  rtl::RtlModule full = container(ContainerKind::kStack, sram(1));
  auto ops = full.method_ops();
  rtl::RtlModule same = gen::prune_unused(full, {ops.begin(), ops.end()});
  EXPECT_EQ(report::module_resources(same), report::module_resources(full));
}

}  // namespace
