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

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "patternforge/emit.hpp"
#include "patternforge/sim.hpp"

namespace {

using namespace patternforge;

model::SystemSpec fixture(const std::string& name) {
  std::ifstream in(std::string(PATTERNFORGE_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model::parse_system_spec(ss.str());
}

std::vector<std::uint64_t> stream(std::size_t n, unsigned width) {
  std::mt19937_64 rng(1);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng() & rtl::mask(width);
  return v;
}

void BM_Elaborate(benchmark::State& state, const char* name) {
  model::SystemSpec s = fixture(name);
  for (auto _ : state) benchmark::DoNotOptimize(emit::elaborate(s));
}

void BM_EmitVerilog(benchmark::State& state, const char* name) {
  rtl::Netlist n = emit::elaborate(fixture(name));
  for (auto _ : state) benchmark::DoNotOptimize(emit::emit_verilog(n));
}

// Throughput in simulated cycles per second.
void BM_Simulate(benchmark::State& state, const char* name, const char* source, unsigned width, std::size_t elements,
                 unsigned stall) {
  model::SystemSpec s = fixture(name);
  rtl::Netlist n = emit::elaborate(s);
  sim::Stimulus st;
  st.sources[source] = stream(elements, width);
  if (stall) {
    for (const auto& itf : n.interfaces) {
      if (itf.kind != rtl::DeviceKind::kSram) st.stall_permille[itf.name] = stall;
    }
  }
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    sim::Trace t = sim::run_simulation(n, st);
    cycles += t.cycles;
    benchmark::DoNotOptimize(t);
  }
  state.counters["cycles/s"] = benchmark::Counter(static_cast<double>(cycles), benchmark::Counter::kIsRate);
}

BENCHMARK_CAPTURE(BM_Elaborate, copy_fifo, "copy_fifo.json");
BENCHMARK_CAPTURE(BM_Elaborate, copy_shared_sram, "copy_shared_sram.json");
BENCHMARK_CAPTURE(BM_Elaborate, blur, "blur.json");
BENCHMARK_CAPTURE(BM_EmitVerilog, blur, "blur.json");
BENCHMARK_CAPTURE(BM_Simulate, copy_fifo_10k, "copy_fifo.json", "rbuffer", 8, 10'000, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, copy_fifo_10k_stalls, "copy_fifo.json", "rbuffer", 8, 10'000, 300)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, copy_sram_rgb_1k, "copy_sram_rgb.json", "rbuffer", 24, 1'000, 0)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, blur_64x64, "blur.json", "rows", 8, 64 * 64, 0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
