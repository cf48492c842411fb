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

#ifndef PATTERNFORGE_SIM_HPP_
#define PATTERNFORGE_SIM_HPP_

// Two-phase cycle simulator. Each cycle the combinational logic is settled
// in levelized order, then registers, FSM state and memory writes commit
// together. External devices (stream producers/consumers, fifo/lifo cores,
// srams) are modeled outside the netlist and attach to top-level ports.
//
// Stalls come from std::mt19937_64 seeded with seed + 0x9E3779B97F4A7C15 * (k+1)
// for the k-th interface; a device stalls in a cycle when draw % 1000 < permille.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "patternforge/rtlir.hpp"

namespace patternforge::sim {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cycle-level access to a flattened netlist. Signals of child instances are
// named "<instance>.<signal>"; top-level signals by their plain names.
class Simulator {
 public:
  explicit Simulator(const rtl::Netlist& netlist);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  void reset();  // registers, FSMs and memories back to reset values
  void poke(const std::string& input_port, std::uint64_t value);
  std::uint64_t peek(const std::string& signal) const;
  bool has_signal(const std::string& signal) const;
  void settle();
  // Settles, then commits one clock edge. Returns true when any register,
  // FSM state or memory word changed.
  bool step();
  // Commits one clock edge using the values of the last settle().
  bool commit();
  std::uint64_t cycle() const;
  std::uint64_t memory_word(const std::string& memory, std::uint64_t address) const;
  // Input ports, then output ports of the top module.
  const std::vector<rtl::Port>& top_ports() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Stimulus {
  // Element sequences for producers (stream_source / push_source
  // interfaces), keyed by interface name.
  std::map<std::string, std::vector<std::uint64_t>> sources;
  // Initial sram contents keyed by target name (missing words are zero).
  std::map<std::string, std::vector<std::uint64_t>> memories;
  // Stall probability in 1/1000 per interface; absent means never stall.
  std::map<std::string, unsigned> stall_permille;
  std::uint64_t seed = 0;
  std::uint64_t max_cycles = 1'000'000;
  bool stop_when_quiescent = true;
  // Signals sampled every cycle after settling.
  std::vector<std::string> wave_signals;
};

struct InterfaceCounter {
  std::uint64_t elements = 0;
  std::uint64_t first_cycle = 0;
  std::uint64_t last_cycle = 0;
  friend bool operator==(const InterfaceCounter&, const InterfaceCounter&) = default;
};

struct Trace {
  std::uint64_t cycles = 0;
  bool quiesced = false;  // stopped early by quiescence detection
  std::map<std::string, std::vector<std::uint64_t>> captured;      // consumer interfaces
  std::map<std::string, std::vector<std::uint64_t>> memories;      // final sram images
  std::map<std::string, InterfaceCounter> counters;                // every producer and consumer
  std::map<std::string, std::vector<std::uint64_t>> element_cycles;  // cycle of each counted element
  std::vector<std::string> wave_signals;
  std::vector<std::vector<std::uint64_t>> waves;  // one row per cycle
  friend bool operator==(const Trace&, const Trace&) = default;
};

// Quiescence: 8 consecutive cycles without any design or device state
// change, with no producer holding data and no device stalling.
inline constexpr unsigned kQuiescentCycles = 8;

Trace run_simulation(const rtl::Netlist& netlist, const Stimulus& stimulus);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& r);

// (last - first) / (elements - 1) in lowest terms.
Rational measure_throughput(const Trace& trace, const std::string& interface);

// CSV with a header row of signal names and one decimal row per cycle.
std::string waves_csv(const Trace& trace);

}  // namespace patternforge::sim

#endif  // PATTERNFORGE_SIM_HPP_
