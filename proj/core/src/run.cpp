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

#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "patternforge/sim.hpp"

namespace patternforge::sim {

using namespace rtl;

namespace {

// Top-level port access by role; absent roles read as 0 and ignore writes.
class Pins {
 public:
  Pins(Simulator& sim, const ExternalInterface& itf) : sim_(sim), itf_(itf) {}
  std::uint64_t get(const std::string& role) const {
    auto it = itf_.ports.find(role);
    return it == itf_.ports.end() ? 0 : sim_.peek(it->second);
  }
  void set(const std::string& role, std::uint64_t v) {
    auto it = itf_.ports.find(role);
    if (it != itf_.ports.end()) sim_.poke(it->second, v);
  }

 private:
  Simulator& sim_;
  const ExternalInterface& itf_;
};

class Device {
 public:
  Device(Simulator& sim, const ExternalInterface& itf) : pins_(sim, itf), itf_(itf) {}
  virtual ~Device() = default;
  virtual void drive() = 0;
  // Samples settled outputs; returns true when device state changes.
  virtual bool clock(std::uint64_t cycle) = 0;
  virtual bool pending() const { return false; }
  virtual bool stalled() const { return false; }
  virtual void finish(Trace&) const {}
  const std::string& name() const { return itf_.name; }

 protected:
  Pins pins_;
  const ExternalInterface& itf_;
};

class Staller {
 public:
  Staller(std::uint64_t seed, std::size_t index, unsigned permille)
      : rng_(seed + 0x9E3779B97F4A7C15ULL * (index + 1)), permille_(permille) {}
  bool draw() {
    if (permille_ == 0) return false;
    return rng_() % 1000 < permille_;
  }

 private:
  std::mt19937_64 rng_;
  unsigned permille_;
};

std::vector<std::uint64_t> split(const ExternalInterface& itf, const std::vector<std::uint64_t>& elements) {
  std::vector<std::uint64_t> beats;
  beats.reserve(elements.size() * itf.beats_per_element);
  for (std::uint64_t e : elements) {
    if ((e & ~mask(itf.element_width)) != 0) {
      throw SimulationError("element " + std::to_string(e) + " does not fit " + std::to_string(itf.element_width) +
                            " bits on '" + itf.name + "'");
    }
    for (unsigned i = 0; i < itf.beats_per_element; ++i) {
      unsigned shift = i * itf.beat_width;
      beats.push_back(shift >= 64 ? 0 : (e >> shift) & mask(itf.beat_width));
    }
  }
  return beats;
}

struct Counting {
  InterfaceCounter counter;
  std::vector<std::uint64_t> cycles;
  void count(std::uint64_t cycle) {
    if (counter.elements == 0) counter.first_cycle = cycle;
    counter.last_cycle = cycle;
    ++counter.elements;
    cycles.push_back(cycle);
  }
  void finish(Trace& t, const std::string& name) const {
    t.counters[name] = counter;
    t.element_cycles[name] = cycles;
  }
};

// Assembles beats (least significant first) into elements.
class Assembler {
 public:
  explicit Assembler(const ExternalInterface& itf) : itf_(itf) {}
  bool push(std::uint64_t beat) {
    unsigned shift = phase_ * itf_.beat_width;
    if (shift < 64) value_ |= (beat & mask(itf_.beat_width)) << shift;
    if (++phase_ < itf_.beats_per_element) return false;
    elements.push_back(value_ & mask(itf_.element_width));
    value_ = 0;
    phase_ = 0;
    return true;
  }
  std::vector<std::uint64_t> elements;

 private:
  const ExternalInterface& itf_;
  unsigned phase_ = 0;
  std::uint64_t value_ = 0;
};

// Producer behind a fifo core: p_empty / p_read / p_data.
class StreamSource : public Device {
 public:
  StreamSource(Simulator& sim, const ExternalInterface& itf, const std::vector<std::uint64_t>& elements,
               Staller staller)
      : Device(sim, itf), beats_(split(itf, elements)), staller_(staller) {}
  void drive() override {
    stalled_ = pos_ < beats_.size() && staller_.draw();
    bool empty = pos_ >= beats_.size() || stalled_;
    pins_.set("p_empty", empty ? 1 : 0);
    pins_.set("p_data", pos_ < beats_.size() ? beats_[pos_] : 0);
  }
  bool clock(std::uint64_t cycle) override {
    if (pos_ >= beats_.size() || stalled_ || pins_.get("p_read") == 0) return false;
    ++pos_;
    if (pos_ % itf_.beats_per_element == 0) counting_.count(cycle);
    return true;
  }
  bool pending() const override { return pos_ < beats_.size(); }
  bool stalled() const override { return stalled_; }
  void finish(Trace& t) const override { counting_.finish(t, name()); }

 private:
  std::vector<std::uint64_t> beats_;
  std::size_t pos_ = 0;
  Staller staller_;
  bool stalled_ = false;
  Counting counting_;
};

// Consumer behind a fifo core: p_full / p_write / p_data_out.
class StreamSink : public Device {
 public:
  StreamSink(Simulator& sim, const ExternalInterface& itf, Staller staller)
      : Device(sim, itf), staller_(staller), assembler_(itf) {}
  void drive() override {
    stalled_ = staller_.draw();
    pins_.set("p_full", stalled_ ? 1 : 0);
  }
  bool clock(std::uint64_t cycle) override {
    if (stalled_ || pins_.get("p_write") == 0) return false;
    if (assembler_.push(pins_.get("p_data_out"))) counting_.count(cycle);
    return true;
  }
  bool stalled() const override { return stalled_; }
  void finish(Trace& t) const override {
    t.captured[name()] = assembler_.elements;
    counting_.finish(t, name());
  }

 private:
  Staller staller_;
  bool stalled_ = false;
  Assembler assembler_;
  Counting counting_;
};

// Fifo or lifo core used as container storage.
class Storage : public Device {
 public:
  Storage(Simulator& sim, const ExternalInterface& itf, bool lifo) : Device(sim, itf), lifo_(lifo) {}
  void drive() override {
    pins_.set("p_empty", items_.empty() ? 1 : 0);
    pins_.set("p_full", items_.size() >= itf_.depth ? 1 : 0);
    pins_.set("p_data", items_.empty() ? 0 : (lifo_ ? items_.back() : items_.front()));
  }
  bool clock(std::uint64_t) override {
    bool changed = false;
    bool was_full = items_.size() >= itf_.depth;
    if (pins_.get("p_read") != 0 && !items_.empty()) {
      if (lifo_) {
        items_.pop_back();
      } else {
        items_.pop_front();
      }
      changed = true;
    }
    if (pins_.get("p_write") != 0 && !was_full) {
      items_.push_back(pins_.get("p_data_out"));
      changed = true;
    }
    return changed;
  }

 private:
  bool lifo_;
  std::deque<std::uint64_t> items_;
};

// Synchronous sram with req/ack handshake: ack rises once req has been held
// for `read_latency` cycles, carrying the read word; writes land on that edge.
class Sram : public Device {
 public:
  Sram(Simulator& sim, const ExternalInterface& itf, const std::vector<std::uint64_t>& preload)
      : Device(sim, itf), latency_(std::max(1u, itf.read_latency)) {
    if (preload.size() > itf.depth) throw SimulationError("preload larger than sram '" + itf.name + "'");
    for (std::size_t a = 0; a < preload.size(); ++a) {
      if ((preload[a] & ~mask(itf.beat_width)) != 0) {
        throw SimulationError("preload word wider than the bus of '" + itf.name + "'");
      }
      if (preload[a] != 0) words_[a] = preload[a];
    }
    extent_ = preload.size();
  }
  void drive() override {
    pins_.set("ack", ack_ ? 1 : 0);
    pins_.set("p_data", rdata_);
  }
  bool clock(std::uint64_t cycle) override {
    if (ack_) {
      ack_ = false;
      held_ = 0;
      return true;
    }
    if (pins_.get("req") == 0) {
      bool changed = held_ != 0;
      held_ = 0;
      return changed;
    }
    if (++held_ < latency_) return true;
    std::uint64_t addr = pins_.get("p_addr");
    auto it = words_.find(addr);
    rdata_ = it == words_.end() ? 0 : it->second;
    if (pins_.get("p_we") != 0) {
      std::uint64_t data = pins_.get("p_data_out") & mask(itf_.beat_width);
      if (data == 0) {
        words_.erase(addr);
      } else {
        words_[addr] = data;
      }
      extent_ = std::max<std::uint64_t>(extent_, addr + 1);
    }
    ack_ = true;
    held_ = 0;
    counting_.count(cycle);
    return true;
  }
  void finish(Trace& t) const override {
    std::vector<std::uint64_t> image(extent_, 0);
    for (const auto& [addr, word] : words_) {
      if (addr < extent_) image[addr] = word;
    }
    t.memories[name()] = std::move(image);
    counting_.finish(t, name());
  }

 private:
  unsigned latency_;
  std::map<std::uint64_t, std::uint64_t> words_;
  std::uint64_t extent_ = 0;
  unsigned held_ = 0;
  bool ack_ = false;
  std::uint64_t rdata_ = 0;
  Counting counting_;
};

// Producer filling an sram-backed buffer: holds p_push until p_push_done.
class PushSource : public Device {
 public:
  PushSource(Simulator& sim, const ExternalInterface& itf, const std::vector<std::uint64_t>& elements,
             Staller staller)
      : Device(sim, itf), beats_(split(itf, elements)), staller_(staller) {}
  void drive() override {
    stalled_ = false;
    if (!active_ && pos_ < beats_.size()) {
      stalled_ = staller_.draw();
      active_ = !stalled_;
    }
    pins_.set("p_push", active_ ? 1 : 0);
    pins_.set("p_push_data", pos_ < beats_.size() ? beats_[pos_] : 0);
  }
  bool clock(std::uint64_t cycle) override {
    if (!active_ || pins_.get("p_push_done") == 0) return active_;
    active_ = false;
    ++pos_;
    if (pos_ % itf_.beats_per_element == 0) counting_.count(cycle);
    return true;
  }
  bool pending() const override { return pos_ < beats_.size(); }
  bool stalled() const override { return stalled_; }
  void finish(Trace& t) const override { counting_.finish(t, name()); }

 private:
  std::vector<std::uint64_t> beats_;
  std::size_t pos_ = 0;
  Staller staller_;
  bool active_ = false;
  bool stalled_ = false;
  Counting counting_;
};

// Consumer draining an sram-backed buffer: holds p_pop until p_pop_done.
class PopSink : public Device {
 public:
  PopSink(Simulator& sim, const ExternalInterface& itf, Staller staller)
      : Device(sim, itf), staller_(staller), assembler_(itf) {}
  void drive() override {
    stalled_ = false;
    if (!active_) {
      stalled_ = staller_.draw();
      active_ = !stalled_;
    }
    pins_.set("p_pop", active_ ? 1 : 0);
  }
  bool clock(std::uint64_t cycle) override {
    if (!active_ || pins_.get("p_pop_done") == 0) return false;
    active_ = false;
    if (assembler_.push(pins_.get("p_pop_data"))) counting_.count(cycle);
    return true;
  }
  bool stalled() const override { return stalled_; }
  void finish(Trace& t) const override {
    t.captured[name()] = assembler_.elements;
    counting_.finish(t, name());
  }

 private:
  Staller staller_;
  bool active_ = false;
  bool stalled_ = false;
  Assembler assembler_;
  Counting counting_;
};

bool is_producer(DeviceKind kind) { return kind == DeviceKind::kStreamSource || kind == DeviceKind::kPushSource; }

}  // namespace

Trace run_simulation(const Netlist& netlist, const Stimulus& st) {
  Simulator sim(netlist);

  std::set<std::string> producers, srams, stallable;
  for (const ExternalInterface& itf : netlist.interfaces) {
    if (is_producer(itf.kind)) producers.insert(itf.name);
    if (itf.kind == DeviceKind::kSram) srams.insert(itf.name);
    if (itf.kind != DeviceKind::kSram && itf.kind != DeviceKind::kFifoStorage && itf.kind != DeviceKind::kLifoStorage) {
      stallable.insert(itf.name);
    }
  }
  for (const auto& [name, _] : st.sources) {
    if (!producers.contains(name)) throw SimulationError("stimulus names no producer interface '" + name + "'");
  }
  for (const auto& [name, _] : st.memories) {
    if (!srams.contains(name)) throw SimulationError("stimulus names no sram '" + name + "'");
  }
  for (const auto& [name, permille] : st.stall_permille) {
    if (!stallable.contains(name)) throw SimulationError("stimulus names no stallable interface '" + name + "'");
    if (permille >= 1000) throw SimulationError("stall permille for '" + name + "' must be below 1000");
  }
  for (const std::string& name : producers) {
    if (!st.sources.contains(name)) throw SimulationError("no stimulus bound to producer '" + name + "'");
  }

  static const std::vector<std::uint64_t> kNone;
  std::vector<std::unique_ptr<Device>> devices;
  for (std::size_t k = 0; k < netlist.interfaces.size(); ++k) {
    const ExternalInterface& itf = netlist.interfaces[k];
    auto stall = st.stall_permille.find(itf.name);
    Staller staller(st.seed, k, stall == st.stall_permille.end() ? 0 : stall->second);
    switch (itf.kind) {
      case DeviceKind::kStreamSource:
        devices.push_back(std::make_unique<StreamSource>(sim, itf, st.sources.at(itf.name), staller));
        break;
      case DeviceKind::kStreamSink:
        devices.push_back(std::make_unique<StreamSink>(sim, itf, staller));
        break;
      case DeviceKind::kFifoStorage:
      case DeviceKind::kLifoStorage:
        devices.push_back(std::make_unique<Storage>(sim, itf, itf.kind == DeviceKind::kLifoStorage));
        break;
      case DeviceKind::kSram: {
        auto pre = st.memories.find(itf.name);
        devices.push_back(std::make_unique<Sram>(sim, itf, pre == st.memories.end() ? kNone : pre->second));
        break;
      }
      case DeviceKind::kPushSource:
        devices.push_back(std::make_unique<PushSource>(sim, itf, st.sources.at(itf.name), staller));
        break;
      case DeviceKind::kPopSink:
        devices.push_back(std::make_unique<PopSink>(sim, itf, staller));
        break;
    }
  }
  for (const std::string& s : st.wave_signals) {
    if (!sim.has_signal(s)) throw SimulationError("no signal '" + s + "' to sample");
  }

  Trace trace;
  trace.wave_signals = st.wave_signals;
  unsigned quiet = 0;
  while (sim.cycle() < st.max_cycles) {
    std::uint64_t cycle = sim.cycle();
    for (auto& d : devices) d->drive();
    sim.settle();
    if (!st.wave_signals.empty()) {
      std::vector<std::uint64_t> row;
      row.reserve(st.wave_signals.size());
      for (const std::string& s : st.wave_signals) row.push_back(sim.peek(s));
      trace.waves.push_back(std::move(row));
    }
    bool active = false;
    for (auto& d : devices) active |= d->clock(cycle);
    active |= sim.commit();
    if (!st.stop_when_quiescent) continue;
    for (const auto& d : devices) active |= d->pending() || d->stalled();
    quiet = active ? 0 : quiet + 1;
    if (quiet >= kQuiescentCycles) {
      trace.quiesced = true;
      break;
    }
  }
  trace.cycles = sim.cycle();
  for (const auto& d : devices) d->finish(trace);
  return trace;
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational measure_throughput(const Trace& trace, const std::string& interface) {
  auto it = trace.counters.find(interface);
  if (it == trace.counters.end()) throw SimulationError("trace has no interface '" + interface + "'");
  const InterfaceCounter& c = it->second;
  if (c.elements < 2) throw SimulationError("throughput of '" + interface + "' needs at least 2 elements");
  std::uint64_t num = c.last_cycle - c.first_cycle;
  std::uint64_t den = c.elements - 1;
  std::uint64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

std::string waves_csv(const Trace& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.wave_signals.size(); ++i) out << (i ? "," : "") << trace.wave_signals[i];
  out << "\n";
  for (const auto& row : trace.waves) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace patternforge::sim
