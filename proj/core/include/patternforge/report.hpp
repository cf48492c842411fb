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

#ifndef PATTERNFORGE_REPORT_HPP_
#define PATTERNFORGE_REPORT_HPP_

// Resource accounting over the IR. register_bits stands in for flip-flops
// (FSM state encodings included), memory_bits for block RAM and
// comb_node_count (operator nodes) for LUTs. These are proxies only.

#include <cstdint>
#include <string>
#include <vector>

#include "patternforge/rtlir.hpp"

namespace patternforge::report {

struct ModuleResources {
  std::string name;
  std::uint64_t register_bits = 0;
  std::uint64_t fsm_state_count = 0;
  std::uint64_t memory_bits = 0;
  std::uint64_t port_count = 0;  // clk/rst not counted
  std::uint64_t comb_node_count = 0;
  friend bool operator==(const ModuleResources&, const ModuleResources&) = default;
};

struct ResourceReport {
  std::vector<ModuleResources> modules;  // netlist order
  ModuleResources totals;                // name "total"
  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;
};

ModuleResources module_resources(const rtl::RtlModule& module);

// Throws std::invalid_argument on a lint-dirty netlist.
ResourceReport resource_report(const rtl::Netlist& netlist);

std::string to_json(const ResourceReport& report);
std::string to_text(const ResourceReport& report);

}  // namespace patternforge::report

#endif  // PATTERNFORGE_REPORT_HPP_
