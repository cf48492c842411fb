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

#include "patternforge/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace patternforge::report {

using namespace rtl;

ModuleResources module_resources(const RtlModule& m) {
  ModuleResources r;
  r.name = m.name;
  std::uint64_t nodes = 0;
  for (const Register& reg : m.registers) {
    r.register_bits += reg.width;
    if (reg.next) nodes += operator_count(*reg.next);
  }
  for (const Fsm& f : m.fsms) {
    r.register_bits += f.state_bits();
    r.fsm_state_count += f.states.size();
    for (const Transition& t : f.transitions) {
      nodes += operator_count(t.guard);
      for (const Assignment& a : t.actions) nodes += operator_count(a.value);
    }
  }
  for (const MemoryPrim& mem : m.memories) r.memory_bits += std::uint64_t{mem.depth} * mem.width;
  for (const MemWritePort& w : m.mem_writes) {
    nodes += operator_count(w.enable) + operator_count(w.addr) + operator_count(w.data);
  }
  for (const Assignment& a : m.comb) nodes += operator_count(a.value);
  r.port_count = m.ports.size();
  r.comb_node_count = nodes;
  return r;
}

ResourceReport resource_report(const Netlist& netlist) {
  if (auto lint = check_netlist(netlist); !lint.empty()) {
    throw std::invalid_argument("netlist fails lint: " + format_lint(lint.front()));
  }
  ResourceReport report;
  report.totals.name = "total";
  for (const RtlModule& m : netlist.modules) {
    ModuleResources r = module_resources(m);
    report.totals.register_bits += r.register_bits;
    report.totals.fsm_state_count += r.fsm_state_count;
    report.totals.memory_bits += r.memory_bits;
    report.totals.port_count += r.port_count;
    report.totals.comb_node_count += r.comb_node_count;
    report.modules.push_back(std::move(r));
  }
  return report;
}

namespace {

nlohmann::ordered_json counts(const ModuleResources& r, bool with_name) {
  nlohmann::ordered_json j;
  if (with_name) j["name"] = r.name;
  j["register_bits"] = r.register_bits;
  j["fsm_state_count"] = r.fsm_state_count;
  j["memory_bits"] = r.memory_bits;
  j["port_count"] = r.port_count;
  j["comb_node_count"] = r.comb_node_count;
  return j;
}

}  // namespace

std::string to_json(const ResourceReport& report) {
  nlohmann::ordered_json j;
  j["modules"] = nlohmann::ordered_json::array();
  for (const ModuleResources& r : report.modules) j["modules"].push_back(counts(r, true));
  j["totals"] = counts(report.totals, false);
  return j.dump(2) + "\n";
}

std::string to_text(const ResourceReport& report) {
  std::vector<ModuleResources> rows = report.modules;
  rows.push_back(report.totals);
  std::size_t name_width = 6;
  for (const ModuleResources& r : rows) name_width = std::max(name_width, r.name.size());
  std::ostringstream out;
  auto line = [&](const std::string& name, const std::vector<std::string>& cols) {
    out << std::left << std::setw(static_cast<int>(name_width)) << name;
    for (const std::string& c : cols) out << "  " << std::right << std::setw(10) << c;
    out << "\n";
  };
  line("module", {"reg_bits", "states", "mem_bits", "ports", "comb_nodes"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ModuleResources& r = rows[i];
    if (i + 1 == rows.size()) out << std::string(name_width + 5 * 12, '-') << "\n";
    line(r.name, {std::to_string(r.register_bits), std::to_string(r.fsm_state_count), std::to_string(r.memory_bits),
                  std::to_string(r.port_count), std::to_string(r.comb_node_count)});
  }
  return out.str();
}

}  // namespace patternforge::report
