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

#ifndef PATTERNFORGE_EMIT_HPP_
#define PATTERNFORGE_EMIT_HPP_

// System elaboration into a two-level netlist and Verilog-2001 rendering.
//
// Top-level port names:
//   <container>_<port>   fifo/lifo core, line buffer and sram buffer fill/drain groups
//   <target>_<port>      sram pins (p_addr, p_data, p_data_out, p_we, req, ack)
//   <module>_<port>      method ports of containers or iterators left free

#include <stdexcept>
#include <string>
#include <vector>

#include "patternforge/algos.hpp"
#include "patternforge/model.hpp"
#include "patternforge/rtlir.hpp"

namespace patternforge::emit {

inline constexpr const char* kToolVersion = "0.1.0";

class ElaborationError : public std::runtime_error {
 public:
  ElaborationError(const std::string& what, std::vector<model::Violation> violations,
                   std::vector<rtl::LintViolation> lint = {})
      : std::runtime_error(what), violations_(std::move(violations)), lint_(std::move(lint)) {}
  const std::vector<model::Violation>& violations() const { return violations_; }
  const std::vector<rtl::LintViolation>& lint() const { return lint_; }

 private:
  std::vector<model::Violation> violations_;
  std::vector<rtl::LintViolation> lint_;
};

struct ElaborateOptions {
  std::string top_name = "system_top";
  algo::BlurKernel kernel;
};

rtl::Netlist elaborate(const model::SystemSpec& spec, const ElaborateOptions& opts = {});

struct EmitOptions {
  std::string top_name;        // renames the top module when set
  std::string header_comment;  // extra comment lines
  std::string spec_digest;     // recorded in the header when set
};

class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string emit_verilog(const rtl::Netlist& netlist, const EmitOptions& opts = {});

// SHA-256 (hex) of the canonical serialization.
std::string spec_digest(const model::SystemSpec& spec);

// True when a module needs clk/rst: it holds state or instantiates one that does.
bool needs_clock(const rtl::Netlist& netlist, const rtl::RtlModule& module);

}  // namespace patternforge::emit

#endif  // PATTERNFORGE_EMIT_HPP_
