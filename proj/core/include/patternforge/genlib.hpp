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

#ifndef PATTERNFORGE_GENLIB_HPP_
#define PATTERNFORGE_GENLIB_HPP_

// Template-driven generation of container, iterator and arbiter modules.
//
// Every generated module speaks the method protocol: a request line m_<op>
// is held high until `done` pulses for one cycle; results on `data` are valid
// in that cycle. Operations over a fifo or lifo core with one beat per
// element complete combinationally (done follows the request).
//
// Port naming:
//   m_<op>            method requests (in)
//   data, done        method results (out); data_in, index method params (in)
//   p_<signal>        implementation interface towards the physical device
//   req / ack         sram handshake
//   c_<port>          iterator side facing its container's method interface

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "patternforge/model.hpp"
#include "patternforge/rtlir.hpp"

namespace patternforge::gen {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Method operations of a container kind, in port order.
std::vector<std::string> container_ops(model::ContainerKind kind);

// Container operations an iterator drives (pop/push for streams,
// read_at/write_at for vectors).
std::set<std::string> container_ops_used_by(const model::IteratorSpec& it, model::ContainerKind kind);

// Name of the generated container module, e.g. "rbuffer_fifo".
std::string container_module_name(const model::ContainerSpec& spec, const model::MappingPlan& plan);

rtl::RtlModule gen_container(const model::ContainerSpec& spec, const model::MappingPlan& plan);

rtl::RtlModule gen_iterator(const model::IteratorSpec& it, const model::ContainerSpec& container,
                            const model::MappingPlan& plan);

// Round-robin arbiter in front of a shared sram. Client i uses ports
// c<i>_req/c<i>_addr/c<i>_we/c<i>_wdata (in) and c<i>_ack/c<i>_rdata (out).
// A granted client keeps the memory until its access is acknowledged (or it
// withdraws the request); the grant then moves on to the next requester.
rtl::RtlModule gen_arbiter(const model::PhysicalTarget& target, unsigned client_count);

// Removes the request ports of operations outside `used_ops` and everything
// that only served them. Throws GenerationError when nothing would remain.
rtl::RtlModule prune_unused(const rtl::RtlModule& module, const std::set<std::string>& used_ops);

}  // namespace patternforge::gen

#endif  // PATTERNFORGE_GENLIB_HPP_
