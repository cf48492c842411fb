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

#include <set>
#include <string>

#include "json.hpp"
#include "patternforge/model.hpp"

namespace patternforge::model {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& field(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_identifier(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  auto s = v.get<std::string>();
  if (!is_identifier(s)) fail(where, "'" + s + "' is not a valid identifier");
  return s;
}

unsigned get_unsigned(const json& obj, const std::string& where, const char* key,
                      std::optional<unsigned> fallback = std::nullopt, unsigned minimum = 0) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    fail(where, std::string("missing field '") + key + "'");
  }
  if (!it->is_number_integer() || it->get<long long>() < 0 || it->get<long long>() > 0xFFFFFFFFLL) {
    fail(where, std::string("field '") + key + "' must be a non-negative integer");
  }
  auto v = it->get<unsigned>();
  if (v < minimum) {
    fail(where, std::string("field '") + key + "' must be at least " + std::to_string(minimum));
  }
  return v;
}

template <typename E, typename Fn>
E get_enum(const json& obj, const std::string& where, const char* key, Fn from_string) {
  const json& v = field(obj, where, key);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  auto parsed = from_string(v.get<std::string>());
  if (!parsed) fail(where, "unknown " + std::string(key) + " '" + v.get<std::string>() + "'");
  return *parsed;
}

const json& get_array(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail("document", std::string("missing top-level array '") + key + "'");
  if (!it->is_array()) fail("document", std::string("'") + key + "' must be an array");
  return *it;
}

void require_unique(std::set<std::string>& seen, const std::string& name, const char* space) {
  if (!seen.insert(name).second) {
    throw ParseError(std::string("duplicate ") + space + " name '" + name + "'");
  }
}

}  // namespace

SystemSpec parse_system_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("document: top level must be a JSON object");

  SystemSpec spec;
  std::set<std::string> names;

  const json& containers = get_array(doc, "containers");
  if (containers.empty()) throw ParseError("at least one container required");
  for (std::size_t i = 0; i < containers.size(); ++i) {
    std::string where = "containers[" + std::to_string(i) + "]";
    const json& c = containers[i];
    if (!c.is_object()) fail(where, "must be an object");
    ContainerSpec spec_c;
    spec_c.name = get_identifier(c, where, "name");
    spec_c.kind = get_enum<ContainerKind>(c, where, "kind", container_kind_from_string);
    const json& element = field(c, where, "element");
    if (!element.is_object()) fail(where, "'element' must be an object");
    spec_c.element.width_bits = get_unsigned(element, where + ".element", "width_bits", {}, 1);
    spec_c.capacity = get_unsigned(c, where, "capacity", {}, 1);
    require_unique(names, spec_c.name, "container");
    spec.containers.push_back(std::move(spec_c));
  }

  names.clear();
  const json& targets = get_array(doc, "targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    std::string where = "targets[" + std::to_string(i) + "]";
    const json& t = targets[i];
    if (!t.is_object()) fail(where, "must be an object");
    PhysicalTarget target;
    target.name = get_identifier(t, where, "name");
    target.kind = get_enum<TargetKind>(t, where, "kind", target_kind_from_string);
    target.data_bus_width_bits = get_unsigned(t, where, "data_bus_width_bits", {}, 1);
    target.addr_width_bits = get_unsigned(t, where, "addr_width_bits", 0u);
    target.read_latency_cycles = get_unsigned(t, where, "read_latency_cycles", 0u);
    if (auto it = t.find("shared"); it != t.end()) {
      if (!it->is_boolean()) fail(where, "field 'shared' must be a boolean");
      target.shared = it->get<bool>();
    }
    require_unique(names, target.name, "target");
    spec.targets.push_back(std::move(target));
  }

  names.clear();
  const json& iterators = get_array(doc, "iterators");
  for (std::size_t i = 0; i < iterators.size(); ++i) {
    std::string where = "iterators[" + std::to_string(i) + "]";
    const json& it = iterators[i];
    if (!it.is_object()) fail(where, "must be an object");
    IteratorSpec spec_it;
    spec_it.name = get_identifier(it, where, "name");
    spec_it.kind = get_enum<IteratorKind>(it, where, "kind", iterator_kind_from_string);
    spec_it.access = get_enum<Access>(it, where, "access", access_from_string);
    spec_it.container = get_identifier(it, where, "container");
    if (spec.find_container(spec_it.container) == nullptr) {
      throw ParseError(where + ": dangling reference to container '" + spec_it.container + "'");
    }
    const json& ops = field(it, where, "used_ops");
    if (!ops.is_array()) fail(where, "'used_ops' must be an array");
    for (const json& op : ops) {
      if (!op.is_string()) fail(where, "'used_ops' entries must be strings");
      auto parsed = iterator_op_from_string(op.get<std::string>());
      if (!parsed) fail(where, "unknown operation '" + op.get<std::string>() + "'");
      spec_it.used_ops.insert(*parsed);
    }
    require_unique(names, spec_it.name, "iterator");
    spec.iterators.push_back(std::move(spec_it));
  }

  names.clear();
  const json& algorithms = get_array(doc, "algorithms");
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    std::string where = "algorithms[" + std::to_string(i) + "]";
    const json& a = algorithms[i];
    if (!a.is_object()) fail(where, "must be an object");
    AlgorithmBinding alg;
    alg.name = get_identifier(a, where, "name");
    alg.kind = get_enum<AlgorithmKind>(a, where, "kind", algorithm_kind_from_string);
    alg.source_iterator = get_identifier(a, where, "source_iterator");
    alg.sink_iterator = get_identifier(a, where, "sink_iterator");
    for (const std::string* ref : {&alg.source_iterator, &alg.sink_iterator}) {
      if (spec.find_iterator(*ref) == nullptr) {
        throw ParseError(where + ": dangling reference to iterator '" + *ref + "'");
      }
    }
    if (alg.kind == AlgorithmKind::kBlur3x3) {
      alg.image_width = get_unsigned(a, where, "image_width", {}, 1);
      alg.image_height = get_unsigned(a, where, "image_height", {}, 1);
    } else {
      alg.image_width = get_unsigned(a, where, "image_width", 0u);
      alg.image_height = get_unsigned(a, where, "image_height", 0u);
    }
    require_unique(names, alg.name, "algorithm");
    spec.algorithms.push_back(std::move(alg));
  }

  auto bindings = doc.find("bindings");
  if (bindings == doc.end()) throw ParseError("document: missing top-level object 'bindings'");
  if (!bindings->is_object()) throw ParseError("document: 'bindings' must be an object");
  for (const auto& [container, target] : bindings->items()) {
    if (spec.find_container(container) == nullptr) {
      throw ParseError("bindings: dangling reference to container '" + container + "'");
    }
    if (!target.is_string()) throw ParseError("bindings: target of '" + container + "' must be a string");
    auto target_name = target.get<std::string>();
    if (spec.find_target(target_name) == nullptr) {
      throw ParseError("bindings: dangling reference to target '" + target_name + "'");
    }
    spec.bindings.emplace(container, target_name);
  }
  return spec;
}

std::string serialize_system_spec(const SystemSpec& spec) {
  json doc;
  doc["containers"] = json::array();
  for (const auto& c : spec.containers) {
    doc["containers"].push_back({{"name", c.name},
                                 {"kind", std::string(to_string(c.kind))},
                                 {"element", {{"width_bits", c.element.width_bits}}},
                                 {"capacity", c.capacity}});
  }
  doc["iterators"] = json::array();
  for (const auto& it : spec.iterators) {
    json ops = json::array();
    for (IteratorOp op : it.used_ops) ops.push_back(std::string(to_string(op)));
    doc["iterators"].push_back({{"name", it.name},
                                {"kind", std::string(to_string(it.kind))},
                                {"access", std::string(to_string(it.access))},
                                {"container", it.container},
                                {"used_ops", ops}});
  }
  doc["algorithms"] = json::array();
  for (const auto& a : spec.algorithms) {
    json entry{{"name", a.name},
               {"kind", std::string(to_string(a.kind))},
               {"source_iterator", a.source_iterator},
               {"sink_iterator", a.sink_iterator}};
    if (a.kind == AlgorithmKind::kBlur3x3) {
      entry["image_width"] = a.image_width;
      entry["image_height"] = a.image_height;
    }
    doc["algorithms"].push_back(std::move(entry));
  }
  doc["targets"] = json::array();
  for (const auto& t : spec.targets) {
    doc["targets"].push_back({{"name", t.name},
                              {"kind", std::string(to_string(t.kind))},
                              {"data_bus_width_bits", t.data_bus_width_bits},
                              {"addr_width_bits", t.addr_width_bits},
                              {"read_latency_cycles", t.read_latency_cycles},
                              {"shared", t.shared}});
  }
  doc["bindings"] = json::object();
  for (const auto& [c, t] : spec.bindings) doc["bindings"][c] = t;
  return doc.dump(2) + "\n";
}

}  // namespace patternforge::model
