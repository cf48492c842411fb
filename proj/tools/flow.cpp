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

#include "flow.hpp"

#include <filesystem>
#include <set>

#include "json.hpp"
#include "patternforge/algos.hpp"
#include "patternforge/emit.hpp"
#include "patternforge/model.hpp"
#include "patternforge/report.hpp"
#include "patternforge/sim.hpp"
#include "pnm.hpp"

namespace patternforge::tools {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

model::SystemSpec load_spec(const std::string& path) {
  if (path.empty()) throw UsageError("--spec is required");
  return model::parse_system_spec(read_file(path));
}

void print_violations(const std::vector<model::Violation>& vs, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& v : vs) j.push_back({{"code", v.code}, {"subjects", v.subjects}, {"message", v.message}});
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& v : vs) out << model::format_violation(v) << "\n";
  out << vs.size() << (vs.size() == 1 ? " violation" : " violations") << "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw std::runtime_error("cannot create output directory '" + dir + "'");
  return p;
}

int validate(const RunConfig& cfg, std::ostream& out) {
  auto spec = load_spec(cfg.spec_path);
  auto vs = model::validate_system(spec);
  print_violations(vs, cfg.format, out);
  return vs.empty() ? kExitOk : kExitFailed;
}

std::string render_report(const rtl::Netlist& n, Format format) {
  auto r = report::resource_report(n);
  return format == Format::kJson ? report::to_json(r) : report::to_text(r);
}

int generate(const RunConfig& cfg, std::ostream& out) {
  auto spec = load_spec(cfg.spec_path);
  auto netlist = emit::elaborate(spec);
  emit::EmitOptions opts;
  opts.spec_digest = emit::spec_digest(spec);
  opts.header_comment = "source: " + fs::path(cfg.spec_path).filename().string();
  std::string verilog = emit::emit_verilog(netlist, opts);
  fs::path dir = prepare_out_dir(cfg.out_dir);
  fs::path vpath = dir / (netlist.top + ".v");
  fs::path rpath = dir / (netlist.top + (cfg.format == Format::kJson ? "_resources.json" : "_resources.txt"));
  write_file(vpath.string(), verilog);
  write_file(rpath.string(), render_report(netlist, cfg.format));
  out << "wrote " << vpath.string() << "\n"
      << "wrote " << rpath.string() << "\n";
  return kExitOk;
}

int report_cmd(const RunConfig& cfg, std::ostream& out) {
  auto spec = load_spec(cfg.spec_path);
  out << render_report(emit::elaborate(spec), cfg.format);
  return kExitOk;
}

struct Producer {
  const rtl::ExternalInterface* itf = nullptr;
  std::optional<Image> image;
};

int simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto spec = load_spec(cfg.spec_path);
  auto netlist = emit::elaborate(spec);

  std::map<std::string, Producer> producers;
  std::set<std::string> stallable;
  for (const auto& itf : netlist.interfaces) {
    if (itf.kind == rtl::DeviceKind::kStreamSource || itf.kind == rtl::DeviceKind::kPushSource) {
      producers[itf.name].itf = &itf;
    }
    if (itf.kind != rtl::DeviceKind::kSram && itf.kind != rtl::DeviceKind::kFifoStorage &&
        itf.kind != rtl::DeviceKind::kLifoStorage) {
      stallable.insert(itf.name);
    }
  }

  sim::Stimulus st;
  st.seed = cfg.seed;
  st.max_cycles = cfg.max_cycles;
  for (const auto& [name, path] : cfg.stimulus) {
    auto it = producers.find(name);
    if (it == producers.end()) throw UsageError("'" + name + "' is not a producer interface of this design");
    st.sources[name] = parse_raw(read_file(path), it->second.itf->element_width);
  }
  for (const auto& [name, path] : cfg.images) {
    auto it = producers.find(name);
    if (it == producers.end()) throw UsageError("'" + name + "' is not a producer interface of this design");
    if (st.sources.contains(name)) throw UsageError("'" + name + "' bound twice");
    Image img = parse_pnm(read_file(path));
    if (img.pixel_bits() != it->second.itf->element_width) {
      throw UsageError("image '" + path + "' has " + std::to_string(img.pixel_bits()) + "-bit pixels but '" + name +
                       "' carries " + std::to_string(it->second.itf->element_width) + "-bit elements");
    }
    st.sources[name] = img.pixels;
    it->second.image = std::move(img);
  }
  for (const auto& [name, p] : producers) {
    if (!st.sources.contains(name)) throw UsageError("no --stimulus or --image bound to '" + name + "'");
  }
  if (cfg.stall_permille >= 1000) throw UsageError("--stall-permille must be below 1000");
  if (cfg.stall_permille > 0) {
    for (const std::string& name : stallable) st.stall_permille[name] = cfg.stall_permille;
  }
  if (cfg.waves_path) {
    for (const auto& port : netlist.top_module().ports) st.wave_signals.push_back(port.name);
    for (const auto& net : netlist.top_module().nets) st.wave_signals.push_back(net.name);
  }

  sim::Trace trace = sim::run_simulation(netlist, st);
  fs::path dir = prepare_out_dir(cfg.out_dir);

  // Output images follow the producer feeding the same algorithm.
  std::map<std::string, Image> image_shapes;
  bool golden_ok = true;
  nlohmann::ordered_json golden_json = nlohmann::ordered_json::array();
  for (const auto& a : spec.algorithms) {
    const std::string src = spec.find_iterator(a.source_iterator)->container;
    const std::string snk = spec.find_iterator(a.sink_iterator)->container;
    auto p = producers.find(src);
    if (p == producers.end()) continue;
    const bool blur = a.kind == model::AlgorithmKind::kBlur3x3;
    if (p->second.image) {
      Image shape = *p->second.image;
      if (blur) {
        if (shape.width != a.image_width || shape.height != a.image_height) {
          throw UsageError("image is " + std::to_string(shape.width) + "x" + std::to_string(shape.height) + ", '" +
                           a.name + "' expects " + std::to_string(a.image_width) + "x" +
                           std::to_string(a.image_height));
        }
        shape.width -= 2;
        shape.height -= 2;
      }
      shape.pixels.clear();
      image_shapes[snk] = shape;
    } else if (blur && st.sources.at(src).size() != std::size_t{a.image_width} * a.image_height) {
      throw UsageError("stream for '" + src + "' does not hold a " + std::to_string(a.image_width) + "x" +
                       std::to_string(a.image_height) + " image");
    }
    if (!cfg.golden) continue;
    algo::GoldenParams params;
    params.element_width = p->second.itf->element_width;
    params.image_width = a.image_width;
    params.image_height = a.image_height;
    auto expected = algo::golden_reference(a.kind, st.sources.at(src), params);
    auto captured = trace.captured.find(snk);
    bool match = captured != trace.captured.end() && captured->second == expected;
    golden_ok &= match;
    golden_json.push_back({{"algorithm", a.name}, {"match", match}});
    if (cfg.format == Format::kText) {
      out << "golden " << a.name << ": " << (match ? "match" : "MISMATCH") << " (" << expected.size()
          << " expected, " << (captured == trace.captured.end() ? 0 : captured->second.size()) << " captured)\n";
    }
  }

  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& [name, elements] : trace.captured) {
    unsigned width = 8;
    for (const auto& itf : netlist.interfaces) {
      if (itf.name == name && (itf.kind == rtl::DeviceKind::kStreamSink || itf.kind == rtl::DeviceKind::kPopSink)) {
        width = itf.element_width;
      }
    }
    fs::path raw = dir / (name + ".bin");
    write_file(raw.string(), format_raw(elements, width));
    outputs.push_back(raw.string());
    auto shape = image_shapes.find(name);
    if (shape != image_shapes.end()) {
      Image img = shape->second;
      if (elements.size() == std::size_t{img.width} * img.height) {
        img.pixels = elements;
        fs::path ip = dir / (name + (img.color ? ".ppm" : ".pgm"));
        write_file(ip.string(), format_pnm(img));
        outputs.push_back(ip.string());
      } else {
        err << "warning: '" << name << "' captured " << elements.size() << " pixels, expected "
            << img.width * img.height << "; no image written\n";
      }
    }
  }
  if (cfg.waves_path) write_file(*cfg.waves_path, sim::waves_csv(trace));

  if (cfg.format == Format::kJson) {
    nlohmann::ordered_json j;
    j["cycles"] = trace.cycles;
    j["quiesced"] = trace.quiesced;
    nlohmann::ordered_json counters = nlohmann::ordered_json::object();
    for (const auto& [name, c] : trace.counters) {
      nlohmann::ordered_json e{{"elements", c.elements}, {"first_cycle", c.first_cycle}, {"last_cycle", c.last_cycle}};
      if (c.elements >= 2) e["cycles_per_element"] = sim::to_string(sim::measure_throughput(trace, name));
      counters[name] = e;
    }
    j["interfaces"] = counters;
    j["outputs"] = outputs;
    if (cfg.golden) j["golden"] = golden_json;
    out << j.dump(2) << "\n";
  } else {
    out << "cycles: " << trace.cycles << (trace.quiesced ? " (quiesced)" : "") << "\n";
    for (const auto& [name, c] : trace.counters) {
      out << "  " << name << ": " << c.elements << " elements";
      if (c.elements >= 2) out << ", " << sim::to_string(sim::measure_throughput(trace, name)) << " cycles/element";
      out << "\n";
    }
    for (const auto& o : outputs) out << "wrote " << o.get<std::string>() << "\n";
  }
  return golden_ok ? kExitOk : kExitFailed;
}

}  // namespace

int run_flow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::kValidate: return validate(cfg, out);
      case Command::kGenerate: return generate(cfg, out);
      case Command::kSimulate: return simulate(cfg, out, err);
      case Command::kReport: return report_cmd(cfg, out);
    }
  } catch (const emit::ElaborationError& e) {
    if (!e.violations().empty()) {
      print_violations(e.violations(), cfg.format, out);
      return kExitFailed;
    }
    err << "error: " << e.what() << "\n";
    for (const auto& l : e.lint()) err << "  " << rtl::format_lint(l) << "\n";
    return kExitUsage;
  } catch (const model::ParseError& e) {
    err << "error: " << cfg.spec_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace patternforge::tools
