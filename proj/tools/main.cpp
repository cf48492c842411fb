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

#include <iostream>

#include "CLI11.hpp"
#include "flow.hpp"

namespace {

using patternforge::tools::Command;
using patternforge::tools::Format;
using patternforge::tools::RunConfig;

// Parses "name=path" pairs.
bool split_bindings(const std::vector<std::string>& items, std::map<std::string, std::string>& out,
                    const char* flag) {
  for (const std::string& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      std::cerr << "error: " << flag << " expects <name>=<file>, got '" << item << "'\n";
      return false;
    }
    if (!out.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      std::cerr << "error: " << flag << " binds '" << item.substr(0, eq) << "' twice\n";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patternforge: iterator-pattern hardware generator"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::vector<std::string> stimulus, images;
  std::string waves;
  std::string format = "text";

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "system description (JSON)")->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "check a system description");
  add_spec(validate);
  add_format(validate);

  CLI::App* generate = app.add_subcommand("generate", "write Verilog and a resource report");
  add_spec(generate);
  generate->add_option("--out", cfg.out_dir, "output directory");
  add_format(generate);

  CLI::App* simulate = app.add_subcommand("simulate", "simulate the generated design");
  add_spec(simulate);
  simulate->add_option("--out", cfg.out_dir, "output directory");
  simulate->add_option("--stimulus", stimulus, "<interface>=<raw stream file>");
  simulate->add_option("--image", images, "<interface>=<PGM/PPM file>");
  simulate->add_flag("--golden", cfg.golden, "compare outputs with the software reference");
  simulate->add_option("--seed", cfg.seed, "stall pattern seed");
  simulate->add_option("--max-cycles", cfg.max_cycles, "cycle limit")->check(CLI::PositiveNumber);
  simulate->add_option("--stall-permille", cfg.stall_permille, "stall probability of every producer/consumer")
      ->check(CLI::Range(0, 999));
  simulate->add_option("--waves", waves, "CSV waveform file");
  add_format(simulate);

  CLI::App* report = app.add_subcommand("report", "print the resource report");
  add_spec(report);
  add_format(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : patternforge::tools::kExitUsage;
  }

  if (validate->parsed()) cfg.command = Command::kValidate;
  if (generate->parsed()) cfg.command = Command::kGenerate;
  if (simulate->parsed()) cfg.command = Command::kSimulate;
  if (report->parsed()) cfg.command = Command::kReport;
  cfg.format = format == "json" ? Format::kJson : Format::kText;
  if (!waves.empty()) cfg.waves_path = waves;
  if (!split_bindings(stimulus, cfg.stimulus, "--stimulus") || !split_bindings(images, cfg.images, "--image")) {
    return patternforge::tools::kExitUsage;
  }
  return patternforge::tools::run_flow(cfg, std::cout, std::cerr);
}
