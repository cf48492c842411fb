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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "flow.hpp"
#include "json.hpp"
#include "pnm.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace patternforge;
using namespace patternforge::tools;
using testkit::fixture_path;
using namespace std::string_literals;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pf_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const RunConfig& cfg) {
  std::ostringstream out, err;
  int code = run_flow(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command c, const std::string& fixture) {
  RunConfig cfg;
  cfg.command = c;
  cfg.spec_path = fixture_path(fixture);
  return cfg;
}

TEST(Pnm, ParsesGrayAndColor) {
  Image g = parse_pnm("P5\n2 1\n255\n\x01\x02"s);
  EXPECT_EQ(g.width, 2u);
  EXPECT_EQ(g.height, 1u);
  EXPECT_FALSE(g.color);
  EXPECT_EQ(g.pixels, (std::vector<std::uint64_t>{1, 2}));
  Image c = parse_pnm("P6\n1 1\n255\n\x10\x20\x30"s);
  EXPECT_TRUE(c.color);
  EXPECT_EQ(c.pixel_bits(), 24u);
  EXPECT_EQ(c.pixels, (std::vector<std::uint64_t>{0x302010}));
}

TEST(Pnm, HeaderComments) {
  Image g = parse_pnm("P5\n# made by hand\n1 2\n255\n\x07\x08"s);
  EXPECT_EQ(g.pixels, (std::vector<std::uint64_t>{7, 8}));
}

TEST(Pnm, RoundTrip) {
  Image img{3, 2, false, {0, 1, 2, 253, 254, 255}};
  EXPECT_EQ(parse_pnm(format_pnm(img)), img);
  EXPECT_EQ(format_pnm(img).rfind("P5\n3 2\n255\n", 0), 0u);
  Image rgb{1, 2, true, {0xABCDEF, 0x010203}};
  EXPECT_EQ(parse_pnm(format_pnm(rgb)), rgb);
}

TEST(Pnm, Rejects) {
  EXPECT_THROW(parse_pnm("P2\n1 1\n255\n0"), FormatError);
  EXPECT_THROW(parse_pnm("P5\n2 2\n255\n\x01"s), FormatError);
  EXPECT_THROW(parse_pnm("P5\n1 1\n65535\n\x01\x02"s), FormatError);
  EXPECT_THROW(parse_pnm(""), FormatError);
}

TEST(Raw, LittleEndianPacking) {
  EXPECT_EQ(format_raw({0x030201}, 24), "\x01\x02\x03"s);
  EXPECT_EQ(parse_raw("\x01\x02\x03\x04\x05\x06"s, 24), (std::vector<std::uint64_t>{0x030201, 0x060504}));
  EXPECT_EQ(format_raw({5, 6}, 8), "\x05\x06"s);
  EXPECT_EQ(format_raw({0x1FF}, 9), "\xFF\x01"s);
  EXPECT_THROW(parse_raw("\x01\x02"s, 24), FormatError);
}

TEST(Cli, ValidateFixture) {
  Result r = run(config(Command::kValidate, "copy_fifo.json"));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("0 violations", 0), 0u);
}

TEST(Cli, ValidateReportsViolations) {
  TempDir tmp;
  auto spec = testkit::load_fixture("copy_fifo.json");
  spec.bindings.erase("rbuffer");
  spec.iterators[1].used_ops.insert(model::IteratorOp::kDec);
  write_file(tmp / "bad.json", model::serialize_system_spec(spec));
  RunConfig cfg;
  cfg.command = Command::kValidate;
  cfg.spec_path = tmp / "bad.json";
  Result r = run(cfg);
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_TRUE(r.out.ends_with("\n2 violations\n")) << r.out;
  EXPECT_NE(r.out.find("unbound_container [rbuffer]"), std::string::npos);
  cfg.format = Format::kJson;
  r = run(cfg);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 2u);
}

TEST(Cli, MissingSpecIsUsageError) {
  RunConfig cfg;
  cfg.command = Command::kValidate;
  cfg.spec_path = "/nonexistent/spec.json";
  EXPECT_EQ(run(cfg).code, kExitUsage);
}

TEST(Cli, GenerateWritesVerilogAndReport) {
  TempDir tmp;
  RunConfig cfg = config(Command::kGenerate, "copy_sram.json");
  cfg.out_dir = tmp.str();
  ASSERT_EQ(run(cfg).code, kExitOk);
  std::string v = read_file(tmp / "system_top.v");
  EXPECT_NE(v.find("module system_top ("), std::string::npos);
  EXPECT_NE(v.find("// source: copy_sram.json"), std::string::npos);
  EXPECT_NE(read_file(tmp / "system_top_resources.txt").find("total"), std::string::npos);
  cfg.format = Format::kJson;
  ASSERT_EQ(run(cfg).code, kExitOk);
  auto j = nlohmann::json::parse(read_file(tmp / "system_top_resources.json"));
  EXPECT_TRUE(j.contains("totals"));
}

TEST(Cli, GenerateIsByteStable) {
  TempDir a, b;
  for (const char* f : {"copy_fifo.json", "blur.json"}) {
    RunConfig cfg = config(Command::kGenerate, f);
    cfg.out_dir = a.str();
    ASSERT_EQ(run(cfg).code, kExitOk);
    cfg.out_dir = b.str();
    ASSERT_EQ(run(cfg).code, kExitOk);
    EXPECT_EQ(read_file(a / "system_top.v"), read_file(b / "system_top.v")) << f;
  }
}

TEST(Cli, SimulateStreamWithGolden) {
  TempDir tmp;
  auto data = testkit::random_elements(200, 24, 8);
  write_file(tmp / "in.bin", format_raw(data, 24));
  RunConfig cfg = config(Command::kSimulate, "copy_sram_rgb.json");
  cfg.out_dir = tmp.str();
  cfg.stimulus["rbuffer"] = tmp / "in.bin";
  cfg.golden = true;
  cfg.stall_permille = 200;
  cfg.seed = 3;
  cfg.waves_path = tmp / "waves.csv";
  Result r = run(cfg);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("golden copy: match"), std::string::npos) << r.out;
  EXPECT_EQ(parse_raw(read_file(tmp / "wbuffer.bin"), 24), data);
  std::string waves = read_file(tmp / "waves.csv");
  EXPECT_NE(waves.substr(0, waves.find('\n')).find("rbuffer_p_push"), std::string::npos);
}

TEST(Cli, SimulateImageThroughBlur) {
  TempDir tmp;
  Image img{64, 64, false, testkit::random_elements(64 * 64, 8, 2)};
  write_file(tmp / "in.pgm", format_pnm(img));
  RunConfig cfg = config(Command::kSimulate, "blur.json");
  cfg.out_dir = tmp.str();
  cfg.images["rows"] = tmp / "in.pgm";
  cfg.golden = true;
  cfg.format = Format::kJson;
  Result r = run(cfg);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["golden"][0]["match"], true);
  EXPECT_EQ(j["interfaces"]["rows"]["cycles_per_element"], "1");
  Image out = parse_pnm(read_file(tmp / "pixels.pgm"));
  EXPECT_EQ(out.width, 62u);
  EXPECT_EQ(out.height, 62u);
}

TEST(Cli, SimulateUsageErrors) {
  TempDir tmp;
  RunConfig cfg = config(Command::kSimulate, "copy_fifo.json");
  cfg.out_dir = tmp.str();
  EXPECT_EQ(run(cfg).code, kExitUsage);  // no stimulus for the producer
  write_file(tmp / "in.bin", "abc");
  cfg.stimulus["wbuffer"] = tmp / "in.bin";
  EXPECT_EQ(run(cfg).code, kExitUsage);  // consumer named as producer
  cfg.stimulus = {{"rbuffer", tmp / "in.bin"}};
  cfg.stall_permille = 1000;
  EXPECT_EQ(run(cfg).code, kExitUsage);
  cfg.stall_permille = 0;
  Image wrong{8, 8, false, std::vector<std::uint64_t>(64, 1)};
  write_file(tmp / "small.pgm", format_pnm(wrong));
  RunConfig blur = config(Command::kSimulate, "blur.json");
  blur.out_dir = tmp.str();
  blur.images["rows"] = tmp / "small.pgm";
  EXPECT_EQ(run(blur).code, kExitUsage);  // wrong dimensions
}

TEST(Cli, ReportCommand) {
  Result r = run(config(Command::kReport, "copy_fifo.json"));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("copy"), std::string::npos);
  RunConfig cfg = config(Command::kReport, "copy_fifo.json");
  cfg.format = Format::kJson;
  r = run(cfg);
  EXPECT_EQ(nlohmann::json::parse(r.out)["totals"]["register_bits"], 9);
}

}  // namespace
