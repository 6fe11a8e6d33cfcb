#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "kresling/errors.hpp"
#include "kresling/geometry.hpp"
#include "kresling_cli/commands.hpp"
#include "kresling_cli/config.hpp"
#include "kresling_cli/output.hpp"
#include "kresling_cli/svg.hpp"

namespace kresling::cli {
namespace {

namespace fs = std::filesystem;

std::string file_of(const CommandResult& r, const std::string& name) {
  for (const OutputFile& f : r.files) {
    if (f.name == name) return f.content;
  }
  ADD_FAILURE() << "missing output " << name;
  return {};
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("kresling_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(KRESLING_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, DefaultsMatchReferenceModule) {
  const RunConfig c = default_config();
  ASSERT_EQ(c.segments.size(), 2u);
  EXPECT_EQ(c.segments[0], (KreslingDesign{8, 30.0, 0.8, 15.0}));
  EXPECT_EQ(c.segments[1], (KreslingDesign{8, 30.0, 0.6, 5.0}));
  EXPECT_EQ(c.pipe_radius_mm, 47.5);
  EXPECT_EQ(c.sweep.lambdas.size(), 10u);
  EXPECT_EQ(c.sweep.lambdas.front(), 0.55);
  EXPECT_EQ(c.sweep.lambdas.back(), 1.0);
}

TEST(Config, ParsesOverrides) {
  const RunConfig c = parse_config(R"({
    "segments": [{"n_sides": 6, "side_length": 20, "angle_ratio": 0.9, "contracted_length": 4},
                 {"angle_ratio": 0.7}],
    "pipe_radius_mm": 50, "cycles": 3, "rate_mm_per_s": 2.5,
    "operating_range_mm": [30, 80],
    "sweep": {"start": 0.6, "stop": 0.9, "step": 0.1}
  })");
  EXPECT_EQ(c.segments[0], (KreslingDesign{6, 20.0, 0.9, 4.0}));
  EXPECT_EQ(c.segments[1], (KreslingDesign{8, 30.0, 0.7, 15.0}));
  EXPECT_EQ(c.cycles, 3);
  EXPECT_EQ(c.rate_mm_per_s, 2.5);
  ASSERT_TRUE(c.operating_range_mm.has_value());
  EXPECT_EQ(c.operating_range_mm->hi, 80.0);
  EXPECT_EQ(c.sweep.lambdas, (std::vector<double>{0.6, 0.7, 0.8, 0.9}));
}

TEST(Config, RejectsWithFieldNames) {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const InvalidArgument& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"pipe_radius": 47.5})").find("pipe_radius"), std::string::npos);
  EXPECT_NE(message(R"({"segments": [{"sides": 8}]})").find("segments[0].sides"), std::string::npos);
  EXPECT_NE(message(R"({"segments": [{"angle_ratio": 1.5}]})").find("angle_ratio"), std::string::npos);
  EXPECT_NE(message(R"({"cycles": 0})").find("cycles"), std::string::npos);
  EXPECT_NE(message(R"({"cycles": 1.5})").find("cycles"), std::string::npos);
  EXPECT_NE(message(R"({"rate_mm_per_s": "fast"})").find("rate_mm_per_s"), std::string::npos);
  EXPECT_NE(message(R"({"sweep": {"lambdas": [0.4]}})").find("sweep"), std::string::npos);
  EXPECT_NE(message("{not json").find("JSON"), std::string::npos);
  EXPECT_NE(message("[]").find("object"), std::string::npos);
}

TEST(Config, ShippedConfigsLoad) {
  const std::string dir = KRESLING_CONFIG_DIR;
  const RunConfig ref = load_config(dir + "/reference.json");
  EXPECT_EQ(ref.segments, default_config().segments);
  EXPECT_EQ(ref.cycles, 5);
  const RunConfig sweep = load_config(dir + "/sweep_equal_l0.json");
  EXPECT_EQ(sweep.segments[1].contracted_length, 15.0);
  EXPECT_EQ(sweep.sweep.lambdas.size(), 10u);
}

TEST(Output, ShortestRoundTripNumbers) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(15.0), "15");
  for (double x : {1.0 / 3.0, 62.54936382587299, 1e-300, -7.25e12}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
}

TEST(Output, AtomicWriteLeavesNoTemporaries) {
  const fs::path dir = scratch_dir("atomic");
  write_atomically(dir, {{"a.txt", "alpha"}, {"b.txt", "beta"}});
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++count;
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
  }
  EXPECT_EQ(count, 2u);
  std::ifstream in(dir / "b.txt");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "beta");
  fs::remove_all(dir);
}

TEST(Commands, DesignReportsExtendedLength) {
  const CommandResult r = run_command("design", default_config());
  const auto doc = nlohmann::json::parse(r.report);
  EXPECT_NEAR(doc["segments"][0]["l_extended"].get<double>(), 62.55, 0.01);
  EXPECT_NEAR(doc["segments"][1]["l_extended"].get<double>(), 36.75, 0.01);
  EXPECT_EQ(doc["segments"][0]["l_contracted"].get<double>(), 15.0);
}

TEST(Commands, EnergyCsvColumns) {
  RunConfig c = default_config();
  c.energy_samples = 50;
  const CommandResult r = run_command("energy", c);
  const std::string csv = file_of(r, "energy_seg1.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "l_mm,alpha_rad,strain,energy,force");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  EXPECT_NE(file_of(r, "energy.svg").find("<polyline"), std::string::npos);
}

TEST(Commands, PathAndCycleOutputs) {
  const RunConfig c = default_config();
  const CommandResult p = run_command("path", c);
  const std::string stretch = file_of(p, "path_stretch.csv");
  EXPECT_EQ(stretch.substr(0, stretch.find('\n')), "lt_mm,l1_mm,l2_mm,Et,jump_flag");
  EXPECT_EQ(std::count(stretch.begin(), stretch.end(), '\n'), 1002);
  EXPECT_NE(stretch.find(",1\n"), std::string::npos);
  const std::string grid = file_of(p, "landscape.csv");
  EXPECT_EQ(grid.substr(0, grid.find('\n')), "l1_mm,l2_mm,Et");

  const CommandResult cy = run_command("cycle", c);
  const auto doc = nlohmann::json::parse(file_of(cy, "cycle.json"));
  EXPECT_EQ(doc["classification"], "Valid");
  EXPECT_EQ(doc["phases"].size(), 4u);
  EXPECT_TRUE(doc["landmarks"].contains("d*"));
  EXPECT_TRUE(doc["cutoff_I_mm"].is_number());
}

TEST(Commands, GaitTraceAndSummary) {
  RunConfig c = default_config();
  c.cycles = 2;
  const CommandResult r = run_command("gait", c);
  const std::string trace = file_of(r, "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')),
            "step,time_s,lt_mm,l1_mm,l2_mm,x_tail_mm,x_head_mm,anchor,phase");
  const auto doc = nlohmann::json::parse(file_of(r, "gait.json"));
  EXPECT_GT(doc["gait_length_mm"].get<double>(), 0.0);
  EXPECT_EQ(doc["cycle_displacements_mm"].size(), 2u);
  EXPECT_EQ(doc["experimental_gait_mm"].get<double>(), 22.0);
  const std::string anchor = file_of(r, "anchor_tail.csv");
  EXPECT_EQ(anchor.substr(0, anchor.find('\n')), "l_mm,Ra_mm,anchored");
}

TEST(Commands, GaitUnavailableForBrokenCycle) {
  RunConfig c = default_config();
  c.segments[1] = c.segments[0];
  EXPECT_THROW(run_command("gait", c), UnavailableError);
}

TEST(Commands, SweepUpperTriangle) {
  RunConfig c = default_config();
  c.sweep.lambdas = {0.6, 0.7, 0.8, 0.9};
  const CommandResult r = run_command("sweep", c, {2});
  std::istringstream in(file_of(r, "sweep.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "lambda1,lambda2,class,gait_mm");
  int cells = 0;
  while (std::getline(in, line)) {
    ++cells;
    double l1 = 0, l2 = 0;
    char cls[32] = {};
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%31[^,]", &l1, &l2, cls), 3);
    EXPECT_GE(l1, l2);
    if (l1 == l2) EXPECT_STRNE(cls, "Valid") << line;
  }
  EXPECT_EQ(cells, 10);
  EXPECT_NE(file_of(r, "sweep.svg").find("<rect"), std::string::npos);
}

TEST(Commands, PatternMountainLengthMeasuredFromSvg) {
  RunConfig c = default_config();
  const CommandResult r = run_command("pattern", c);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string svg = file_of(r, "pattern_seg" + std::to_string(i + 1) + ".svg");
    const double bg = derive_geometry(c.segments[i]).mountain;
    const std::regex line(
        R"re(<line class="mountain"[^>]*x1="([^"]+)" y1="([^"]+)" x2="([^"]+)" y2="([^"]+)")re");
    int mountains = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line); it != std::sregex_iterator(); ++it) {
      const double dx = std::stod((*it)[3]) - std::stod((*it)[1]);
      const double dy = std::stod((*it)[4]) - std::stod((*it)[2]);
      EXPECT_NEAR(std::hypot(dx, dy), bg, 1e-6);
      ++mountains;
    }
    EXPECT_EQ(mountains, 8);
    EXPECT_NE(svg.find("class=\"valley\" stroke=\"#1f77b4\" stroke-dasharray"), std::string::npos);
  }
}

TEST(Commands, ByteDeterministic) {
  RunConfig c = default_config();
  c.sweep.lambdas = {0.7, 0.8};
  for (const char* name : {"energy", "path", "gait", "sweep", "pattern"}) {
    const CommandResult a = run_command(name, c, {1});
    const CommandResult b = run_command(name, c, {2});
    ASSERT_EQ(a.files.size(), b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
      EXPECT_EQ(a.files[k].content, b.files[k].content) << name << " " << a.files[k].name;
    }
  }
}

TEST(Binary, ExitCodesAndNoPartialOutput) {
  const fs::path dir = scratch_dir("bin");
  const fs::path cfg = dir / "bad.json";
  std::ofstream(cfg) << R"({"segments": [{"angle_ratio": 2.0}, {}]})";
  const fs::path out = dir / "out";
  EXPECT_EQ(run_binary("path --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));

  const fs::path same = dir / "same.json";
  std::ofstream(same) << R"({"segments": [{"angle_ratio": 0.9}, {"angle_ratio": 0.9}]})";
  EXPECT_EQ(run_binary("gait --config " + same.string() + " --out " + out.string()), 4);
  EXPECT_FALSE(fs::exists(out / "trace.csv"));

  EXPECT_EQ(run_binary("pattern --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "pattern_seg1.svg"));
  EXPECT_EQ(run_binary("cycle --out " + out.string() + " --delta-lt 0.2"), 0);
  EXPECT_TRUE(fs::exists(out / "cycle.json"));
  EXPECT_NE(run_binary("fly --out " + out.string()), 0);
  EXPECT_NE(run_binary("path"), 0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace kresling::cli
