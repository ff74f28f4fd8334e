// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "freqsplat/config.hpp"
#include "freqsplat/image_io.hpp"
#include "freqsplat/plot.hpp"
#include "freqsplat/procedural.hpp"
#include "freqsplat/projection.hpp"
#include "freqsplat/tools/cli.hpp"
#include "freqsplat/tools/csv.hpp"
#include "support.hpp"

namespace freqsplat {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "freqsplat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation inv;
  inv.code = tools::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  inv.out = out.str();
  inv.err = err.str();
  return inv;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

TEST(Config, RoundTripsEveryKey) {
  RunConfig cfg;
  cfg.seed = 77;
  cfg.input = "some/image.png";
  cfg.trainer.scale_space.gamma = 2.5;
  cfg.trainer.thresholds.tau_split = 0.65;
  cfg.trainer.mode = DensifyMode::Baseline;
  cfg.trainer.lr.position = 0.123456789012345;
  cfg.trainer.use_eta_proj = true;
  cfg.project_eta_samples = 9;
  std::stringstream text;
  write_config(text, cfg);
  const RunConfig back = parse_config(text);
  std::stringstream again;
  write_config(again, back);
  EXPECT_EQ(text.str(), again.str());
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.trainer.lr.position, cfg.trainer.lr.position);
  EXPECT_EQ(back.trainer.mode, DensifyMode::Baseline);
  for (const std::string& key : RunConfig::keys()) EXPECT_NE(text.str().find(key + " = "), std::string::npos) << key;
}

TEST(Config, CommentsDefaultsAndErrors) {
  std::istringstream ok("# comment\n\nscale_space.gamma = 2   # trailing\nsplit.p=0.75\n");
  const RunConfig cfg = parse_config(ok);
  EXPECT_EQ(cfg.trainer.scale_space.gamma, 2.0);
  EXPECT_EQ(cfg.trainer.split_p, 0.75);
  EXPECT_EQ(cfg.trainer.iterations, TrainerConfig{}.iterations);

  std::istringstream unknown("scale_space.gama = 2\n");
  try {
    parse_config(unknown);
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("scale_space.gama"), std::string::npos);
  }
  std::istringstream bad_value("trainer.iterations = many\n");
  EXPECT_THROW(parse_config(bad_value), ConfigError);
  std::istringstream no_equals("trainer.iterations 5\n");
  EXPECT_THROW(parse_config(no_equals), ConfigError);

  RunConfig invalid;
  invalid.trainer.densify_interval = invalid.trainer.iterations + 1;
  EXPECT_THROW(invalid.validate(), std::exception);
  EXPECT_THROW(load_config("/nonexistent/config.txt"), std::exception);
}

TEST(Csv, ReadsAndRejectsRaggedRows) {
  const fs::path dir = testing::scratch_dir("csv");
  write_text(dir / "a.csv", "x,y\n1,2\n3,4\n");
  const tools::CsvTable t = tools::read_csv(dir / "a.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "3");
  EXPECT_EQ(t.column("y"), 1u);
  EXPECT_THROW(t.column("z"), std::runtime_error);
  write_text(dir / "b.csv", "x,y\n1\n");
  EXPECT_THROW(tools::read_csv(dir / "b.csv"), std::runtime_error);
  write_text(dir / "c.csv", "");
  EXPECT_THROW(tools::read_csv(dir / "c.csv"), std::runtime_error);
  try {
    tools::read_csv(dir / "missing.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
}

TEST(Plot, SeriesUsePaletteColors) {
  auto has_color = [](const ImageBuffer& img, double r, double g, double b) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (std::abs(img.at(x, y, 0) - r) < 1e-9 && std::abs(img.at(x, y, 1) - g) < 1e-9 &&
            std::abs(img.at(x, y, 2) - b) < 1e-9) {
          return true;
        }
      }
    }
    return false;
  };
  const Series a{"structure", {0, 1, 2, 3}, {10, 20, 25, 27}};
  const Series b{"baseline", {0, 1, 2, 3}, {10, 15, 18, 20}};
  const ImageBuffer one = plot_lines({a}, {320, 200, "t", "x", "y"});
  EXPECT_EQ(one.width(), 320);
  EXPECT_EQ(one.channels(), 3);
  EXPECT_TRUE(has_color(one, 0.86, 0.24, 0.18));
  EXPECT_FALSE(has_color(one, 0.16, 0.42, 0.80));
  const ImageBuffer two = plot_lines({a, b}, {320, 200, "t", "x", "y"});
  EXPECT_TRUE(has_color(two, 0.86, 0.24, 0.18));
  EXPECT_TRUE(has_color(two, 0.16, 0.42, 0.80));
  EXPECT_NO_THROW(plot_lines({}, {}));
  EXPECT_GT(text_width("abc"), text_width("a"));
}

TEST(Dispatch, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, tools::kUsage);
  const Invocation unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, tools::kUsage);
  EXPECT_NE(unknown.err.find("analyze"), std::string::npos);
  EXPECT_EQ(run({"analyze", "--bogus"}).code, tools::kUsage);
  EXPECT_EQ(run({"train2d", "--mode", "fast"}).code, tools::kUsage);
  EXPECT_EQ(run({"--help"}).code, tools::kSuccess);
}

TEST(Dispatch, MissingInputExitsTwoWithPath) {
  const fs::path dir = testing::scratch_dir("missing");
  const std::string path = (dir / "nope.png").string();
  const Invocation inv = run({"analyze", path, "--out", (dir / "out").string()});
  EXPECT_EQ(inv.code, tools::kFailure);
  EXPECT_NE(inv.err.find(path), std::string::npos);
  const Invocation train = run({"train2d", "--target", path, "--out", (dir / "t").string()});
  EXPECT_EQ(train.code, tools::kFailure);
  EXPECT_NE(train.err.find(path), std::string::npos);
  const Invocation cfg = run({"--config", (dir / "none.txt").string(), "analyze", path});
  EXPECT_EQ(cfg.code, tools::kFailure);
}

TEST(Dispatch, AnalyzeWritesOutputs) {
  const fs::path dir = testing::scratch_dir("analyze");
  write_png(dir / "in.png", make_procedural_target(48, 40));
  const Invocation inv = run({"analyze", (dir / "in.png").string(), "--out", (dir / "out").string()});
  ASSERT_EQ(inv.code, 0) << inv.err;
  for (const char* name : {"sxx.pfm", "sxy.pfm", "syy.pfm", "lambda1.png", "ellipses.png", "config.txt"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  }
  const ImageBuffer sxx = read_image(dir / "out" / "sxx.pfm");
  EXPECT_EQ(sxx.width(), 48);
  EXPECT_EQ(sxx.height(), 40);
  // The dumped config reproduces the run.
  const RunConfig dumped = load_config(dir / "out" / "config.txt");
  EXPECT_EQ(dumped.input, (dir / "in.png").string());
}

TEST(Dispatch, PerturbBatteryAndSingle) {
  const fs::path dir = testing::scratch_dir("perturb");
  write_png(dir / "in.png", make_procedural_target(40, 40));
  const Invocation battery = run({"perturb", (dir / "in.png").string(), "--out", (dir / "b").string()});
  ASSERT_EQ(battery.code, 0) << battery.err;
  const tools::CsvTable rows = tools::read_csv(dir / "b" / "robustness.csv");
  EXPECT_EQ(rows.rows.size(), 6u);
  const Invocation single = run({"perturb", (dir / "in.png").string(), "--kind", "sharpen", "--param", "2",
                                 "--out", (dir / "s").string()});
  ASSERT_EQ(single.code, 0) << single.err;
  EXPECT_TRUE(fs::exists(dir / "s" / "perturbed.pfm"));
  EXPECT_EQ(tools::read_csv(dir / "s" / "robustness.csv").rows.size(), 1u);
}

TEST(Dispatch, ProjectWritesFootprintsAndDecisions) {
  const fs::path dir = testing::scratch_dir("project");
  Gaussian3D g;
  g.mu = {0, 0, 5};
  g.scale = {0.5, 0.2, 0.1};
  g.id = 3;
  Camera cam;
  cam.fx = cam.fy = 50;
  cam.cx = 32;
  cam.cy = 32;
  cam.width = cam.height = 64;
  {
    std::ofstream gs(dir / "g.txt");
    write_gaussians(gs, {g});
    std::ofstream cs(dir / "c.txt");
    Camera second = cam;
    second.id = 1;
    write_cameras(cs, {cam, second});
  }
  write_png(dir / "img.png", make_procedural_target(64, 64));
  const Invocation inv = run({"--seed", "4", "project", "--gaussians", (dir / "g.txt").string(), "--cameras",
                              (dir / "c.txt").string(), "--image", (dir / "img.png").string(), "--out",
                              (dir / "out").string()});
  ASSERT_EQ(inv.code, 0) << inv.err;
  EXPECT_EQ(tools::read_csv(dir / "out" / "projected.csv").rows.size(), 2u);
  EXPECT_EQ(tools::read_csv(dir / "out" / "eta.csv").rows.size(), 2u);
  const tools::CsvTable dec = tools::read_csv(dir / "out" / "decisions.csv");
  ASSERT_EQ(dec.rows.size(), 1u);
  EXPECT_EQ(dec.rows[0][dec.column("decision")], "keep");  // two views are below min_obs
  EXPECT_EQ(run({"project", "--gaussians", (dir / "g.txt").string()}).code, tools::kFailure);
}

TEST(Dispatch, TrainIsDeterministicAndReportMerges) {
  const fs::path dir = testing::scratch_dir("train");
  write_png(dir / "t.png", make_procedural_target(40, 40));
  write_text(dir / "small.txt", "trainer.iterations = 60\ntrainer.densify_interval = 20\ntrainer.init_grid = 8\n");
  auto train = [&](const std::string& mode, const std::string& out) {
    return run({"--config", (dir / "small.txt").string(), "--seed", "7", "train2d", "--target",
                (dir / "t.png").string(), "--mode", mode, "--out", (dir / "runs" / out).string()});
  };
  const Invocation a = train("structure", "structure");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(train("structure", "repeat").code, 0);
  for (const char* name : {"train_report.csv", "split_events.csv"}) {
    EXPECT_EQ(slurp(dir / "runs" / "structure" / name), slurp(dir / "runs" / "repeat" / name)) << name;
  }
  for (const char* name : {"final.png", "psnr_curve.png", "timing.csv", "config.txt"}) {
    EXPECT_TRUE(fs::exists(dir / "runs" / "structure" / name)) << name;
  }
  fs::remove_all(dir / "runs" / "repeat");

  const Invocation one = run({"report", (dir / "runs").string(), "--out", (dir / "one").string()});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_TRUE(fs::exists(dir / "one" / "psnr_vs_iteration.png"));
  const tools::CsvTable single = tools::read_csv(dir / "one" / "comparison.csv");
  EXPECT_EQ(single.rows.size(), 61u);

  ASSERT_EQ(train("baseline", "baseline").code, 0);
  const Invocation two = run({"report", (dir / "runs").string(), "--out", (dir / "two").string()});
  ASSERT_EQ(two.code, 0) << two.err;
  const tools::CsvTable both = tools::read_csv(dir / "two" / "comparison.csv");
  EXPECT_EQ(both.rows.size(), 122u);
  EXPECT_EQ(both.rows.front()[0], "baseline");
  EXPECT_EQ(both.rows.back()[0], "structure");
  EXPECT_NE(two.out.find("structure:"), std::string::npos);
  EXPECT_NE(two.out.find("baseline:"), std::string::npos);

  fs::create_directories(dir / "empty");
  const Invocation empty = run({"report", (dir / "empty").string()});
  EXPECT_EQ(empty.code, tools::kFailure);

  fs::create_directories(dir / "broken" / "r");
  write_text(dir / "broken" / "r" / "train_report.csv", "iteration,psnr\n0,1\n");
  EXPECT_EQ(run({"report", (dir / "broken").string()}).code, tools::kFailure);
}

TEST(Dispatch, SetOverridesConfigKeys) {
  const fs::path dir = testing::scratch_dir("set");
  write_png(dir / "in.png", make_procedural_target(32, 32));
  const Invocation inv = run({"--set", "scale_space.gamma=2", "--set", "analyze.ellipse_stride=4", "analyze",
                              (dir / "in.png").string(), "--out", (dir / "out").string()});
  ASSERT_EQ(inv.code, 0) << inv.err;
  const RunConfig dumped = load_config(dir / "out" / "config.txt");
  EXPECT_EQ(dumped.trainer.scale_space.gamma, 2.0);
  EXPECT_EQ(dumped.ellipse_stride, 4);
  EXPECT_EQ(run({"--set", "nope=1", "analyze", (dir / "in.png").string()}).code, tools::kFailure);
}

}  // namespace
}  // namespace freqsplat
