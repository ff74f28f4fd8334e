// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/tools/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freqsplat/config.hpp"
#include "freqsplat/consistency.hpp"
#include "freqsplat/densify.hpp"
#include "freqsplat/frequency_metric.hpp"
#include "freqsplat/image_io.hpp"
#include "freqsplat/parallel.hpp"
#include "freqsplat/plot.hpp"
#include "freqsplat/procedural.hpp"
#include "freqsplat/projection.hpp"
#include "freqsplat/rng.hpp"
#include "freqsplat/robustness.hpp"
#include "freqsplat/structure.hpp"
#include "freqsplat/text.hpp"
#include "freqsplat/tools/csv.hpp"
#include "freqsplat/trainer2d.hpp"

namespace freqsplat::tools {
namespace fs = std::filesystem;

namespace {

constexpr const char* kReportName = "train_report.csv";
constexpr const char* kTimingName = "timing.csv";
constexpr const char* kConfigName = "config.txt";

std::string fmt(double v) {
  return format_double(v);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Options shared by every subcommand.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::vector<std::string> overrides;
  int threads = 0;
};

struct AnalyzeOptions {
  std::string image;
  std::string out;
};

struct PerturbOptions {
  std::string image;
  std::string out;
  std::string kind;
  std::optional<double> parameter;
};

struct ProjectOptions {
  std::string gaussians;
  std::string cameras;
  std::string image;
  std::string out;
};

struct TrainOptions {
  std::string target;
  std::string mode;
  std::string out;
  bool procedural = false;
};

struct ReportOptions {
  std::string run_dir;
  std::string out;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  for (const std::string& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

fs::path prepare_output(RunConfig& cfg, const std::string& out_flag) {
  if (!out_flag.empty()) cfg.output_dir = out_flag;
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  return dir;
}

std::string pick_input(const std::string& flag, RunConfig& cfg, const char* what) {
  if (!flag.empty()) cfg.input = flag;
  if (cfg.input.empty()) throw ConfigError(std::string("no ") + what + " given (argument or run.input)");
  return cfg.input;
}

void finalize(RunConfig& cfg, const fs::path& dir) {
  cfg.trainer.seed = cfg.seed;
  cfg.validate();
  save_config(dir / kConfigName, cfg);
}

// ---------------------------------------------------------------- analyze

void run_analyze(RunConfig cfg, const AnalyzeOptions& opt, std::ostream& out) {
  const std::string input = pick_input(opt.image, cfg, "image");
  const fs::path dir = prepare_output(cfg, opt.out);
  finalize(cfg, dir);

  const ImageBuffer img = read_image(input);
  const TensorField field = analyze_structure(img, cfg.trainer.scale_space);
  write_pfm(dir / "sxx.pfm", field.plane(0));
  write_pfm(dir / "sxy.pfm", field.plane(1));
  write_pfm(dir / "syy.pfm", field.plane(2));
  const ImageBuffer l1 = lambda1_map(field);
  write_pfm(dir / "lambda1.pfm", l1);
  write_png(dir / "lambda1.png", heatmap(l1));
  write_png(dir / "ellipses.png", ellipse_field(img, field, cfg.ellipse_stride));
  out << "analyzed " << input << " (" << img.width() << "x" << img.height() << ") -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------- perturb

void run_perturb(RunConfig cfg, const PerturbOptions& opt, std::ostream& out) {
  const std::string input = pick_input(opt.image, cfg, "image");
  if (!opt.kind.empty()) cfg.perturb_kind = opt.kind;
  if (opt.parameter) cfg.perturb_parameter = *opt.parameter;
  const fs::path dir = prepare_output(cfg, opt.out);
  finalize(cfg, dir);

  const ImageBuffer img = read_image(input);
  std::vector<RobustnessRow> rows;
  if (cfg.perturb_kind == "battery") {
    rows = robustness_suite(img, cfg.trainer.scale_space, cfg.seed);
  } else {
    const Perturbation p{parse_perturbation_kind(cfg.perturb_kind), cfg.perturb_parameter};
    validate_for_analysis(img);
    const ImageBuffer perturbed = perturb(img, p, cfg.seed);
    write_pfm(dir / "perturbed.pfm", perturbed);
    write_png(dir / "perturbed.png", perturbed);
    const double change = tensor_change(analyze_structure(img, cfg.trainer.scale_space),
                                        analyze_structure(perturbed, cfg.trainer.scale_space));
    rows.push_back({std::string(to_string(p.kind)), p.parameter, change});
  }
  auto csv = open_output(dir / "robustness.csv");
  write_robustness_csv(csv, rows);
  for (const RobustnessRow& r : rows) out << r.perturbation << ' ' << fmt(r.parameter) << ": " << fmt(r.change) << '\n';
}

// ---------------------------------------------------------------- project

template <typename T, typename Reader>
std::vector<T> read_list(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("file not found: " + path);
  try {
    return reader(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void run_project(RunConfig cfg, const ProjectOptions& opt, std::ostream& out) {
  if (!opt.gaussians.empty()) cfg.gaussians_path = opt.gaussians;
  if (!opt.cameras.empty()) cfg.cameras_path = opt.cameras;
  if (!opt.image.empty()) cfg.input = opt.image;
  if (cfg.gaussians_path.empty() || cfg.cameras_path.empty()) {
    throw ConfigError("project needs --gaussians and --cameras");
  }
  const fs::path dir = prepare_output(cfg, opt.out);
  finalize(cfg, dir);

  const auto gaussians = read_list<Gaussian3D>(cfg.gaussians_path, [](std::istream& s) { return read_gaussians(s); });
  const auto cameras = read_list<Camera>(cfg.cameras_path, [](std::istream& s) { return read_cameras(s); });

  std::optional<TensorField> field;
  if (!cfg.input.empty()) field = analyze_structure(read_image(cfg.input), cfg.trainer.scale_space);

  auto csv = open_output(dir / "projected.csv");
  csv << "gaussian_id,view_id,mu_u,mu_v,depth,axis_x_u,axis_x_v,axis_y_u,axis_y_v,axis_z_u,axis_z_v,in_frame\n";
  std::optional<std::ofstream> eta_csv;
  if (field) {
    eta_csv = open_output(dir / "eta.csv");
    *eta_csv << "gaussian_id,view_id,eta_x,eta_y,eta_z\n";
  }
  std::vector<ConsistencyStats> stats(gaussians.size());
  std::size_t visible = 0;
  for (std::size_t gi = 0; gi < gaussians.size(); ++gi) {
    const Gaussian3D& g = gaussians[gi];
    for (const Camera& cam : cameras) {
      const auto pg = project_gaussian(g, cam);
      if (!pg) continue;
      const bool inside = in_expanded_frame(*pg, cam.width, cam.height);
      csv << g.id << ',' << cam.id << ',' << fmt(pg->mu2d.x()) << ',' << fmt(pg->mu2d.y()) << ',' << fmt(pg->depth);
      for (const auto& a : pg->axes) csv << ',' << fmt(a.x()) << ',' << fmt(a.y());
      csv << ',' << (inside ? 1 : 0) << '\n';
      if (!inside) continue;
      ++visible;
      if (field) {
        const Tensor2 t = sample_footprint(*pg, *field, cfg.project_eta_samples,
                                           derive_seed(cfg.seed, g.id, cam.id, 0));
        const AxisVector e = eta(*pg, t, cfg.trainer.scale_space.epsilon);
        stats[gi] = record_observation(stats[gi], e, cfg.trainer.thresholds);
        *eta_csv << g.id << ',' << cam.id << ',' << fmt(e[0]) << ',' << fmt(e[1]) << ',' << fmt(e[2]) << '\n';
      }
    }
  }
  if (field) {
    auto dec = open_output(dir / "decisions.csv");
    dec << "gaussian_id,n_total,decision,n_x,n_y,n_z\n";
    for (std::size_t gi = 0; gi < gaussians.size(); ++gi) {
      const Decision d = decide(stats[gi], gaussians[gi].opacity, cfg.trainer.thresholds);
      const SplitPlan plan = d.kind == Decision::Kind::Split
                                 ? plan_split(d, cfg.trainer.split_p, cfg.trainer.split_kappa, cfg.trainer.split_cap)
                                 : SplitPlan{};
      dec << gaussians[gi].id << ',' << stats[gi].n_total << ',' << to_string(d.kind) << ',' << plan.n[0] << ','
          << plan.n[1] << ',' << plan.n[2] << '\n';
    }
  }
  out << "projected " << gaussians.size() << " Gaussians into " << cameras.size() << " views (" << visible
      << " visible footprints) -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------- train2d

void run_train(RunConfig cfg, const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  if (!opt.mode.empty()) cfg.trainer.mode = parse_densify_mode(opt.mode);
  if (opt.procedural) {
    if (!opt.target.empty()) throw ConfigError("--target and --procedural are mutually exclusive");
    cfg.input = "procedural";
  } else {
    pick_input(opt.target, cfg, "target");
  }
  const fs::path dir = prepare_output(cfg, opt.out);
  finalize(cfg, dir);

  const ImageBuffer target = cfg.input == "procedural" ? make_procedural_target(256, 256) : read_image(cfg.input);
  if (cfg.input == "procedural") write_png(dir / "target.png", target);

  const int every = std::max(1, cfg.trainer.iterations / 10);
  const TrainResult result = run_training(target, cfg.trainer, [&](const TrainRow& r) {
    if (r.iteration % every == 0) {
      err << "[" << to_string(cfg.trainer.mode) << "] iter " << r.iteration << " psnr " << r.psnr << " gaussians "
          << r.gaussians << '\n';
    }
  });

  {
    auto f = open_output(dir / kReportName);
    write_report_csv(f, result.report);
  }
  {
    auto f = open_output(dir / kTimingName);
    write_timing_csv(f, result.report);
  }
  {
    auto f = open_output(dir / "split_events.csv");
    write_split_events_csv(f, result.report.splits);
  }
  {
    auto f = open_output(dir / "eta.csv");
    write_eta_csv(f, result.population, result.last_eta);
  }
  {
    auto f = open_output(dir / "stats.csv");
    write_stats_csv(f, result.population, result.stats);
  }
  write_png(dir / "final.png", render2d(result.population, target.width(), target.height()));

  Series curve{std::string(to_string(cfg.trainer.mode)), {}, {}};
  for (const TrainRow& r : result.report.rows) {
    curve.x.push_back(r.iteration);
    curve.y.push_back(r.psnr);
  }
  write_png(dir / "psnr_curve.png", plot_lines({curve}, {640, 420, "PSNR", "iteration", "dB"}));
  out << to_string(cfg.trainer.mode) << ": final PSNR " << fmt(result.report.final_psnr()) << " dB with "
      << result.report.final_count() << " Gaussians -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------- report

struct RunData {
  std::string label;
  fs::path dir;
  CsvTable report;
  std::optional<CsvTable> timing;
};

const std::vector<std::string>& report_header() {
  static const std::vector<std::string> h = {"iteration", "loss", "psnr", "gaussians", "split_events", "prune_events"};
  return h;
}

RunData load_run(const fs::path& dir, std::string label) {
  RunData run{std::move(label), dir, read_csv(dir / kReportName), std::nullopt};
  if (run.report.header != report_header()) {
    throw std::runtime_error("inconsistent schema in " + (dir / kReportName).string());
  }
  if (fs::exists(dir / kTimingName)) {
    run.timing = read_csv(dir / kTimingName);
    if (run.timing->header != std::vector<std::string>{"iteration", "wall_time"} ||
        run.timing->rows.size() != run.report.rows.size()) {
      throw std::runtime_error("inconsistent schema in " + (dir / kTimingName).string());
    }
  }
  return run;
}

double to_double(const std::string& s, const fs::path& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("non-numeric value '" + s + "' in " + where.string());
  }
}

// Concatenates one CSV from every run under a leading `run` column.
void merge_csv(const std::vector<RunData>& runs, const std::string& name, const fs::path& dest) {
  std::optional<std::vector<std::string>> header;
  std::vector<std::pair<std::string, CsvTable>> tables;
  for (const RunData& r : runs) {
    if (!fs::exists(r.dir / name)) continue;
    CsvTable t = read_csv(r.dir / name);
    if (header && t.header != *header) throw std::runtime_error("inconsistent schema in " + (r.dir / name).string());
    header = t.header;
    tables.emplace_back(r.label, std::move(t));
  }
  if (!header) return;
  auto out = open_output(dest);
  out << "run";
  for (const auto& h : *header) out << ',' << h;
  out << '\n';
  for (const auto& [label, t] : tables) {
    for (const auto& row : t.rows) {
      out << label;
      for (const auto& c : row) out << ',' << c;
      out << '\n';
    }
  }
}

void run_report(RunConfig cfg, const ReportOptions& opt, std::ostream& out) {
  const fs::path root = opt.run_dir;
  if (!fs::is_directory(root)) throw std::runtime_error("run directory not found: " + root.string());

  std::vector<RunData> runs;
  if (fs::exists(root / kReportName)) runs.push_back(load_run(root, root.filename().string()));
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / kReportName)) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const fs::path& d : subdirs) runs.push_back(load_run(d, d.filename().string()));
  if (runs.empty()) throw std::runtime_error("no " + std::string(kReportName) + " found in " + root.string());

  const fs::path dir = prepare_output(cfg, opt.out.empty() ? root.string() : opt.out);
  finalize(cfg, dir);

  auto csv = open_output(dir / "comparison.csv");
  csv << "run,iteration,wall_time,loss,psnr,gaussians,split_events,prune_events\n";
  std::vector<Series> by_iter;
  std::vector<Series> by_time;
  for (const RunData& r : runs) {
    const fs::path where = r.dir / kReportName;
    Series si{r.label, {}, {}};
    Series st{r.label, {}, {}};
    for (std::size_t i = 0; i < r.report.rows.size(); ++i) {
      const auto& row = r.report.rows[i];
      const std::string wall = r.timing ? r.timing->rows[i][1] : "";
      if (r.timing && r.timing->rows[i][0] != row[0]) {
        throw std::runtime_error("iteration mismatch between " + where.string() + " and " + kTimingName);
      }
      csv << r.label << ',' << row[0] << ',' << wall << ',' << row[1] << ',' << row[2] << ',' << row[3] << ','
          << row[4] << ',' << row[5] << '\n';
      const double psnr_db = to_double(row[2], where);
      si.x.push_back(to_double(row[0], where));
      si.y.push_back(psnr_db);
      if (r.timing) {
        st.x.push_back(to_double(wall, r.dir / kTimingName));
        st.y.push_back(psnr_db);
      }
    }
    const auto& last = r.report.rows.empty() ? std::vector<std::string>{"-", "-", "-", "-", "-", "-"}
                                             : r.report.rows.back();
    out << r.label << ": iterations " << last[0] << ", final PSNR " << last[2] << " dB, Gaussians " << last[3]
        << '\n';
    by_iter.push_back(std::move(si));
    if (r.timing) by_time.push_back(std::move(st));
  }
  write_png(dir / "psnr_vs_iteration.png", plot_lines(by_iter, {720, 440, "PSNR vs iteration", "iteration", "dB"}));
  write_png(dir / "psnr_vs_walltime.png", plot_lines(by_time, {720, 440, "PSNR vs wall time", "seconds", "dB"}));
  merge_csv(runs, "split_events.csv", dir / "all_split_events.csv");
  merge_csv(runs, "eta.csv", dir / "all_eta.csv");
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-aware structure analysis and densification toolkit", "freqsplat"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed for every randomized path");
  app.add_option("--config", global.config_path, "key = value configuration file");
  app.add_option("--set", global.overrides, "Override one config key (key=value); repeatable");
  app.add_option("--threads", global.threads, "Worker threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);

  AnalyzeOptions analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Aggregated structure tensor of an image");
  cmd_analyze->add_option("image", analyze.image, "Input PNG or PFM");
  cmd_analyze->add_option("--out", analyze.out, "Output directory");

  PerturbOptions perturb_opt;
  auto* cmd_perturb = app.add_subcommand("perturb", "Structure-tensor change under image perturbations");
  cmd_perturb->add_option("image", perturb_opt.image, "Input PNG or PFM");
  cmd_perturb->add_option("--out", perturb_opt.out, "Output directory");
  cmd_perturb->add_option("--kind", perturb_opt.kind, "battery, contrast, noise, sharpen or jpeg_like");
  cmd_perturb->add_option("--param", perturb_opt.parameter, "Perturbation parameter");

  ProjectOptions project;
  auto* cmd_project = app.add_subcommand("project", "Project 3D Gaussians into cameras");
  cmd_project->add_option("--gaussians", project.gaussians, "Gaussian list");
  cmd_project->add_option("--cameras", project.cameras, "Camera list");
  cmd_project->add_option("--image", project.image, "Optional image for frequency-violation scores");
  cmd_project->add_option("--out", project.out, "Output directory");

  TrainOptions train;
  auto* cmd_train = app.add_subcommand("train2d", "Fit 2D Gaussians to a target image");
  cmd_train->add_option("--target", train.target, "Target PNG or PFM");
  cmd_train->add_flag("--procedural", train.procedural, "Use the built-in 256x256 multi-frequency target");
  cmd_train->add_option("--mode", train.mode, "structure or baseline")
      ->check(CLI::IsMember({"structure", "baseline"}));
  cmd_train->add_option("--out", train.out, "Output directory");

  ReportOptions report;
  auto* cmd_report = app.add_subcommand("report", "Merge training runs into comparison CSV and charts");
  cmd_report->add_option("run_dir", report.run_dir, "Directory holding one or more runs")->required();
  cmd_report->add_option("--out", report.out, "Output directory (defaults to run_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (global.threads > 0) set_num_threads(global.threads);
    const RunConfig cfg = resolve_config(global);
    if (cmd_analyze->parsed()) run_analyze(cfg, analyze, out);
    if (cmd_perturb->parsed()) run_perturb(cfg, perturb_opt, out);
    if (cmd_project->parsed()) run_project(cfg, project, out);
    if (cmd_train->parsed()) run_train(cfg, train, out, err);
    if (cmd_report->parsed()) run_report(cfg, report, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kSuccess;
}

}  // namespace freqsplat::tools
