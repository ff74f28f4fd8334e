// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <type_traits>

#include "freqsplat/robustness.hpp"
#include "freqsplat/text.hpp"

namespace freqsplat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
}

std::string fmt(double v) {
  return format_double(v);
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint32_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

// Binds a numeric or boolean member reachable through `access`.
template <typename Access>
Field bind(std::string key, Access access) {
  Field f;
  f.key = key;
  f.get = [access](const RunConfig& c) { return fmt(access(c)); };
  f.set = [access, key](RunConfig& c, std::string_view v) {
    auto& ref = access(c);
    using T = std::remove_cvref_t<decltype(ref)>;
    if constexpr (std::is_same_v<T, bool>) {
      ref = parse_bool(key, v);
    } else {
      ref = parse_number<T>(key, v);
    }
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back(bind("run.seed", [](auto& c) -> auto& { return c.seed; }));
    t.push_back({"run.input", [](const RunConfig& c) { return c.input; },
                 [](RunConfig& c, std::string_view v) { c.input = std::string(v); }});
    t.push_back({"run.output_dir", [](const RunConfig& c) { return c.output_dir; },
                 [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); }});

    t.push_back(bind("scale_space.levels", [](auto& c) -> auto& { return c.trainer.scale_space.levels; }));
    t.push_back(bind("scale_space.base", [](auto& c) -> auto& { return c.trainer.scale_space.base; }));
    t.push_back(bind("scale_space.gamma", [](auto& c) -> auto& { return c.trainer.scale_space.gamma; }));
    t.push_back(bind("scale_space.epsilon", [](auto& c) -> auto& { return c.trainer.scale_space.epsilon; }));
    t.push_back(bind("scale_space.integration_factor",
                     [](auto& c) -> auto& { return c.trainer.scale_space.integration_factor; }));
    t.push_back(bind("scale_space.omega_constant",
                     [](auto& c) -> auto& { return c.trainer.scale_space.omega_constant; }));

    t.push_back(bind("thresholds.tau_split", [](auto& c) -> auto& { return c.trainer.thresholds.tau_split; }));
    t.push_back(bind("thresholds.tau_prune", [](auto& c) -> auto& { return c.trainer.thresholds.tau_prune; }));
    t.push_back(bind("thresholds.tau_alpha", [](auto& c) -> auto& { return c.trainer.thresholds.tau_alpha; }));
    t.push_back(bind("thresholds.eta_high", [](auto& c) -> auto& { return c.trainer.thresholds.eta_high; }));
    t.push_back(bind("thresholds.eta_low", [](auto& c) -> auto& { return c.trainer.thresholds.eta_low; }));
    t.push_back(
        bind("thresholds.min_obs", [](auto& c) -> auto& { return c.trainer.thresholds.min_obs; }));

    t.push_back(bind("split.p", [](auto& c) -> auto& { return c.trainer.split_p; }));
    t.push_back(bind("split.kappa", [](auto& c) -> auto& { return c.trainer.split_kappa; }));
    t.push_back(bind("split.cap", [](auto& c) -> auto& { return c.trainer.split_cap; }));

    t.push_back(bind("trainer.iterations", [](auto& c) -> auto& { return c.trainer.iterations; }));
    t.push_back(bind("trainer.densify_interval", [](auto& c) -> auto& { return c.trainer.densify_interval; }));
    t.push_back({"trainer.mode", [](const RunConfig& c) { return std::string(to_string(c.trainer.mode)); },
                 [](RunConfig& c, std::string_view v) {
                   try {
                     c.trainer.mode = parse_densify_mode(v);
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError(e.what());
                   }
                 }});
    t.push_back(bind("trainer.w1", [](auto& c) -> auto& { return c.trainer.w1; }));
    t.push_back(bind("trainer.w2", [](auto& c) -> auto& { return c.trainer.w2; }));
    t.push_back(
        bind("trainer.baseline_threshold", [](auto& c) -> auto& { return c.trainer.baseline_threshold; }));
    t.push_back(bind("trainer.init_grid", [](auto& c) -> auto& { return c.trainer.init_grid; }));
    t.push_back(bind("trainer.init_jitter", [](auto& c) -> auto& { return c.trainer.init_jitter; }));
    t.push_back(bind("trainer.init_opacity", [](auto& c) -> auto& { return c.trainer.init_opacity; }));
    t.push_back(bind("trainer.eta_samples", [](auto& c) -> auto& { return c.trainer.eta_samples; }));
    t.push_back(bind("trainer.use_eta_proj", [](auto& c) -> auto& { return c.trainer.use_eta_proj; }));
    t.push_back(bind("trainer.lr.position", [](auto& c) -> auto& { return c.trainer.lr.position; }));
    t.push_back(
        bind("trainer.lr.position_final", [](auto& c) -> auto& { return c.trainer.lr.position_final; }));
    t.push_back(bind("trainer.lr.scale", [](auto& c) -> auto& { return c.trainer.lr.scale; }));
    t.push_back(bind("trainer.lr.rotation", [](auto& c) -> auto& { return c.trainer.lr.rotation; }));
    t.push_back(bind("trainer.lr.color", [](auto& c) -> auto& { return c.trainer.lr.color; }));
    t.push_back(bind("trainer.lr.opacity", [](auto& c) -> auto& { return c.trainer.lr.opacity; }));

    t.push_back(bind("analyze.ellipse_stride", [](auto& c) -> auto& { return c.ellipse_stride; }));
    t.push_back({"perturb.kind", [](const RunConfig& c) { return c.perturb_kind; },
                 [](RunConfig& c, std::string_view v) { c.perturb_kind = std::string(v); }});
    t.push_back(bind("perturb.parameter", [](auto& c) -> auto& { return c.perturb_parameter; }));
    t.push_back({"project.gaussians", [](const RunConfig& c) { return c.gaussians_path; },
                 [](RunConfig& c, std::string_view v) { c.gaussians_path = std::string(v); }});
    t.push_back({"project.cameras", [](const RunConfig& c) { return c.cameras_path; },
                 [](RunConfig& c, std::string_view v) { c.cameras_path = std::string(v); }});
    t.push_back(bind("project.eta_samples", [](auto& c) -> auto& { return c.project_eta_samples; }));
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  trainer.validate();
  if (ellipse_stride < 1) throw std::invalid_argument("analyze.ellipse_stride must be >= 1");
  if (project_eta_samples < 1) throw std::invalid_argument("project.eta_samples must be >= 1");
  if (perturb_kind != "battery") {
    Perturbation{parse_perturbation_kind(perturb_kind), perturb_parameter}.validate();
  }
}

void RunConfig::set(std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key: " + std::string(key));
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.push_back(f.key);
  return out;
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    base.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_config(std::ostream& out, const RunConfig& cfg) {
  for (const Field& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config: " + path.string());
  write_config(out, cfg);
}

}  // namespace freqsplat
