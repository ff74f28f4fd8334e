// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freqsplat/trainer2d.hpp"

namespace freqsplat {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Top-level run configuration. Scale-space, threshold and split parameters
// live inside `trainer` and are shared by every subcommand.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string input;  // image or target used when the command line omits one
  std::string output_dir = "out";
  TrainerConfig trainer;
  int ellipse_stride = 8;  // analyze: pixels between drawn ellipses
  std::string perturb_kind = "battery";  // or a single perturbation kind
  double perturb_parameter = 1.0;
  std::string gaussians_path;  // project inputs
  std::string cameras_path;
  int project_eta_samples = 64;  // footprint samples per (Gaussian, view)

  void validate() const;

  // Applies one dotted key, e.g. "scale_space.gamma" = "3". Throws ConfigError
  // on an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);

  // Every known key in serialization order.
  static std::vector<std::string> keys();
};

// Parses `key = value` lines; '#' starts a comment; blank lines ignored.
// Keys absent from the text keep their defaults.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Writes every key; round-trips exactly through parse_config.
void write_config(std::ostream& out, const RunConfig& cfg);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace freqsplat
