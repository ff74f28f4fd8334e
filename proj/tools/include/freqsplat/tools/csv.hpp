// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace freqsplat::tools {

// Plain comma-separated table without quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws std::runtime_error naming the column if absent.
  std::size_t column(const std::string& name) const;
};

// Throws std::runtime_error with the path on a missing file, an empty file, or
// a row whose width differs from the header.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace freqsplat::tools
