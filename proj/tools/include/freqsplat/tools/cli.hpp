// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace freqsplat::tools {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kFailure = 2 };

// Parses argv and runs one subcommand. Usage errors print help to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freqsplat::tools
