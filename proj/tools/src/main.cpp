// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "freqsplat/tools/cli.hpp"

int main(int argc, char** argv) { return freqsplat::tools::dispatch(argc, argv, std::cout, std::cerr); }
