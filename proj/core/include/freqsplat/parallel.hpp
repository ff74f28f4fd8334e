// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace freqsplat {

// Worker count used by the OpenMP loops inside the library. Every parallel
// loop writes per-item results and reduces serially, so outputs do not depend
// on this value.
void set_num_threads(int n);
int num_threads();

}  // namespace freqsplat
