// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "freqsplat/image.hpp"

namespace freqsplat {

// Deterministic RGB test pattern mixing a smooth background, windowed
// gratings at several frequencies and orientations, and hard-edged shapes.
ImageBuffer make_procedural_target(int width = 256, int height = 256);

// Single-channel sin(2*pi*frequency*(x cos a + y sin a)) scaled to [0,1]
// around 0.5 with the given amplitude.
ImageBuffer make_sinusoid(int width, int height, double frequency, double angle_rad,
                          double amplitude = 0.5);

}  // namespace freqsplat
