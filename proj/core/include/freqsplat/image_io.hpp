// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "freqsplat/image.hpp"

namespace freqsplat {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 8-bit PNG, gray or RGB. Samples map to [0,1] by /255. Readers reject channel
// counts outside {1,3} and images smaller than 8x8.
ImageBuffer read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageBuffer& img);

// Portable float map, 32-bit little-endian ("Pf" gray, "PF" RGB). Lossless for
// float-representable samples.
ImageBuffer read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const ImageBuffer& img);

// Dispatches on the extension (.png / .pfm, case-insensitive).
ImageBuffer read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace freqsplat
