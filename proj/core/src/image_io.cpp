// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace freqsplat {
namespace {

void check_channels(int channels, const std::filesystem::path& path) {
  if (channels != 1 && channels != 3) {
    throw ImageIoError("unsupported channel count " + std::to_string(channels) + ": " +
                       path.string());
  }
}

void check_floor(int w, int h, const std::filesystem::path& path) {
  if (w < ImageBuffer::kMinAnalysisSize || h < ImageBuffer::kMinAnalysisSize) {
    throw ImageIoError("image dimensions below the 8x8 minimum: " + path.string());
  }
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

}  // namespace

ImageBuffer read_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ImageIoError("file not found: " + path.string());
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw ImageIoError(std::string("malformed PNG: ") + image.message + ": " + path.string());
  }
  struct Guard {
    png_image* img;
    ~Guard() { png_image_free(img); }
  } guard{&image};

  const bool has_alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const bool has_color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const int channels = (has_color ? 3 : 1) + (has_alpha ? 1 : 0);
  check_channels(channels, path);
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  check_floor(w, h, path);

  image.format = has_color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    throw ImageIoError(std::string("malformed PNG: ") + image.message + ": " + path.string());
  }

  ImageBuffer img(w, h, channels);
  std::size_t i = 0;
  for (double& v : img.data()) v = raw[i++] / 255.0;
  return img;
}

void write_png(const std::filesystem::path& path, const ImageBuffer& img) {
  check_channels(img.channels(), path);
  std::vector<png_byte> raw(img.size());
  std::size_t i = 0;
  for (double v : img.data()) {
    raw[i++] = static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raw.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError("failed writing PNG (" + msg + "): " + path.string());
  }
}

ImageBuffer read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open file: " + path.string());

  std::string magic;
  int w = 0;
  int h = 0;
  double scale = 0.0;
  in >> magic >> w >> h >> scale;
  if (!in || (magic != "PF" && magic != "Pf") || w <= 0 || h <= 0 || scale == 0.0) {
    throw ImageIoError("malformed PFM header: " + path.string());
  }
  in.get();  // single whitespace byte terminates the header
  const int channels = magic == "PF" ? 3 : 1;
  check_floor(w, h, path);

  const std::size_t count =
      static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(channels);
  std::vector<std::uint32_t> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 4));
  if (static_cast<std::size_t>(in.gcount()) != count * 4) {
    throw ImageIoError("malformed PFM (truncated data): " + path.string());
  }
  const bool file_little = scale < 0.0;
  const bool host_little = std::endian::native == std::endian::little;
  if (file_little != host_little) {
    for (auto& v : raw) v = __builtin_bswap32(v);
  }

  ImageBuffer img(w, h, channels);
  // PFM stores scanlines bottom-to-top.
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(h - 1 - y) * static_cast<std::size_t>(w);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        const std::uint32_t bits = raw[(row + static_cast<std::size_t>(x)) *
                                           static_cast<std::size_t>(channels) +
                                       static_cast<std::size_t>(c)];
        img.at(x, y, c) = static_cast<double>(std::bit_cast<float>(bits));
      }
    }
  }
  return img;
}

void write_pfm(const std::filesystem::path& path, const ImageBuffer& img) {
  check_channels(img.channels(), path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot open file: " + path.string());
  out << (img.channels() == 3 ? "PF" : "Pf") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << "-1.0\n";
  std::vector<float> row(static_cast<std::size_t>(img.width() * img.channels()));
  for (int y = img.height() - 1; y >= 0; --y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        float v = static_cast<float>(img.at(x, y, c));
        if constexpr (std::endian::native != std::endian::little) {
          v = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
        }
        row[static_cast<std::size_t>(x * img.channels() + c)] = v;
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw ImageIoError("failed writing PFM: " + path.string());
}

ImageBuffer read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ImageIoError("file not found: " + path.string());
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pfm") return read_pfm(path);
  throw ImageIoError("unsupported image extension: " + path.string());
}

void write_image(const std::filesystem::path& path, const ImageBuffer& img) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(path, img);
  if (ext == ".pfm") return write_pfm(path, img);
  throw ImageIoError("unsupported image extension: " + path.string());
}

}  // namespace freqsplat
