// Copyright 2026 The camfail Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Lossless PNG input/output on top of libpng.
//
// Decoding accepts every PNG colour type and bit depth. Everything is brought
// to 8-bit RGB: 16-bit samples keep their high byte (truncation), palettes and
// greyscale are expanded, and alpha is composited over black with
// out = round(c * a / 255).
//
// Encoding uses fixed settings (zlib level 6, adaptive filtering, no tIME or
// text chunks) so that equal buffers always produce byte-identical files.

#include <png.h>

#include <csetjmp>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/image.hpp"

namespace camfail {
namespace png_detail {

struct ReadCursor {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t pos = 0;
};

struct Decoded {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgba;
  std::vector<png_bytep> rows;
  std::string error;
};

struct Encoded {
  std::vector<std::uint8_t> bytes;
  std::vector<png_const_bytep> rows;
  std::string error;
};

inline void on_decode_error(png_structp png, png_const_charp msg) {
  auto* out = static_cast<Decoded*>(png_get_error_ptr(png));
  out->error = msg ? msg : "unknown libpng error";
  png_longjmp(png, 1);
}

inline void on_encode_error(png_structp png, png_const_charp msg) {
  auto* out = static_cast<Encoded*>(png_get_error_ptr(png));
  out->error = msg ? msg : "unknown libpng error";
  png_longjmp(png, 1);
}

inline void on_warning(png_structp, png_const_charp) {}

inline void read_cb(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (src->size - src->pos < n) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->data + src->pos, n);
  src->pos += n;
}

inline void write_cb(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<Encoded*>(png_get_io_ptr(png));
  out->bytes.insert(out->bytes.end(), data, data + n);
}

inline void flush_cb(png_structp) {}

// Decodes to 8-bit RGBA. All storage is owned by `out` so a longjmp out of
// libpng never skips a destructor in this frame.
inline bool decode_rgba(ReadCursor& cursor, Decoded& out) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &out,
                                           on_decode_error, on_warning);
  if (png == nullptr) {
    out.error = "png_create_read_struct failed";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    out.error = "png_create_info_struct failed";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_set_read_fn(png, &cursor, read_cb);
  png_read_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if ((color_type & PNG_COLOR_MASK_ALPHA) == 0 &&
      !png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const png_size_t row_bytes = png_get_rowbytes(png, info);
  if (row_bytes != static_cast<png_size_t>(out.width) * 4) {
    png_error(png, "unexpected row layout after colour conversion");
  }
  out.rgba.resize(row_bytes * out.height);
  out.rows.resize(out.height);
  for (std::uint32_t y = 0; y < out.height; ++y) {
    out.rows[y] = out.rgba.data() + y * row_bytes;
  }
  png_read_image(png, out.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

// Encodes one PNG with fixed settings. `pixels` holds height rows of
// width*channels*(bit_depth/8) bytes; 16-bit samples are big-endian.
inline bool encode(std::uint32_t width, std::uint32_t height, int color_type,
                   int bit_depth, std::span<const std::uint8_t> pixels,
                   Encoded& out) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &out,
                                            on_encode_error, on_warning);
  if (png == nullptr) {
    out.error = "png_create_write_struct failed";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    out.error = "png_create_info_struct failed";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }

  png_set_write_fn(png, &out, write_cb, flush_cb);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const std::size_t row_bytes = pixels.size() / (height == 0 ? 1 : height);
  out.rows.resize(height);
  for (std::uint32_t y = 0; y < height; ++y) {
    out.rows[y] = pixels.data() + y * row_bytes;
  }
  png_write_image(png, const_cast<png_bytepp>(out.rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw DataError("cannot open image '" + path.string() +
                    "': no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

inline Decoded decode_or_throw(std::span<const std::uint8_t> bytes,
                               const std::string& what) {
  Decoded decoded;
  ReadCursor cursor{bytes.data(), bytes.size(), 0};
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw DataError(what + ": not a PNG file");
  }
  if (!decode_rgba(cursor, decoded)) {
    throw DataError(what + ": " + decoded.error);
  }
  if (decoded.width == 0 || decoded.height == 0) {
    throw DataError(what + ": zero-dimension image");
  }
  return decoded;
}

}  // namespace png_detail

/// Encodes an RGB buffer to PNG bytes.
inline std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  png_detail::Encoded enc;
  if (!png_detail::encode(static_cast<std::uint32_t>(img.width()),
                          static_cast<std::uint32_t>(img.height()),
                          PNG_COLOR_TYPE_RGB, 8, img.data(), enc)) {
    throw DataError("PNG encoding failed: " + enc.error);
  }
  return std::move(enc.bytes);
}

inline std::vector<std::uint8_t> encode_png(const RgbaImage& img) {
  png_detail::Encoded enc;
  if (!png_detail::encode(static_cast<std::uint32_t>(img.width),
                          static_cast<std::uint32_t>(img.height),
                          PNG_COLOR_TYPE_RGB_ALPHA, 8, img.data, enc)) {
    throw DataError("PNG encoding failed: " + enc.error);
  }
  return std::move(enc.bytes);
}

/// Decodes PNG bytes; alpha is composited over black.
inline ImageBuffer decode_png(std::span<const std::uint8_t> bytes,
                              const std::string& what = "PNG data") {
  auto decoded = png_detail::decode_or_throw(bytes, what);
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(decoded.width) *
                                decoded.height * 3);
  for (std::size_t p = 0, n = rgb.size() / 3; p < n; ++p) {
    const unsigned a = decoded.rgba[p * 4 + 3];
    for (int c = 0; c < 3; ++c) {
      const unsigned v = decoded.rgba[p * 4 + c];
      rgb[p * 3 + c] = static_cast<std::uint8_t>((v * a + 127) / 255);
    }
  }
  return ImageBuffer(static_cast<int>(decoded.width),
                     static_cast<int>(decoded.height), std::move(rgb));
}

inline RgbaImage decode_png_rgba(std::span<const std::uint8_t> bytes,
                                 const std::string& what = "PNG data") {
  auto decoded = png_detail::decode_or_throw(bytes, what);
  RgbaImage out;
  out.width = static_cast<int>(decoded.width);
  out.height = static_cast<int>(decoded.height);
  out.data = std::move(decoded.rgba);
  return out;
}

inline ImageBuffer load_image(const std::filesystem::path& path) {
  const auto bytes = png_detail::read_file(path);
  return decode_png(bytes, path.string());
}

inline RgbaImage load_rgba(const std::filesystem::path& path) {
  const auto bytes = png_detail::read_file(path);
  return decode_png_rgba(bytes, path.string());
}

inline void save_image(const ImageBuffer& img,
                       const std::filesystem::path& path) {
  if (img.empty()) throw UsageError("save_image: empty buffer");
  png_detail::write_file(path, encode_png(img));
}

inline void save_rgba(const RgbaImage& img, const std::filesystem::path& path) {
  png_detail::write_file(path, encode_png(img));
}

}  // namespace camfail
