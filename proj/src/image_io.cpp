// Copyright 2026 The RubbleNav Authors
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

// PGM (P5) and 8-bit grayscale PNG reading/writing for label rasters.

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include "rubblenav/mask_model.hpp"

namespace rubblenav
{
namespace
{

std::vector<unsigned char> read_bytes(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open mask file " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Parses one whitespace-delimited header integer, skipping '#' comments.
int pnm_header_int(const std::vector<unsigned char> & bytes, std::size_t & pos)
{
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) {
      ++pos;
    }
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') {
        ++pos;
      }
      continue;
    }
    break;
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
    throw Error(ErrorCode::kParse, "malformed PGM header");
  }
  long value = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1'000'000) {
      throw Error(ErrorCode::kParse, "PGM header value too large");
    }
    ++pos;
  }
  return static_cast<int>(value);
}

LabelMask decode_pgm(const std::vector<unsigned char> & bytes)
{
  std::size_t pos = 2;
  const int width = pnm_header_int(bytes, pos);
  const int height = pnm_header_int(bytes, pos);
  const int maxval = pnm_header_int(bytes, pos);
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kParse, "PGM dimensions must be positive");
  }
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::kParse, "PGM maxval must be in 1..255 for label masks");
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::kParse, "malformed PGM header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) {
    throw Error(ErrorCode::kParse, "PGM raster is truncated");
  }
  std::vector<ClassId> labels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
    bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return LabelMask(width, height, std::move(labels));
}

struct PngReadState
{
  const std::vector<unsigned char> * bytes;
  std::size_t pos;
};

void png_read_from_vector(png_structp png, png_bytep out, png_size_t count)
{
  auto * state = static_cast<PngReadState *>(png_get_io_ptr(png));
  if (state->pos + count > state->bytes->size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, state->bytes->data() + state->pos, count);
  state->pos += count;
}

LabelMask decode_png(const std::vector<unsigned char> & bytes)
{
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) {
    throw Error(ErrorCode::kIo, "png_create_read_struct failed");
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct failed");
  }
  PngReadState state{&bytes, 0};
  std::vector<ClassId> labels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kParse, "corrupt PNG data");
  }
  png_set_read_fn(png, &state, png_read_from_vector);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(
      ErrorCode::kParse,
      "label PNG must be single-channel 8-bit grayscale (multi-channel input rejected)");
  }
  labels.resize(static_cast<std::size_t>(width) * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) {
    rows[r] = labels.data() + static_cast<std::size_t>(r) * width;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return LabelMask(static_cast<int>(width), static_cast<int>(height), std::move(labels));
}

void encode_png(const std::filesystem::path & path, const LabelMask & mask)
{
  std::unique_ptr<FILE, int (*)(FILE *)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "failed writing PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(
    png, info, static_cast<png_uint_32>(mask.width()), static_cast<png_uint_32>(mask.height()), 8,
    PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
    PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < mask.height(); ++r) {
    png_write_row(png, const_cast<png_bytep>(&mask.at(0, r)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

LabelMask read_label_image(const std::filesystem::path & path)
{
  const auto bytes = read_bytes(path);
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
    bytes[3] == 'G')
  {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '5') {
      return decode_pgm(bytes);
    }
    if (bytes[1] == '6' || bytes[1] == '3') {
      throw Error(ErrorCode::kParse, "multi-channel PPM input is not a label mask");
    }
  }
  throw Error(ErrorCode::kParse, "unrecognised mask format in " + path.string());
}

void save_mask(const std::filesystem::path & path, const LabelMask & mask)
{
  if (path.extension() == ".png") {
    encode_png(path, mask);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  out.write(reinterpret_cast<const char *>(mask.data().data()),
    static_cast<std::streamsize>(mask.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
}

}  // namespace rubblenav
