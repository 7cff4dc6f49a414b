#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aerodet/raster.hpp"

namespace aerodet {

using Bytes = std::vector<std::uint8_t>;

// byte = round(v * 255); v = byte / 255 on read.
std::uint8_t to_byte(double v);
double from_byte(std::uint8_t b);

// Binary PGM (P5, maxval 255). Decoding throws InputFormatError.
Bytes encode_pgm(const Image& gray);
Image decode_pgm(const Bytes& data);

// 8-bit PNG, gray or RGB by channel count. Alpha is dropped on read,
// palette and low-bit-depth images are expanded.
Bytes encode_png(const Image& image);
Image decode_png(const Bytes& data);

// Dispatches on the file signature (P5 or PNG).
Image read_image(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);

}  // namespace aerodet
