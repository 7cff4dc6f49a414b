#include "aerodet/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "aerodet/errors.hpp"

namespace aerodet {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

double from_byte(std::uint8_t b) { return static_cast<double>(b) / 255.0; }

Bytes encode_pgm(const Image& gray) {
  if (gray.channels() != 1) throw std::invalid_argument("encode_pgm: expected a 1-channel image");
  const std::string header =
      "P5\n" + std::to_string(gray.width()) + " " + std::to_string(gray.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + gray.pixels().size());
  for (double v : gray.pixels()) out.push_back(to_byte(v));
  return out;
}

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(const Bytes& data) : data_(data) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= data_.size() || !std::isdigit(data_[pos_]))
      throw InputFormatError("PGM: malformed header");
    long value = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      value = value * 10 + (data_[pos_++] - '0');
      if (value > 1'000'000) throw InputFormatError("PGM: header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_]))
      throw InputFormatError("PGM: malformed header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const Bytes& data_;
  std::size_t pos_ = 2;
};

}  // namespace

Image decode_pgm(const Bytes& data) {
  if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
    throw InputFormatError("PGM: missing P5 signature");
  PgmHeaderReader reader(data);
  const int width = reader.next_int();
  const int height = reader.next_int();
  const int maxval = reader.next_int();
  if (width < 1 || height < 1) throw InputFormatError("PGM: dimensions must be positive");
  if (maxval != 255) throw InputFormatError("PGM: only 8-bit (maxval 255) images are supported");
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (data.size() < offset + count) throw InputFormatError("PGM: truncated raster");
  std::vector<double> px(count);
  for (std::size_t i = 0; i < count; ++i) px[i] = from_byte(data[offset + i]);
  return Image(width, height, 1, std::move(px));
}

namespace {

void png_write_to_vector(png_structp png, png_bytep bytes, png_size_t length) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), bytes, bytes + length);
}

void png_flush_noop(png_structp) {}

struct PngSource {
  const Bytes* data;
  std::size_t pos;
};

void png_read_from_vector(png_structp png, png_bytep bytes, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->pos + length > src->data->size()) png_error(png, "truncated PNG stream");
  std::memcpy(bytes, src->data->data() + src->pos, length);
  src->pos += length;
}

}  // namespace

Bytes encode_png(const Image& image) {
  const int w = image.width();
  const int h = image.height();
  const int c = image.channels();
  std::vector<std::uint8_t> raster(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), raster.begin(), to_byte);
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) rows[y] = raster.data() + static_cast<std::size_t>(y) * w * c;

  const auto out = std::make_unique<Bytes>();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("PNG: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("PNG: cannot create info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG: encoding failed");
  }
  png_set_write_fn(png, out.get(), png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(*out);
}

Image decode_png(const Bytes& data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
    throw InputFormatError("PNG: missing signature");

  PngSource source{&data, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("PNG: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("PNG: cannot create info struct");
  }

  // Everything written between setjmp and a possible longjmp lives on the
  // heap so it stays well-defined after the jump.
  struct Decoded {
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int channels = 0;
  };
  const auto state = std::make_unique<Decoded>();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputFormatError("PNG: corrupt or unsupported stream");
  }
  png_set_read_fn(png, &source, png_read_from_vector);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  state->width = png_get_image_width(png, info);
  state->height = png_get_image_height(png, info);
  state->channels = png_get_channels(png, info);
  if (state->channels == 1 || state->channels == 3) {
    const std::size_t stride = png_get_rowbytes(png, info);
    state->raster.resize(stride * state->height);
    state->rows.resize(state->height);
    for (png_uint_32 y = 0; y < state->height; ++y)
      state->rows[y] = state->raster.data() + y * stride;
    png_read_image(png, state->rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (state->channels != 1 && state->channels != 3)
    throw InputFormatError("PNG: unsupported channel layout");
  std::vector<double> px(state->raster.size());
  std::transform(state->raster.begin(), state->raster.end(), px.begin(), from_byte);
  return Image(static_cast<int>(state->width), static_cast<int>(state->height), state->channels,
               std::move(px));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return data;
}

Image read_image(const std::filesystem::path& path) {
  const Bytes data = read_file(path);
  if (data.size() >= 2 && data[0] == 'P' && data[1] == '5') return decode_pgm(data);
  if (data.size() >= 8 && png_sig_cmp(data.data(), 0, 8) == 0) return decode_png(data);
  throw InputFormatError(path.string() + ": not a binary PGM or PNG image");
}

}  // namespace aerodet
