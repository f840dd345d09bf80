#pragma once

// Binary PGM (P5, maxval 255) and PBM (P1/P4) reading and writing.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmark/image.hpp"

namespace hybridmark {

/// Malformed or unsupported file content. `offset()` is the byte position
/// where parsing stopped.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_pnm_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view magic() {
    if (bytes_.size() < 2) throw FormatError("file too short for a Netpbm magic number", 0);
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (is_pnm_space(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 32)) throw FormatError(std::string(what) + " is too large", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("expected ") + what, start);
    return value;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !is_pnm_space(bytes_[pos_])) {
      throw FormatError("expected whitespace after header", pos_);
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }
  void set_pos(std::size_t p) noexcept { pos_ = p; }
  std::string_view bytes() const noexcept { return bytes_; }

private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace detail

inline GrayImage parse_pgm(std::string_view bytes) {
  detail::HeaderReader reader(bytes);
  if (reader.magic() != "P5") throw FormatError("not a binary PGM (magic P5 expected)", 0);
  const std::size_t width = reader.number("width");
  const std::size_t height = reader.number("height");
  const std::size_t maxval_at = reader.pos();
  const std::size_t maxval = reader.number("maxval");
  if (maxval != 255) {
    throw FormatError("maxval " + std::to_string(maxval) + " unsupported, only 255 is accepted",
                      maxval_at);
  }
  reader.single_space();
  if (!GrayImage::valid_dimensions(height, width)) {
    throw FormatError("dimensions " + std::to_string(height) + "x" + std::to_string(width) +
                          " must be >= 8 and divisible by 8",
                      0);
  }
  const std::size_t raster = reader.pos();
  const std::size_t need = width * height;
  if (bytes.size() - raster < need) {
    throw FormatError("truncated raster: expected " + std::to_string(need) + " bytes, found " +
                          std::to_string(bytes.size() - raster),
                      bytes.size());
  }
  std::vector<double> px(need);
  for (std::size_t i = 0; i < need; ++i) {
    px[i] = static_cast<double>(static_cast<unsigned char>(bytes[raster + i]));
  }
  return GrayImage(RealMatrix(height, width, std::move(px)));
}

inline std::string format_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.reserve(out.size() + img.pixel_count());
  for (double v : img.values()) out.push_back(static_cast<char>(to_byte(v)));
  return out;
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
  return parse_pgm(detail::slurp(path));
}

/// Pixels are rounded half away from zero and clipped to [0, 255].
inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  detail::spit(path, format_pgm(img));
}

inline WatermarkBits parse_pbm(std::string_view bytes) {
  detail::HeaderReader reader(bytes);
  const auto magic = reader.magic();
  if (magic != "P1" && magic != "P4") throw FormatError("not a PBM (magic P1 or P4 expected)", 0);
  const std::size_t width = reader.number("width");
  const std::size_t height = reader.number("height");
  if (width == 0 || height == 0) throw FormatError("PBM has an empty dimension", reader.pos());
  std::vector<std::uint8_t> bits(width * height);

  if (magic == "P1") {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      reader.skip_space_and_comments();
      const std::size_t at = reader.pos();
      if (at >= bytes.size()) throw FormatError("truncated P1 raster", at);
      const char c = bytes[at];
      if (c != '0' && c != '1') throw FormatError(std::string("unexpected character in P1 raster"), at);
      bits[i] = c == '1' ? 1 : 0;
      reader.set_pos(at + 1);
    }
  } else {
    reader.single_space();
    const std::size_t raster = reader.pos();
    const std::size_t stride = (width + 7) / 8;
    if (bytes.size() - raster < stride * height) {
      throw FormatError("truncated P4 raster", bytes.size());
    }
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const auto byte = static_cast<unsigned char>(bytes[raster + r * stride + c / 8]);
        bits[r * width + c] = (byte >> (7 - c % 8)) & 1u;
      }
    }
  }
  return WatermarkBits(height, width, std::move(bits));
}

/// Packed P4 encoding; row padding bits are zero.
inline std::string format_pbm(const WatermarkBits& wm) {
  std::string out = "P4\n" + std::to_string(wm.cols()) + " " + std::to_string(wm.rows()) + "\n";
  const std::size_t stride = (wm.cols() + 7) / 8;
  for (std::size_t r = 0; r < wm.rows(); ++r) {
    std::string row(stride, '\0');
    for (std::size_t c = 0; c < wm.cols(); ++c) {
      if (wm(r, c)) row[c / 8] = static_cast<char>(row[c / 8] | (0x80 >> (c % 8)));
    }
    out += row;
  }
  return out;
}

inline WatermarkBits read_watermark_pbm(const std::filesystem::path& path) {
  return parse_pbm(detail::slurp(path));
}

inline void write_watermark_pbm(const WatermarkBits& wm, const std::filesystem::path& path) {
  detail::spit(path, format_pbm(wm));
}

}  // namespace hybridmark
