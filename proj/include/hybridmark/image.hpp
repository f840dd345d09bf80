#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hybridmark {

/// Raised when a caller breaks a documented precondition (wrong shape,
/// out-of-range parameter). Distinct from data-format problems.
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix with value semantics.
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ContractViolation("matrix data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;

/// Grayscale image with real-valued intensities (nominal range [0, 255]).
/// Both sides are at least 8 and multiples of 8 so the block DCT tiles it.
class GrayImage {
public:
  GrayImage() = default;
  explicit GrayImage(RealMatrix pixels) : pixels_(std::move(pixels)) { validate(); }
  GrayImage(std::size_t height, std::size_t width, double fill = 0.0)
      : pixels_(height, width, fill) {
    validate();
  }

  static bool valid_dimensions(std::size_t height, std::size_t width) noexcept {
    return height >= 8 && width >= 8 && height % 8 == 0 && width % 8 == 0;
  }

  std::size_t height() const noexcept { return pixels_.rows(); }
  std::size_t width() const noexcept { return pixels_.cols(); }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  double& operator()(std::size_t y, std::size_t x) noexcept { return pixels_(y, x); }
  double operator()(std::size_t y, std::size_t x) const noexcept { return pixels_(y, x); }

  const RealMatrix& pixels() const noexcept { return pixels_; }
  RealMatrix& pixels() noexcept { return pixels_; }
  std::span<const double> values() const noexcept { return pixels_.values(); }
  std::span<double> values() noexcept { return pixels_.values(); }

  bool same_shape(const GrayImage& other) const noexcept {
    return height() == other.height() && width() == other.width();
  }

  bool operator==(const GrayImage&) const = default;

private:
  void validate() const {
    if (!valid_dimensions(pixels_.rows(), pixels_.cols())) {
      throw ContractViolation("image dimensions " + std::to_string(pixels_.rows()) + "x" +
                              std::to_string(pixels_.cols()) +
                              " must be >= 8 and divisible by 8");
    }
  }

  RealMatrix pixels_;
};

/// Binary logo. Bit 1 is a black PBM pixel.
class WatermarkBits {
public:
  WatermarkBits() = default;
  WatermarkBits(std::size_t rows, std::size_t cols) : bits_(rows, cols, 0) { validate(); }
  WatermarkBits(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> bits)
      : bits_(rows, cols, std::move(bits)) {
    validate();
  }

  std::size_t rows() const noexcept { return bits_.rows(); }
  std::size_t cols() const noexcept { return bits_.cols(); }
  std::size_t size() const noexcept { return bits_.size(); }

  std::uint8_t operator()(std::size_t r, std::size_t c) const noexcept { return bits_(r, c); }
  void set(std::size_t r, std::size_t c, bool bit) noexcept { bits_(r, c) = bit ? 1 : 0; }

  std::span<const std::uint8_t> values() const noexcept { return bits_.values(); }

  std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (auto b : bits_.values()) n += b;
    return n;
  }

  bool operator==(const WatermarkBits&) const = default;

private:
  void validate() const {
    if (bits_.rows() == 0 || bits_.cols() == 0) {
      throw ContractViolation("watermark must have at least one row and column");
    }
    for (auto b : bits_.values()) {
      if (b > 1) throw ContractViolation("watermark bits must be 0 or 1");
    }
  }

  Matrix<std::uint8_t> bits_;
};

/// Round half away from zero and clip to [0, 255].
inline std::uint8_t to_byte(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also catches NaN
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

/// Quantizes every pixel to the 8-bit grid, keeping the double representation.
inline GrayImage round_clip(GrayImage img) {
  for (auto& v : img.values()) v = to_byte(v);
  return img;
}

}  // namespace hybridmark
