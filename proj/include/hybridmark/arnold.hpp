#pragma once

// Arnold cat map on square bit matrices. A cell at (a, b) = (row, col) moves
// to (a + b, a + 2b) mod N per iteration; the inverse step is
// (2a' - b', b' - a') mod N.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hybridmark/image.hpp"

namespace hybridmark {

struct ArnoldKey {
  std::uint64_t iterations = 24;
};

class SquareBitMatrix {
public:
  SquareBitMatrix() = default;
  explicit SquareBitMatrix(std::size_t side) : side_(side), bits_(side * side, 0) {
    if (side == 0) throw ContractViolation("square bit matrix needs side >= 1");
  }
  SquareBitMatrix(std::size_t side, std::vector<std::uint8_t> bits) : side_(side), bits_(std::move(bits)) {
    if (side == 0) throw ContractViolation("square bit matrix needs side >= 1");
    if (bits_.size() != side * side) throw ContractViolation("square bit matrix data has wrong length");
    for (auto b : bits_) {
      if (b > 1) throw ContractViolation("square bit matrix entries must be 0 or 1");
    }
  }

  std::size_t side() const noexcept { return side_; }
  std::uint8_t operator()(std::size_t a, std::size_t b) const noexcept { return bits_[a * side_ + b]; }
  std::uint8_t& operator()(std::size_t a, std::size_t b) noexcept { return bits_[a * side_ + b]; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  std::size_t popcount() const noexcept { return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0}); }

  bool operator==(const SquareBitMatrix&) const = default;

private:
  std::size_t side_ = 0;
  std::vector<std::uint8_t> bits_;
};

namespace detail {

/// Destination index of each cell under one forward step.
inline std::vector<std::size_t> arnold_step_table(std::size_t n) {
  std::vector<std::size_t> to(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      to[a * n + b] = ((a + b) % n) * n + (a + 2 * b) % n;
    }
  }
  return to;
}

inline std::vector<std::size_t> arnold_inverse_step_table(std::size_t n) {
  std::vector<std::size_t> to(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t a2 = (2 * a + n - b % n) % n;
      const std::size_t b2 = (b + n - a) % n;
      to[a * n + b] = a2 * n + b2;
    }
  }
  return to;
}

template <typename T>
std::vector<T> apply_steps(const std::vector<T>& cells, const std::vector<std::size_t>& step,
                           std::uint64_t iterations) {
  std::vector<T> cur = cells;
  std::vector<T> next(cells.size());
  for (std::uint64_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < cur.size(); ++i) next[step[i]] = cur[i];
    cur.swap(next);
  }
  return cur;
}

}  // namespace detail

/// Smallest T >= 1 such that T forward steps are the identity on Z_N x Z_N.
inline std::uint64_t arnold_period(std::size_t side) {
  if (side == 0) throw ContractViolation("arnold_period needs side >= 1");
  const auto step = detail::arnold_step_table(side);
  std::vector<std::size_t> pos(side * side);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::uint64_t period = 0;
  bool identity = false;
  while (!identity) {
    ++period;
    identity = true;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      pos[i] = step[pos[i]];
      identity = identity && pos[i] == i;
    }
  }
  return period;
}

/// Iteration counts are reduced modulo the period before the map is applied.
inline SquareBitMatrix arnold_scramble(const SquareBitMatrix& m, ArnoldKey key) {
  const std::size_t n = m.side();
  const std::uint64_t steps = key.iterations % arnold_period(n);
  return SquareBitMatrix(n, detail::apply_steps(m.bits(), detail::arnold_step_table(n), steps));
}

inline SquareBitMatrix arnold_descramble(const SquareBitMatrix& m, ArnoldKey key) {
  const std::size_t n = m.side();
  const std::uint64_t steps = key.iterations % arnold_period(n);
  return SquareBitMatrix(n, detail::apply_steps(m.bits(), detail::arnold_inverse_step_table(n), steps));
}

/// Side of the smallest square holding rows*cols cells.
inline std::size_t packed_side(std::size_t rows, std::size_t cols) {
  const std::size_t count = rows * cols;
  auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(count)));
  while (side * side < count) ++side;
  while (side > 1 && (side - 1) * (side - 1) >= count) --side;
  return side;
}

/// Row-major flattening into the packed square; trailing cells are zero.
inline SquareBitMatrix pack_square(const WatermarkBits& wm) {
  const std::size_t side = packed_side(wm.rows(), wm.cols());
  std::vector<std::uint8_t> bits(side * side, 0);
  std::copy(wm.values().begin(), wm.values().end(), bits.begin());
  return SquareBitMatrix(side, std::move(bits));
}

inline WatermarkBits unpack_square(const SquareBitMatrix& sq, std::size_t rows, std::size_t cols) {
  if (rows * cols > sq.side() * sq.side()) throw ContractViolation("square too small to unpack watermark");
  std::vector<std::uint8_t> bits(sq.bits().begin(), sq.bits().begin() + static_cast<std::ptrdiff_t>(rows * cols));
  return WatermarkBits(rows, cols, std::move(bits));
}

/// Scrambled-square cell indices that carry logo bits (not padding), in
/// row-major order. Both embedder and extractor derive it from key and shape.
inline std::vector<std::size_t> scrambled_payload_cells(std::size_t rows, std::size_t cols, ArnoldKey key) {
  const std::size_t side = packed_side(rows, cols);
  std::vector<std::uint8_t> occupied(side * side, 0);
  std::fill_n(occupied.begin(), rows * cols, std::uint8_t{1});
  const auto moved = arnold_scramble(SquareBitMatrix(side, std::move(occupied)), key);
  std::vector<std::size_t> cells;
  cells.reserve(rows * cols);
  for (std::size_t i = 0; i < moved.bits().size(); ++i) {
    if (moved.bits()[i]) cells.push_back(i);
  }
  return cells;
}

/// Logo -> embedding order: pack, scramble, keep the payload cells.
inline std::vector<std::uint8_t> scramble_watermark(const WatermarkBits& wm, ArnoldKey key) {
  const auto scrambled = arnold_scramble(pack_square(wm), key);
  const auto cells = scrambled_payload_cells(wm.rows(), wm.cols(), key);
  std::vector<std::uint8_t> out;
  out.reserve(cells.size());
  for (auto c : cells) out.push_back(scrambled.bits()[c]);
  return out;
}

/// Inverse of scramble_watermark.
inline WatermarkBits descramble_watermark(const std::vector<std::uint8_t>& payload, std::size_t rows,
                                          std::size_t cols, ArnoldKey key) {
  const auto cells = scrambled_payload_cells(rows, cols, key);
  if (payload.size() != cells.size()) throw ContractViolation("payload length does not match watermark shape");
  const std::size_t side = packed_side(rows, cols);
  std::vector<std::uint8_t> square(side * side, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) square[cells[i]] = payload[i] ? 1 : 0;
  return unpack_square(arnold_descramble(SquareBitMatrix(side, std::move(square)), key), rows, cols);
}

}  // namespace hybridmark
