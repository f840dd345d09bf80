#pragma once

// 2D DFT with magnitude/phase split, and the 8x8 block DCT.
//
// Convention: the forward DFT carries the 1/(MN) factor, so F(0,0) is the
// mean intensity, and the inverse is an unscaled sum.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "hybridmark/image.hpp"

namespace hybridmark {

using Complex = std::complex<double>;
using ComplexMatrix = Matrix<Complex>;

/// Polar form of a complex DFT plane. magnitude >= 0, phase in (-pi, pi].
class Spectrum {
public:
  Spectrum() = default;
  Spectrum(RealMatrix magnitude, RealMatrix phase)
      : magnitude_(std::move(magnitude)), phase_(std::move(phase)) {
    if (magnitude_.rows() != phase_.rows() || magnitude_.cols() != phase_.cols()) {
      throw ContractViolation("magnitude and phase planes differ in shape");
    }
    for (auto& m : magnitude_.values()) {
      if (m < 0.0) throw ContractViolation("spectrum magnitude must be non-negative");
    }
    for (auto& p : phase_.values()) p = wrap_phase(p);
  }

  static Spectrum from_complex(const ComplexMatrix& plane) {
    RealMatrix mag(plane.rows(), plane.cols());
    RealMatrix ph(plane.rows(), plane.cols());
    for (std::size_t i = 0; i < plane.size(); ++i) {
      mag.values()[i] = std::abs(plane.values()[i]);
      ph.values()[i] = std::arg(plane.values()[i]);
    }
    return Spectrum(std::move(mag), std::move(ph));
  }

  ComplexMatrix to_complex() const {
    ComplexMatrix plane(height(), width());
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane.values()[i] = std::polar(magnitude_.values()[i], phase_.values()[i]);
    }
    return plane;
  }

  std::size_t height() const noexcept { return magnitude_.rows(); }
  std::size_t width() const noexcept { return magnitude_.cols(); }
  const RealMatrix& magnitude() const noexcept { return magnitude_; }
  const RealMatrix& phase() const noexcept { return phase_; }

  static double wrap_phase(double p) noexcept {
    constexpr double pi = std::numbers::pi;
    if (p > pi || p <= -pi) {
      p = std::remainder(p, 2.0 * pi);
      if (p <= -pi) p += 2.0 * pi;
    }
    return p;
  }

private:
  RealMatrix magnitude_;
  RealMatrix phase_;
};

namespace detail {

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// Unscaled 1D DFT, sign = -1 forward, +1 inverse. In place.
class Dft1d {
public:
  Dft1d(std::size_t n, int sign) : n_(n), sign_(sign), twiddle_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_[k] = {std::cos(angle), std::sin(angle)};
    }
    if (is_power_of_two(n)) {
      reversed_.resize(n);
      std::size_t bits = 0;
      while ((std::size_t{1} << bits) < n) ++bits;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        reversed_[i] = r;
      }
    }
  }

  void operator()(std::vector<Complex>& x, std::vector<Complex>& scratch) const {
    if (n_ <= 1) return;
    if (!reversed_.empty()) {
      radix2(x);
    } else {
      direct(x, scratch);
    }
  }

private:
  void radix2(std::vector<Complex>& x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < reversed_[i]) std::swap(x[i], x[reversed_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const Complex t = twiddle_[j * step] * x[start + j + half];
          x[start + j + half] = x[start + j] - t;
          x[start + j] += t;
        }
      }
    }
  }

  void direct(std::vector<Complex>& x, std::vector<Complex>& scratch) const {
    scratch.assign(n_, Complex{});
    for (std::size_t k = 0; k < n_; ++k) {
      Complex acc{};
      for (std::size_t t = 0; t < n_; ++t) acc += x[t] * twiddle_[(k * t) % n_];
      scratch[k] = acc;
    }
    x.swap(scratch);
  }

  std::size_t n_;
  int sign_;
  std::vector<Complex> twiddle_;
  std::vector<std::size_t> reversed_;
};

/// Unscaled separable 2D DFT (rows, then columns).
inline void dft2_inplace(ComplexMatrix& plane, int sign) {
  const std::size_t h = plane.rows();
  const std::size_t w = plane.cols();
  std::vector<Complex> line;
  std::vector<Complex> scratch;

  const Dft1d row_pass(w, sign);
  for (std::size_t r = 0; r < h; ++r) {
    auto row = plane.row(r);
    line.assign(row.begin(), row.end());
    row_pass(line, scratch);
    std::copy(line.begin(), line.end(), row.begin());
  }

  const Dft1d col_pass(h, sign);
  line.resize(h);
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h; ++r) line[r] = plane(r, c);
    col_pass(line, scratch);
    for (std::size_t r = 0; r < h; ++r) plane(r, c) = line[r];
  }
}

}  // namespace detail

/// Forward transform of a real matrix, normalized by 1/(MN).
inline ComplexMatrix dft2_complex(const RealMatrix& m) {
  ComplexMatrix plane(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) plane.values()[i] = m.values()[i];
  detail::dft2_inplace(plane, -1);
  const double scale = 1.0 / static_cast<double>(m.size());
  for (auto& v : plane.values()) v *= scale;
  return plane;
}

/// Unnormalized inverse transform; returns the full complex result.
inline ComplexMatrix idft2_complex(ComplexMatrix plane) {
  detail::dft2_inplace(plane, +1);
  return plane;
}

inline Spectrum dft2(const GrayImage& img) { return Spectrum::from_complex(dft2_complex(img.pixels())); }

/// Real part of the inverse transform. No clipping: values may leave [0, 255].
inline RealMatrix idft2(const Spectrum& spec) {
  const ComplexMatrix plane = idft2_complex(spec.to_complex());
  RealMatrix out(plane.rows(), plane.cols());
  for (std::size_t i = 0; i < plane.size(); ++i) out.values()[i] = plane.values()[i].real();
  return out;
}

inline constexpr std::size_t kBlock = 8;
using DctBlock = std::array<double, kBlock * kBlock>;

/// Orthonormal 8x8 DCT-II basis: basis[u][x] = sqrt(2/8) * a(u) * cos((2x+1)u*pi/16),
/// with a(0) = 1/sqrt(2) and a(u) = 1 otherwise.
inline const std::array<std::array<double, kBlock>, kBlock>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, kBlock>, kBlock> b{};
    for (std::size_t u = 0; u < kBlock; ++u) {
      const double alpha = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      for (std::size_t x = 0; x < kBlock; ++x) {
        b[u][x] = std::sqrt(2.0 / kBlock) * alpha *
                  std::cos(static_cast<double>((2 * x + 1) * u) * std::numbers::pi / (2.0 * kBlock));
      }
    }
    return b;
  }();
  return basis;
}

/// Tile-wise DCT coefficients of a matrix whose sides are multiples of 8.
class DctBlockGrid {
public:
  DctBlockGrid() = default;
  DctBlockGrid(std::size_t block_rows, std::size_t block_cols)
      : block_rows_(block_rows), block_cols_(block_cols), blocks_(block_rows * block_cols, DctBlock{}) {}

  std::size_t block_rows() const noexcept { return block_rows_; }
  std::size_t block_cols() const noexcept { return block_cols_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  /// Row-major block index.
  DctBlock& block(std::size_t i) noexcept { return blocks_[i]; }
  const DctBlock& block(std::size_t i) const noexcept { return blocks_[i]; }
  DctBlock& block(std::size_t br, std::size_t bc) noexcept { return blocks_[br * block_cols_ + bc]; }
  const DctBlock& block(std::size_t br, std::size_t bc) const noexcept {
    return blocks_[br * block_cols_ + bc];
  }

  static double& at(DctBlock& b, std::size_t u, std::size_t v) noexcept { return b[u * kBlock + v]; }
  static double at(const DctBlock& b, std::size_t u, std::size_t v) noexcept { return b[u * kBlock + v]; }

private:
  std::size_t block_rows_ = 0;
  std::size_t block_cols_ = 0;
  std::vector<DctBlock> blocks_;
};

namespace detail {

// out = B * in * B^T (forward) or B^T * in * B (inverse).
inline void dct8x8(const DctBlock& in, DctBlock& out, bool inverse) {
  const auto& b = dct_basis();
  DctBlock tmp{};
  for (std::size_t u = 0; u < kBlock; ++u) {
    for (std::size_t y = 0; y < kBlock; ++y) {
      double acc = 0.0;
      for (std::size_t x = 0; x < kBlock; ++x) {
        acc += (inverse ? b[x][u] : b[u][x]) * in[x * kBlock + y];
      }
      tmp[u * kBlock + y] = acc;
    }
  }
  for (std::size_t u = 0; u < kBlock; ++u) {
    for (std::size_t v = 0; v < kBlock; ++v) {
      double acc = 0.0;
      for (std::size_t y = 0; y < kBlock; ++y) {
        acc += tmp[u * kBlock + y] * (inverse ? b[y][v] : b[v][y]);
      }
      out[u * kBlock + v] = acc;
    }
  }
}

}  // namespace detail

inline DctBlockGrid dct2_blocks(const RealMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0 || m.rows() % kBlock != 0 || m.cols() % kBlock != 0) {
    throw ContractViolation("block DCT needs sides divisible by 8, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
  DctBlockGrid grid(m.rows() / kBlock, m.cols() / kBlock);
  DctBlock tile{};
  for (std::size_t br = 0; br < grid.block_rows(); ++br) {
    for (std::size_t bc = 0; bc < grid.block_cols(); ++bc) {
      for (std::size_t x = 0; x < kBlock; ++x) {
        for (std::size_t y = 0; y < kBlock; ++y) tile[x * kBlock + y] = m(br * kBlock + x, bc * kBlock + y);
      }
      detail::dct8x8(tile, grid.block(br, bc), false);
    }
  }
  return grid;
}

inline RealMatrix idct2_blocks(const DctBlockGrid& grid) {
  RealMatrix m(grid.block_rows() * kBlock, grid.block_cols() * kBlock);
  DctBlock tile{};
  for (std::size_t br = 0; br < grid.block_rows(); ++br) {
    for (std::size_t bc = 0; bc < grid.block_cols(); ++bc) {
      detail::dct8x8(grid.block(br, bc), tile, true);
      for (std::size_t x = 0; x < kBlock; ++x) {
        for (std::size_t y = 0; y < kBlock; ++y) m(br * kBlock + x, bc * kBlock + y) = tile[x * kBlock + y];
      }
    }
  }
  return m;
}

struct Coord {
  std::size_t u;
  std::size_t v;
  bool operator==(const Coord&) const = default;
};

inline constexpr std::size_t kMidbandSize = 22;
using MidbandMask = std::array<Coord, kMidbandSize>;

/// The 22 positions with 6 <= u+v <= 8, row-major.
inline constexpr MidbandMask midband_mask() {
  MidbandMask mask{};
  std::size_t n = 0;
  for (std::size_t u = 0; u < kBlock; ++u) {
    for (std::size_t v = 0; v < kBlock; ++v) {
      if (u + v >= 6 && u + v <= 8) mask[n++] = {u, v};
    }
  }
  return mask;
}

}  // namespace hybridmark
