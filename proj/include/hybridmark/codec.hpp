#pragma once

// Blind watermark embedding and extraction in the block DCT of the DFT
// magnitude.
//
// Embedding adds k * PN_b to the mid-band coefficients of block i for the
// i-th scrambled bit b. Extraction compares the Pearson correlation of those
// coefficients with both carriers.
//
// The strength k is applied to the unnormalized magnitude |sum f e^{-j...}|,
// i.e. dft2's magnitude times H*W.
//
// Two additions on top of the plain additive rule, both switchable:
//  * host compensation: where the host's own coefficients would leave the
//    detector statistic short of `margin` times the carrier's expected
//    response, the shortfall is added along the detector's decision axis;
//  * refinement: the quantized result is decoded and blocks still short of
//    that target are pushed again.
// Modified magnitudes that would turn negative are clamped to zero.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridmark/arnold.hpp"
#include "hybridmark/image.hpp"
#include "hybridmark/metrics.hpp"
#include "hybridmark/pn.hpp"
#include "hybridmark/transforms.hpp"

namespace hybridmark {

class CapacityError : public std::runtime_error {
public:
  CapacityError(std::size_t bits, std::size_t blocks)
      : std::runtime_error("watermark needs " + std::to_string(bits) + " blocks but the image has only " +
                           std::to_string(blocks)),
        bits_(bits),
        blocks_(blocks) {}
  std::size_t bits() const noexcept { return bits_; }
  std::size_t blocks() const noexcept { return blocks_; }

private:
  std::size_t bits_;
  std::size_t blocks_;
};

/// Where the carriers are added. kDftOnly skips the block DCT and writes
/// straight into 8x8 tiles of the magnitude (ablation baseline).
enum class EmbedDomain { kDftDct, kDftOnly };

inline constexpr double kDefaultStrength = 9600.0;

struct EmbedConfig {
  PnKey pn_key{};
  ArnoldKey arnold_key{24};
  double strength = kDefaultStrength;
  MidbandMask mask = midband_mask();
  std::size_t watermark_rows = 0;
  std::size_t watermark_cols = 0;
  EmbedDomain domain = EmbedDomain::kDftDct;
  bool host_compensation = true;
  double margin = 1.0;
  int refinement_passes = 8;

  std::size_t payload_bits() const noexcept { return watermark_rows * watermark_cols; }

  void validate() const {
    if (!(strength >= 0.0) || !std::isfinite(strength)) {
      throw ContractViolation("embedding strength must be finite and >= 0");
    }
    if (watermark_rows == 0 || watermark_cols == 0) {
      throw ContractViolation("watermark dimensions must be set");
    }
    if (refinement_passes < 0) throw ContractViolation("refinement passes must be >= 0");
    if (!(margin >= 0.0) || !std::isfinite(margin)) throw ContractViolation("margin must be finite and >= 0");
  }
};

struct EmbedResult {
  GrayImage watermarked;
  double psnr = 0.0;
  double ssim = 0.0;
};

/// Per-block correlations used by the extractor.
struct BlockCorrelation {
  double corr0 = 0.0;
  double corr1 = 0.0;
  std::uint8_t bit() const noexcept { return corr1 > corr0 ? 1 : 0; }
};

namespace detail {

inline std::size_t block_budget(std::size_t height, std::size_t width) {
  return (height / kBlock) * (width / kBlock);
}

inline DctBlockGrid to_coefficient_grid(const RealMatrix& magnitude, EmbedDomain domain) {
  if (domain == EmbedDomain::kDftDct) return dct2_blocks(magnitude);
  DctBlockGrid grid(magnitude.rows() / kBlock, magnitude.cols() / kBlock);
  for (std::size_t br = 0; br < grid.block_rows(); ++br) {
    for (std::size_t bc = 0; bc < grid.block_cols(); ++bc) {
      auto& b = grid.block(br, bc);
      for (std::size_t u = 0; u < kBlock; ++u) {
        for (std::size_t v = 0; v < kBlock; ++v) b[u * kBlock + v] = magnitude(br * kBlock + u, bc * kBlock + v);
      }
    }
  }
  return grid;
}

inline RealMatrix from_coefficient_grid(const DctBlockGrid& grid, EmbedDomain domain) {
  if (domain == EmbedDomain::kDftDct) return idct2_blocks(grid);
  RealMatrix m(grid.block_rows() * kBlock, grid.block_cols() * kBlock);
  for (std::size_t br = 0; br < grid.block_rows(); ++br) {
    for (std::size_t bc = 0; bc < grid.block_cols(); ++bc) {
      const auto& b = grid.block(br, bc);
      for (std::size_t u = 0; u < kBlock; ++u) {
        for (std::size_t v = 0; v < kBlock; ++v) m(br * kBlock + u, bc * kBlock + v) = b[u * kBlock + v];
      }
    }
  }
  return m;
}

/// Unnormalized magnitude and the phase of an image.
struct Polar {
  RealMatrix magnitude;
  RealMatrix phase;
};

inline Polar polar_of(const GrayImage& img) {
  Spectrum spec = dft2(img);
  RealMatrix mag = spec.magnitude();
  const double scale = static_cast<double>(img.pixel_count());
  for (auto& m : mag.values()) m *= scale;
  return {std::move(mag), spec.phase()};
}

inline std::vector<double> mean_removed(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mean;
  return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Pearson correlation; 0 when either side has no variance.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto xc = mean_removed(x);
  const auto yc = mean_removed(y);
  const double sxx = dot(xc, xc);
  const double syy = dot(yc, yc);
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return dot(xc, yc) / std::sqrt(sxx * syy);
}

/// d = p1~/|p1~| - p0~/|p0~|. corr(x, p1) > corr(x, p0) exactly when <x, d> > 0.
inline std::vector<double> decision_axis(const PnPair& pn) {
  auto unit = [](const std::vector<double>& p) {
    auto c = mean_removed(p);
    const double n = std::sqrt(dot(c, c));
    for (auto& v : c) v = n > 0.0 ? v / n : 0.0;
    return c;
  };
  const auto a = unit(pn.seq1);
  const auto b = unit(pn.seq0);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline std::vector<double> gather(const DctBlock& block, const MidbandMask& mask) {
  std::vector<double> x(mask.size());
  for (std::size_t t = 0; t < mask.size(); ++t) x[t] = DctBlockGrid::at(block, mask[t].u, mask[t].v);
  return x;
}

inline void add_along(DctBlock& block, const MidbandMask& mask, const std::vector<double>& dir, double amount) {
  for (std::size_t t = 0; t < mask.size(); ++t) DctBlockGrid::at(block, mask[t].u, mask[t].v) += amount * dir[t];
}

inline GrayImage reconstruct(const DctBlockGrid& grid, const RealMatrix& phase, EmbedDomain domain) {
  RealMatrix mag = from_coefficient_grid(grid, domain);
  const double scale = 1.0 / static_cast<double>(mag.size());
  for (auto& m : mag.values()) m = m > 0.0 ? m * scale : 0.0;
  return round_clip(GrayImage(idft2(Spectrum(std::move(mag), phase))));
}

inline void check_capacity(const GrayImage& img, const EmbedConfig& cfg) {
  const std::size_t blocks = block_budget(img.height(), img.width());
  if (cfg.payload_bits() > blocks) throw CapacityError(cfg.payload_bits(), blocks);
}

}  // namespace detail

/// Correlations of the first rows*cols blocks against both carriers, in
/// block order (scrambled bit order).
inline std::vector<BlockCorrelation> block_correlations(const GrayImage& img, const EmbedConfig& cfg) {
  cfg.validate();
  detail::check_capacity(img, cfg);
  const auto polar = detail::polar_of(img);
  const auto grid = detail::to_coefficient_grid(polar.magnitude, cfg.domain);
  const PnPair pn = generate_pn_pair(cfg.pn_key, cfg.mask.size());
  std::vector<BlockCorrelation> out(cfg.payload_bits());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = detail::gather(grid.block(i), cfg.mask);
    out[i] = {detail::pearson(x, pn.seq0), detail::pearson(x, pn.seq1)};
  }
  return out;
}

/// Blind extraction: needs only the image, both keys and the logo shape.
inline WatermarkBits extract(const GrayImage& img, const EmbedConfig& cfg) {
  const auto corr = block_correlations(img, cfg);
  std::vector<std::uint8_t> payload(corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i) payload[i] = corr[i].bit();
  return descramble_watermark(payload, cfg.watermark_rows, cfg.watermark_cols, cfg.arnold_key);
}

inline EmbedResult embed(const GrayImage& host, const WatermarkBits& wm, EmbedConfig cfg) {
  cfg.watermark_rows = wm.rows();
  cfg.watermark_cols = wm.cols();
  cfg.validate();
  detail::check_capacity(host, cfg);

  const auto payload = scramble_watermark(wm, cfg.arnold_key);
  const auto polar = detail::polar_of(host);
  const DctBlockGrid host_grid = detail::to_coefficient_grid(polar.magnitude, cfg.domain);
  const PnPair pn = generate_pn_pair(cfg.pn_key, cfg.mask.size());
  const auto axis = detail::decision_axis(pn);
  const double axis_norm2 = detail::dot(axis, axis);
  const double k = cfg.strength;
  const std::size_t n = payload.size();

  // Additive carriers.
  DctBlockGrid marked = host_grid;
  std::vector<double> sign(n), nominal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& carrier = payload[i] ? pn.seq1 : pn.seq0;
    for (std::size_t t = 0; t < cfg.mask.size(); ++t) {
      DctBlockGrid::at(marked.block(i), cfg.mask[t].u, cfg.mask[t].v) += k * carrier[t];
    }
    sign[i] = payload[i] ? 1.0 : -1.0;
    // Taking the real part of the inverse keeps about half of a one-sided
    // magnitude change, hence the factor 1/2 on the expected response.
    nominal[i] = 0.5 * std::abs(k * detail::dot(carrier, axis));
  }

  const bool informed = cfg.host_compensation && k > 0.0 && axis_norm2 > 0.0;
  std::vector<double> extra(n, 0.0);
  if (informed) {
    for (std::size_t i = 0; i < n; ++i) {
      const double host = sign[i] * detail::dot(detail::gather(host_grid.block(i), cfg.mask), axis);
      const double shortfall = cfg.margin * nominal[i] - (host + nominal[i]);
      if (shortfall > 0.0) extra[i] = 2.0 * shortfall * sign[i];
    }
  }

  auto build = [&] {
    DctBlockGrid g = marked;
    for (std::size_t i = 0; i < n; ++i) {
      if (extra[i] != 0.0) detail::add_along(g.block(i), cfg.mask, axis, extra[i] / axis_norm2);
    }
    return detail::reconstruct(g, polar.phase, cfg.domain);
  };

  GrayImage out = build();
  if (informed) {
    for (int pass = 0; pass < cfg.refinement_passes; ++pass) {
      const auto grid = detail::to_coefficient_grid(detail::polar_of(out).magnitude, cfg.domain);
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double realized = sign[i] * detail::dot(detail::gather(grid.block(i), cfg.mask), axis);
        const double shortfall = cfg.margin * nominal[i] - realized;
        if (shortfall > 0.0) {
          extra[i] += 2.0 * shortfall * sign[i];
          changed = true;
        }
      }
      if (!changed) break;
      out = build();
    }
  }

  EmbedResult result;
  result.psnr = psnr(host, out);
  result.ssim = ssim(host, out);
  result.watermarked = std::move(out);
  return result;
}

}  // namespace hybridmark
