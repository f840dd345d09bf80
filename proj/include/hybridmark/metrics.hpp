#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "hybridmark/image.hpp"

namespace hybridmark {

struct QualityReport {
  double mse = 0.0;
  double psnr = 0.0;
  double ssim = 1.0;
};

struct RobustnessScore {
  double nc = 0.0;
  double ber = 0.0;
};

namespace detail {

inline void require_same_shape(const GrayImage& a, const GrayImage& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ContractViolation(std::string(what) + ": image shapes differ (" + std::to_string(a.height()) + "x" +
                            std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                            std::to_string(b.width()) + ")");
  }
}

inline void require_same_shape(const WatermarkBits& a, const WatermarkBits& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation(std::string(what) + ": watermark shapes differ");
  }
}

// Half-sample symmetric reflection: -1 -> 0, n -> n-1.
inline std::size_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return static_cast<std::size_t>(i);
}

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

inline const std::array<double, kSsimWindow>& ssim_kernel() {
  static const auto k = [] {
    std::array<double, kSsimWindow> w{};
    const double half = static_cast<double>(kSsimWindow / 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < kSsimWindow; ++i) {
      const double d = static_cast<double>(i) - half;
      w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
      sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
  }();
  return k;
}

// Separable Gaussian filter with symmetric boundaries.
inline RealMatrix gaussian_filter(const RealMatrix& in) {
  const auto& k = ssim_kernel();
  const auto h = static_cast<std::ptrdiff_t>(in.rows());
  const auto w = static_cast<std::ptrdiff_t>(in.cols());
  const auto r = static_cast<std::ptrdiff_t>(kSsimWindow / 2);
  RealMatrix tmp(in.rows(), in.cols());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t t = -r; t <= r; ++t) acc += k[static_cast<std::size_t>(t + r)] * in(static_cast<std::size_t>(y), reflect(x + t, w));
      tmp(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = acc;
    }
  }
  RealMatrix out(in.rows(), in.cols());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t t = -r; t <= r; ++t) acc += k[static_cast<std::size_t>(t + r)] * tmp(reflect(y + t, h), static_cast<std::size_t>(x));
      out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = acc;
    }
  }
  return out;
}

}  // namespace detail

inline double mse(const GrayImage& a, const GrayImage& b) {
  detail::require_same_shape(a, b, "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.pixel_count());
}

/// Peak signal-to-noise ratio in dB with MAX = 255; +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

/// Mean SSIM over an 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03.
inline double ssim(const GrayImage& a, const GrayImage& b) {
  detail::require_same_shape(a, b, "ssim");
  if (a.height() < detail::kSsimWindow || a.width() < detail::kSsimWindow) {
    throw ContractViolation("ssim needs both sides >= 11");
  }
  constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);

  const std::size_t n = a.pixel_count();
  RealMatrix aa(a.height(), a.width()), bb(a.height(), a.width()), ab(a.height(), a.width());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a.values()[i];
    const double y = b.values()[i];
    aa.values()[i] = x * x;
    bb.values()[i] = y * y;
    ab.values()[i] = x * y;
  }
  const RealMatrix mu_a = detail::gaussian_filter(a.pixels());
  const RealMatrix mu_b = detail::gaussian_filter(b.pixels());
  const RealMatrix e_aa = detail::gaussian_filter(aa);
  const RealMatrix e_bb = detail::gaussian_filter(bb);
  const RealMatrix e_ab = detail::gaussian_filter(ab);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = mu_a.values()[i];
    const double mb = mu_b.values()[i];
    const double var_a = e_aa.values()[i] - ma * ma;
    const double var_b = e_bb.values()[i] - mb * mb;
    const double cov = e_ab.values()[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return total / static_cast<double>(n);
}

inline QualityReport quality(const GrayImage& reference, const GrayImage& test) {
  QualityReport q;
  q.mse = mse(reference, test);
  q.psnr = q.mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(255.0 * 255.0 / q.mse);
  q.ssim = ssim(reference, test);
  return q;
}

/// Normalized correlation sum(w w') / (|w| |w'|); 0 if either side is all zero.
inline double nc(const WatermarkBits& w, const WatermarkBits& w2) {
  detail::require_same_shape(w, w2, "nc");
  double cross = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w.values()[i];
    const double y = w2.values()[i];
    cross += x * y;
    norm_a += x * x;
    norm_b += y * y;
  }
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return cross / std::sqrt(norm_a * norm_b);
}

/// Fraction of differing bits.
inline double ber(const WatermarkBits& w, const WatermarkBits& w2) {
  detail::require_same_shape(w, w2, "ber");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < w.size(); ++i) diff += w.values()[i] != w2.values()[i];
  return static_cast<double>(diff) / static_cast<double>(w.size());
}

inline RobustnessScore robustness(const WatermarkBits& original, const WatermarkBits& extracted) {
  return {nc(original, extracted), ber(original, extracted)};
}

}  // namespace hybridmark
