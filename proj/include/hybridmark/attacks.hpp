#pragma once

// Robustness attacks. Every stochastic attack draws from Xorshift64Star
// seeded explicitly, so the same spec always produces the same bytes.
//
// Text form (also the bench config format):
//   none | he
//   gn:var=0.001,seed=7        sp:density=0.001,seed=7
//   lpf:sigma=0.5,win=3        smooth:sigma=0.5,win=3
//   jpeg:qf=90                 crop:frac=0.25,anchor=tl|center
//   rot:deg=0.25               chain:[he|gn:var=0.001,seed=7]

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "hybridmark/image.hpp"
#include "hybridmark/pn.hpp"
#include "hybridmark/transforms.hpp"

namespace hybridmark {

// ---------------------------------------------------------------------------
// Pixel-domain attacks

inline GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed) {
  if (!(variance > 0.0 && variance <= 1.0)) throw ContractViolation("noise variance must be in (0, 1]");
  Xorshift64Star rng(seed);
  const double amplitude = 255.0 * std::sqrt(variance);
  GrayImage out = img;
  for (auto& v : out.values()) v = to_byte(v + amplitude * rng.normal());
  return out;
}

inline GrayImage salt_pepper(const GrayImage& img, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw ContractViolation("salt & pepper density must be in (0, 1]");
  Xorshift64Star rng(seed);
  GrayImage out = round_clip(img);
  for (auto& v : out.values()) {
    if (rng.uniform() < density) v = rng.uniform() < 0.5 ? 0.0 : 255.0;
  }
  return out;
}

inline bool valid_blur_window(int window) noexcept {
  return window == 3 || window == 5 || window == 7 || window == 9;
}

/// Normalized window x window Gaussian, row-major.
inline RealMatrix gaussian_kernel(double sigma, int window) {
  if (!(sigma > 0.0)) throw ContractViolation("blur sigma must be > 0");
  if (!valid_blur_window(window)) throw ContractViolation("blur window must be 3, 5, 7 or 9");
  const auto n = static_cast<std::size_t>(window);
  const double half = static_cast<double>(window / 2);
  RealMatrix k(n, n);
  double sum = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      const double dx = static_cast<double>(x) - half;
      const double dy = static_cast<double>(y) - half;
      k(y, x) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      sum += k(y, x);
    }
  }
  for (auto& v : k.values()) v /= sum;
  return k;
}

/// Convolution with a sampled Gaussian, mirrored borders (edge sample repeated).
inline GrayImage gaussian_blur(const GrayImage& img, double sigma, int window) {
  const RealMatrix k = gaussian_kernel(sigma, window);
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const std::ptrdiff_t r = window / 2;
  auto reflect = [](std::ptrdiff_t i, std::ptrdiff_t n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return static_cast<std::size_t>(i);
  };
  GrayImage out(img.height(), img.width());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          acc += k(static_cast<std::size_t>(dy + r), static_cast<std::size_t>(dx + r)) *
                 img(reflect(y + dy, h), reflect(x + dx, w));
        }
      }
      out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = to_byte(acc);
    }
  }
  return out;
}

/// 256-bin equalization anchored at the darkest occupied bin. A constant
/// image maps to all zeros.
inline GrayImage histogram_equalize(const GrayImage& img) {
  std::array<std::size_t, 256> hist{};
  GrayImage out = round_clip(img);
  for (double v : out.values()) ++hist[static_cast<std::size_t>(v)];
  std::array<std::size_t, 256> cdf{};
  std::size_t run = 0;
  std::size_t cdf_min = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    run += hist[i];
    cdf[i] = run;
    if (cdf_min == 0 && run > 0) cdf_min = run;
  }
  const std::size_t span = run - cdf_min;
  std::array<double, 256> lut{};
  for (std::size_t i = 0; i < 256; ++i) {
    lut[i] = span == 0 || cdf[i] < cdf_min
                 ? 0.0
                 : std::round(255.0 * static_cast<double>(cdf[i] - cdf_min) / static_cast<double>(span));
  }
  for (auto& v : out.values()) v = lut[static_cast<std::size_t>(v)];
  return out;
}

/// Annex K luminance table, row-major.
inline constexpr std::array<int, 64> kJpegLuminance = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

/// libjpeg quality scaling of the luminance table.
inline std::array<int, 64> jpeg_quant_table(int quality) {
  if (quality < 1 || quality > 99) throw ContractViolation("JPEG quality factor must be in [1, 99]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> q{};
  for (std::size_t i = 0; i < 64; ++i) q[i] = std::clamp((kJpegLuminance[i] * scale + 50) / 100, 1, 255);
  return q;
}

/// Baseline JPEG pixel effects: level shift, 8x8 DCT, quantize/dequantize,
/// inverse. Entropy coding is lossless and therefore omitted.
inline GrayImage jpeg_attack(const GrayImage& img, int quality) {
  const auto q = jpeg_quant_table(quality);
  RealMatrix shifted = round_clip(img).pixels();
  for (auto& v : shifted.values()) v -= 128.0;
  DctBlockGrid grid = dct2_blocks(shifted);
  for (std::size_t b = 0; b < grid.block_count(); ++b) {
    auto& block = grid.block(b);
    for (std::size_t i = 0; i < 64; ++i) block[i] = std::round(block[i] / q[i]) * q[i];
  }
  RealMatrix back = idct2_blocks(grid);
  for (auto& v : back.values()) v += 128.0;
  return round_clip(GrayImage(std::move(back)));
}

enum class CropAnchor { kTopLeft, kCenter };

/// Zeroes a rectangle covering `fraction` of the area with the image's aspect ratio.
inline GrayImage crop_attack(const GrayImage& img, double fraction, CropAnchor anchor = CropAnchor::kTopLeft) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ContractViolation("crop fraction must be in (0, 1)");
  const double side = std::sqrt(fraction);
  const auto h = static_cast<std::size_t>(std::lround(static_cast<double>(img.height()) * side));
  const auto w = static_cast<std::size_t>(std::lround(static_cast<double>(img.width()) * side));
  const std::size_t top = anchor == CropAnchor::kCenter ? (img.height() - h) / 2 : 0;
  const std::size_t left = anchor == CropAnchor::kCenter ? (img.width() - w) / 2 : 0;
  GrayImage out = round_clip(img);
  for (std::size_t y = top; y < top + h; ++y) {
    for (std::size_t x = left; x < left + w; ++x) out(y, x) = 0.0;
  }
  return out;
}

/// Counter-clockwise (as displayed) rotation about the image centre with
/// bilinear sampling. Samples falling outside the source are 0.
inline GrayImage rotate_attack(const GrayImage& img, double degrees) {
  if (!(std::abs(degrees) <= 45.0)) throw ContractViolation("rotation angle must be within +/-45 degrees");
  if (degrees == 0.0) return round_clip(img);
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = (static_cast<double>(img.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;
  const double max_x = static_cast<double>(img.width()) - 1.0;
  const double max_y = static_cast<double>(img.height()) - 1.0;
  GrayImage out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      const double sx = cx + c * dx - s * dy;
      const double sy = cy + s * dx + c * dy;
      if (sx < 0.0 || sy < 0.0 || sx > max_x || sy > max_y) continue;
      const auto x0 = static_cast<std::size_t>(sx);
      const auto y0 = static_cast<std::size_t>(sy);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      const double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
      const double bottom = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
      out(y, x) = to_byte(top * (1.0 - fy) + bottom * fy);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attack specifications

struct AttackSpec;

namespace attack {
struct None {
  bool operator==(const None&) const = default;
};
struct GaussianNoise {
  double variance = 0.001;
  std::uint64_t seed = 0;
  bool operator==(const GaussianNoise&) const = default;
};
struct SaltPepper {
  double density = 0.001;
  std::uint64_t seed = 0;
  bool operator==(const SaltPepper&) const = default;
};
struct GaussianLowpass {
  double sigma = 0.5;
  int window = 3;
  bool operator==(const GaussianLowpass&) const = default;
};
struct GaussianSmooth {
  double sigma = 0.5;
  int window = 3;
  bool operator==(const GaussianSmooth&) const = default;
};
struct HistogramEq {
  bool operator==(const HistogramEq&) const = default;
};
struct Jpeg {
  int quality = 90;
  bool operator==(const Jpeg&) const = default;
};
struct Crop {
  double fraction = 0.25;
  CropAnchor anchor = CropAnchor::kTopLeft;
  bool operator==(const Crop&) const = default;
};
struct Rotate {
  double degrees = 0.0;
  bool operator==(const Rotate&) const = default;
};
struct Chain {
  std::vector<AttackSpec> steps;
  bool operator==(const Chain&) const;
};
}  // namespace attack

struct AttackSpec {
  using Params = std::variant<attack::None, attack::GaussianNoise, attack::SaltPepper, attack::GaussianLowpass,
                              attack::GaussianSmooth, attack::HistogramEq, attack::Jpeg, attack::Crop,
                              attack::Rotate, attack::Chain>;
  Params params;

  bool operator==(const AttackSpec&) const = default;
};

inline bool attack::Chain::operator==(const Chain& other) const { return steps == other.steps; }

/// Family name used to group report tables.
inline std::string attack_family(const AttackSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, attack::None>) return "none";
        else if constexpr (std::is_same_v<T, attack::GaussianNoise>) return "gaussian-noise";
        else if constexpr (std::is_same_v<T, attack::SaltPepper>) return "salt-pepper";
        else if constexpr (std::is_same_v<T, attack::GaussianLowpass>) return "gaussian-lowpass";
        else if constexpr (std::is_same_v<T, attack::GaussianSmooth>) return "gaussian-smooth";
        else if constexpr (std::is_same_v<T, attack::HistogramEq>) return "histogram-eq";
        else if constexpr (std::is_same_v<T, attack::Jpeg>) return "jpeg";
        else if constexpr (std::is_same_v<T, attack::Crop>) return "crop";
        else if constexpr (std::is_same_v<T, attack::Rotate>) return "rotate";
        else return "chain";
      },
      spec.params);
}

inline void validate(const AttackSpec& spec) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, attack::GaussianNoise>) {
          if (!(p.variance > 0.0 && p.variance <= 1.0)) throw ContractViolation("gn: var must be in (0, 1]");
        } else if constexpr (std::is_same_v<T, attack::SaltPepper>) {
          if (!(p.density > 0.0 && p.density <= 1.0)) throw ContractViolation("sp: density must be in (0, 1]");
        } else if constexpr (std::is_same_v<T, attack::GaussianLowpass> || std::is_same_v<T, attack::GaussianSmooth>) {
          if (!(p.sigma > 0.0)) throw ContractViolation("blur: sigma must be > 0");
          if (!valid_blur_window(p.window)) throw ContractViolation("blur: win must be 3, 5, 7 or 9");
        } else if constexpr (std::is_same_v<T, attack::Jpeg>) {
          if (p.quality < 1 || p.quality > 99) throw ContractViolation("jpeg: qf must be in [1, 99]");
        } else if constexpr (std::is_same_v<T, attack::Crop>) {
          if (!(p.fraction > 0.0 && p.fraction < 1.0)) throw ContractViolation("crop: frac must be in (0, 1)");
        } else if constexpr (std::is_same_v<T, attack::Rotate>) {
          if (!(std::abs(p.degrees) <= 45.0)) throw ContractViolation("rot: deg must be within +/-45");
        } else if constexpr (std::is_same_v<T, attack::Chain>) {
          for (const auto& step : p.steps) validate(step);
        }
      },
      spec.params);
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec);

/// Left-to-right composition.
inline GrayImage apply_chain(const GrayImage& img, const std::vector<AttackSpec>& steps) {
  GrayImage cur = img;
  for (const auto& step : steps) cur = apply_attack(cur, step);
  return cur;
}

inline GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
  return std::visit(
      [&img](const auto& p) -> GrayImage {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, attack::None>) return img;
        else if constexpr (std::is_same_v<T, attack::GaussianNoise>) return gaussian_noise(img, p.variance, p.seed);
        else if constexpr (std::is_same_v<T, attack::SaltPepper>) return salt_pepper(img, p.density, p.seed);
        else if constexpr (std::is_same_v<T, attack::GaussianLowpass> || std::is_same_v<T, attack::GaussianSmooth>)
          return gaussian_blur(img, p.sigma, p.window);
        else if constexpr (std::is_same_v<T, attack::HistogramEq>) return histogram_equalize(img);
        else if constexpr (std::is_same_v<T, attack::Jpeg>) return jpeg_attack(img, p.quality);
        else if constexpr (std::is_same_v<T, attack::Crop>) return crop_attack(img, p.fraction, p.anchor);
        else if constexpr (std::is_same_v<T, attack::Rotate>) return rotate_attack(img, p.degrees);
        else return apply_chain(img, p.steps);
      },
      spec.params);
}

// ---------------------------------------------------------------------------
// Token grammar

class AttackParseError : public std::invalid_argument {
public:
  AttackParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

namespace detail {

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::to_string(v);
}

class AttackParser {
public:
  explicit AttackParser(std::string_view text) : text_(text) {}

  AttackSpec parse_all() {
    AttackSpec spec = parse_token();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return spec;
  }

private:
  struct Param {
    std::string key;
    std::string value;
    std::size_t at;
  };

  [[noreturn]] void fail(const std::string& what) const { throw AttackParseError(what, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string identifier() {
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = text_[pos_];
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string value() {
    const std::size_t start = pos_;
    while (!at_end() && peek() != ',' && peek() != '|' && peek() != ']' && peek() != '[') ++pos_;
    if (start == pos_) fail("expected a value");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    do {
      if (!out.empty()) ++pos_;  // ','
      Param p;
      p.at = pos_;
      p.key = identifier();
      if (peek() != '=') fail("expected '=' after '" + p.key + "'");
      ++pos_;
      p.value = value();
      out.push_back(std::move(p));
    } while (peek() == ',');
    return out;
  }

  double number(const Param& p) const {
    double v = 0.0;
    const char* first = p.value.data();
    const char* last = first + p.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
      throw AttackParseError("invalid number '" + p.value + "' for '" + p.key + "'", p.at);
    }
    return v;
  }

  int integer(const Param& p) const {
    int v = 0;
    auto [ptr, ec] = std::from_chars(p.value.data(), p.value.data() + p.value.size(), v);
    if (ec != std::errc{} || ptr != p.value.data() + p.value.size()) {
      throw AttackParseError("invalid integer '" + p.value + "' for '" + p.key + "'", p.at);
    }
    return v;
  }

  std::uint64_t seed(const Param& p) const {
    try {
      return parse_key(p.value);
    } catch (const std::invalid_argument&) {
      throw AttackParseError("invalid seed '" + p.value + "'", p.at);
    }
  }

  template <typename Handler>
  void each(const std::vector<Param>& ps, const std::vector<std::string>& required, Handler&& handle) const {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (ps[j].key == ps[i].key) throw AttackParseError("duplicate parameter '" + ps[i].key + "'", ps[i].at);
      }
      if (!handle(ps[i])) throw AttackParseError("unknown parameter '" + ps[i].key + "'", ps[i].at);
    }
    for (const auto& key : required) {
      const bool found = std::any_of(ps.begin(), ps.end(), [&](const Param& p) { return p.key == key; });
      if (!found) throw AttackParseError("missing parameter '" + key + "'", pos_);
    }
  }

  AttackSpec parse_token() {
    const std::size_t name_at = pos_;
    const std::string name = identifier();
    const bool has_body = peek() == ':';
    if (has_body) ++pos_;

    auto no_body = [&](AttackSpec spec) {
      if (has_body) throw AttackParseError("'" + name + "' takes no parameters", name_at);
      return spec;
    };
    auto body = [&] {
      if (!has_body) throw AttackParseError("'" + name + "' needs parameters", name_at);
      return params();
    };

    AttackSpec spec;
    if (name == "none") {
      spec = no_body({attack::None{}});
    } else if (name == "he") {
      spec = no_body({attack::HistogramEq{}});
    } else if (name == "gn") {
      attack::GaussianNoise p;
      each(body(), {"var"}, [&](const Param& kv) {
        if (kv.key == "var") p.variance = number(kv);
        else if (kv.key == "seed") p.seed = seed(kv);
        else return false;
        return true;
      });
      spec = {p};
    } else if (name == "sp") {
      attack::SaltPepper p;
      each(body(), {"density"}, [&](const Param& kv) {
        if (kv.key == "density") p.density = number(kv);
        else if (kv.key == "seed") p.seed = seed(kv);
        else return false;
        return true;
      });
      spec = {p};
    } else if (name == "lpf" || name == "smooth") {
      double sigma = 0.0;
      int window = 3;
      each(body(), {"sigma"}, [&](const Param& kv) {
        if (kv.key == "sigma") sigma = number(kv);
        else if (kv.key == "win") window = integer(kv);
        else return false;
        return true;
      });
      if (name == "lpf") spec = {attack::GaussianLowpass{sigma, window}};
      else spec = {attack::GaussianSmooth{sigma, window}};
    } else if (name == "jpeg") {
      attack::Jpeg p;
      each(body(), {"qf"}, [&](const Param& kv) {
        if (kv.key != "qf") return false;
        p.quality = integer(kv);
        return true;
      });
      spec = {p};
    } else if (name == "crop") {
      attack::Crop p;
      each(body(), {"frac"}, [&](const Param& kv) {
        if (kv.key == "frac") {
          p.fraction = number(kv);
        } else if (kv.key == "anchor") {
          if (kv.value == "tl") p.anchor = CropAnchor::kTopLeft;
          else if (kv.value == "center") p.anchor = CropAnchor::kCenter;
          else throw AttackParseError("anchor must be 'tl' or 'center'", kv.at);
        } else {
          return false;
        }
        return true;
      });
      spec = {p};
    } else if (name == "rot") {
      attack::Rotate p;
      each(body(), {"deg"}, [&](const Param& kv) {
        if (kv.key != "deg") return false;
        p.degrees = number(kv);
        return true;
      });
      spec = {p};
    } else if (name == "chain") {
      if (!has_body || peek() != '[') fail("chain expects '[' step | step ... ']'");
      ++pos_;
      attack::Chain chain;
      if (peek() != ']') {
        chain.steps.push_back(parse_token());
        while (peek() == '|') {
          ++pos_;
          chain.steps.push_back(parse_token());
        }
      }
      if (peek() != ']') fail("expected ']' to close chain");
      ++pos_;
      spec = {std::move(chain)};
    } else {
      throw AttackParseError("unknown attack '" + name + "'", name_at);
    }

    try {
      validate(spec);
    } catch (const ContractViolation& e) {
      throw AttackParseError(e.what(), name_at);
    }
    return spec;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline AttackSpec parse_attack(std::string_view token) { return detail::AttackParser(token).parse_all(); }

/// Canonical token; parse_attack(attack_token(s)) == s.
inline std::string attack_token(const AttackSpec& spec) {
  using detail::format_number;
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, attack::None>) return "none";
        else if constexpr (std::is_same_v<T, attack::HistogramEq>) return "he";
        else if constexpr (std::is_same_v<T, attack::GaussianNoise>)
          return "gn:var=" + format_number(p.variance) + ",seed=" + std::to_string(p.seed);
        else if constexpr (std::is_same_v<T, attack::SaltPepper>)
          return "sp:density=" + format_number(p.density) + ",seed=" + std::to_string(p.seed);
        else if constexpr (std::is_same_v<T, attack::GaussianLowpass>)
          return "lpf:sigma=" + format_number(p.sigma) + ",win=" + std::to_string(p.window);
        else if constexpr (std::is_same_v<T, attack::GaussianSmooth>)
          return "smooth:sigma=" + format_number(p.sigma) + ",win=" + std::to_string(p.window);
        else if constexpr (std::is_same_v<T, attack::Jpeg>) return "jpeg:qf=" + std::to_string(p.quality);
        else if constexpr (std::is_same_v<T, attack::Crop>)
          return "crop:frac=" + format_number(p.fraction) +
                 ",anchor=" + (p.anchor == CropAnchor::kCenter ? "center" : "tl");
        else if constexpr (std::is_same_v<T, attack::Rotate>) return "rot:deg=" + format_number(p.degrees);
        else {
          std::string out = "chain:[";
          for (std::size_t i = 0; i < p.steps.size(); ++i) {
            if (i) out += '|';
            out += attack_token(p.steps[i]);
          }
          return out + "]";
        }
      },
      spec.params);
}

}  // namespace hybridmark
