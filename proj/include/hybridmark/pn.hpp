#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmark/image.hpp"

namespace hybridmark {

/// xorshift64* generator. The seed is whitened with the golden-ratio
/// constant so that seed 0 yields a live state; the one seed that whitens
/// to 0 falls back to the constant itself.
class Xorshift64Star {
public:
  static constexpr std::uint64_t kSeedMix = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kMultiplier = 0x2545F4914F6CDD1Dull;

  explicit Xorshift64Star(std::uint64_t seed) noexcept : state_(seed ^ kSeedMix) {
    if (state_ == 0) state_ = kSeedMix;
  }

  std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * kMultiplier;
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the pair's second value is returned on
  /// the following call.
  double normal() noexcept {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

struct PnKey {
  std::uint64_t seed = 0;
};

/// The two +/-1 carriers: seq0 encodes bit 0, seq1 encodes bit 1.
/// seq1 is redrawn from the same stream while it equals seq0 or, for
/// length >= 2, while |<seq0, seq1>| exceeds 0.6 * length.
struct PnPair {
  std::vector<double> seq0;
  std::vector<double> seq1;
};

inline constexpr double kMaxCarrierOverlap = 0.6;

inline PnPair generate_pn_pair(PnKey key, std::size_t length) {
  if (length == 0) throw ContractViolation("PN sequence length must be >= 1");
  Xorshift64Star rng(key.seed);
  auto draw = [&rng, length] {
    std::vector<double> seq(length);
    for (auto& s : seq) s = (rng.next() >> 63) == 0 ? 1.0 : -1.0;
    return seq;
  };
  PnPair pair;
  pair.seq0 = draw();
  auto too_close = [&pair, length] {
    if (pair.seq1 == pair.seq0) return true;
    if (length < 2) return false;
    double d = 0.0;
    for (std::size_t i = 0; i < length; ++i) d += pair.seq0[i] * pair.seq1[i];
    return std::abs(d) > kMaxCarrierOverlap * static_cast<double>(length);
  };
  pair.seq1 = draw();
  while (too_close()) pair.seq1 = draw();
  return pair;
}

/// Parses a 64-bit key written in decimal or 0x-prefixed hex.
inline std::uint64_t parse_key(std::string_view text) {
  std::string s(text);
  int base = 10;
  std::size_t skip = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    skip = 2;
  }
  if (s.size() == skip) throw std::invalid_argument("empty key");
  std::uint64_t value = 0;
  for (std::size_t i = skip; i < s.size(); ++i) {
    const char c = s[i];
    unsigned digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (base == 16 && c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else if (base == 16 && c >= 'A' && c <= 'F') {
      digit = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("invalid key '" + s + "'");
    }
    if (value > (UINT64_MAX - digit) / static_cast<unsigned>(base)) {
      throw std::invalid_argument("key '" + s + "' overflows 64 bits");
    }
    value = value * static_cast<unsigned>(base) + digit;
  }
  return value;
}

}  // namespace hybridmark
