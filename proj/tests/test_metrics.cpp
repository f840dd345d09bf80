#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "test_support.hpp"

using namespace hybridmark;

TEST(Psnr, IdenticalIsInfinite) {
  const GrayImage a(16, 16, 9.0);
  EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
}

TEST(Psnr, UnitErrorEverywhere) {
  std::mt19937_64 rng(31);
  const auto a = hmtest::random_bytes_image(rng, 32, 32);
  GrayImage b = a;
  for (auto& v : b.values()) v = v < 255 ? v + 1 : v - 1;
  EXPECT_NEAR(psnr(a, b), 48.1308, 1e-3);
}

TEST(Psnr, StrictlyDecreasesWithErrorSize) {
  const GrayImage a(16, 16, 100.0);
  double last = std::numeric_limits<double>::infinity();
  for (double e : {1.0, 2.0, 4.0, 8.0}) {
    const GrayImage b(16, 16, 100.0 + e);
    EXPECT_LT(psnr(a, b), last);
    last = psnr(a, b);
  }
}

TEST(Psnr, ShapeMismatchIsContractViolation) {
  EXPECT_THROW(psnr(GrayImage(8, 8), GrayImage(16, 8)), ContractViolation);
  EXPECT_THROW(ssim(GrayImage(16, 16), GrayImage(16, 24)), ContractViolation);
}

TEST(Ssim, SelfIsExactlyOne) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 5; ++i) {
    const auto a = hmtest::random_bytes_image(rng, 24, 32);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
  const auto cam = hmtest::camera();
  EXPECT_EQ(ssim(cam, cam), 1.0);
}

TEST(Ssim, NegativeOfHighContrastImageIsLow) {
  GrayImage a(32, 32);
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 0; x < 32; ++x) a(y, x) = ((x / 4 + y / 4) % 2) ? 255.0 : 0.0;
  GrayImage neg = a;
  for (auto& v : neg.values()) v = 255.0 - v;
  EXPECT_LT(ssim(a, neg), 0.5);
}

TEST(Ssim, NeedsElevenPixelSides) { EXPECT_THROW(ssim(GrayImage(8, 16), GrayImage(8, 16)), ContractViolation); }

TEST(MetricSymmetry, PsnrSsimNc) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 10; ++i) {
    const auto a = hmtest::random_bytes_image(rng, 16, 16);
    const auto b = hmtest::random_bytes_image(rng, 16, 16);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_DOUBLE_EQ(ssim(a, b), ssim(b, a));
    const auto w = hmtest::random_bits(rng, 19, 52);
    const auto v = hmtest::random_bits(rng, 19, 52);
    EXPECT_DOUBLE_EQ(nc(w, v), nc(v, w));
    EXPECT_EQ(ber(w, v), ber(v, w));
  }
}

TEST(Nc, IdentityComplementAndZero) {
  std::mt19937_64 rng(34);
  const auto w = hmtest::random_bits(rng, 19, 52);
  EXPECT_DOUBLE_EQ(nc(w, w), 1.0);
  WatermarkBits comp(19, 52);
  for (std::size_t r = 0; r < 19; ++r)
    for (std::size_t c = 0; c < 52; ++c) comp.set(r, c, !w(r, c));
  EXPECT_EQ(nc(w, comp), 0.0);
  EXPECT_EQ(nc(w, WatermarkBits(19, 52)), 0.0);
  EXPECT_EQ(ber(w, comp), 1.0);
  EXPECT_EQ(ber(w, w), 0.0);
}

TEST(Nc, IndependentRandomBitsNearHalf) {
  std::mt19937_64 rng(35);
  const auto a = hmtest::random_bits(rng, 19, 52);
  const auto b = hmtest::random_bits(rng, 19, 52);
  EXPECT_GE(nc(a, b), 0.35);
  EXPECT_LE(nc(a, b), 0.65);
}

TEST(Nc, OneIffEqualForNonZero) {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 50; ++i) {
    const auto a = hmtest::random_bits(rng, 4, 5, 0.3);
    const auto b = hmtest::random_bits(rng, 4, 5, 0.3);
    if (a.popcount() == 0 || b.popcount() == 0) continue;
    const double v = nc(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-15);
    EXPECT_EQ(v >= 1.0 - 1e-12, a == b);
  }
}

TEST(Ber, SingleFlip) {
  const auto logo = hmtest::small_logo();
  WatermarkBits flipped = logo;
  flipped.set(3, 7, !logo(3, 7));
  EXPECT_EQ(ber(logo, flipped), 1.0 / 988.0);
}
