#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace hybridmark;

namespace {

EmbedConfig keys(std::uint64_t pn, std::uint64_t arnold, const WatermarkBits& wm) {
  EmbedConfig cfg;
  cfg.pn_key = {pn};
  cfg.arnold_key = {arnold};
  cfg.watermark_rows = wm.rows();
  cfg.watermark_cols = wm.cols();
  return cfg;
}

struct Marked {
  WatermarkBits logo;
  EmbedResult result;
};

const Marked& camera_small_logo() {
  static const Marked m = [] {
    const auto logo = hmtest::small_logo();
    return Marked{logo, embed(hmtest::camera(), logo, keys(1, 24, logo))};
  }();
  return m;
}

}  // namespace

TEST(Embed, RoundTripIsExact) {
  const auto& m = camera_small_logo();
  EXPECT_EQ(extract(m.result.watermarked, keys(1, 24, m.logo)), m.logo);
}

TEST(Embed, SurvivesPgmFileRoundTrip) {
  const auto& m = camera_small_logo();
  const auto reread = parse_pgm(format_pgm(m.result.watermarked));
  EXPECT_EQ(nc(m.logo, extract(reread, keys(1, 24, m.logo))), 1.0);
}

TEST(Embed, OutputIsEightBitAndSameShape) {
  const auto& m = camera_small_logo();
  EXPECT_EQ(m.result.watermarked.height(), 512u);
  for (double v : m.result.watermarked.values()) {
    ASSERT_EQ(v, std::round(v));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 255.0);
  }
  EXPECT_EQ(m.result.psnr, psnr(hmtest::camera(), m.result.watermarked));
}

TEST(Embed, ZeroStrengthIsRoundClipOfHost) {
  const auto host = hmtest::camera();
  const auto logo = hmtest::small_logo();
  auto cfg = keys(1, 24, logo);
  cfg.strength = 0.0;
  const auto r = embed(host, logo, cfg);
  EXPECT_EQ(r.watermarked, round_clip(host));
  EXPECT_LT(nc(logo, extract(r.watermarked, cfg)), 0.8);
}

TEST(Embed, CapacityErrorWhenLogoTooLarge) {
  const GrayImage host(64, 64, 128.0);
  const WatermarkBits logo(100, 100);
  EXPECT_THROW(embed(host, logo, EmbedConfig{}), CapacityError);
  auto cfg = keys(1, 24, logo);
  EXPECT_THROW(extract(host, cfg), CapacityError);
}

TEST(Embed, NegativeStrengthRejected) {
  EmbedConfig cfg;
  cfg.strength = -1.0;
  EXPECT_THROW(embed(GrayImage(64, 64), WatermarkBits(2, 2), cfg), ContractViolation);
}

TEST(Extract, WrongPnKeyLosesLogo) {
  const auto& m = camera_small_logo();
  for (std::uint64_t wrong = 2; wrong < 22; ++wrong) {
    EXPECT_LT(nc(m.logo, extract(m.result.watermarked, keys(wrong, 24, m.logo))), 0.8) << wrong;
  }
}

TEST(Extract, WrongArnoldKeyLosesLogo) {
  // 24 iterations are a whole period for the 32x32 packing of a 19x52 logo,
  // so wrong keys that differ by a multiple of 24 would still decode.
  const auto& m = camera_small_logo();
  for (std::uint64_t wrong : {1u, 5u, 10u, 23u, 25u, 50u}) {
    EXPECT_LT(nc(m.logo, extract(m.result.watermarked, keys(1, wrong, m.logo))), 0.8) << wrong;
  }
}

TEST(Extract, UnmarkedNoiseImagesGiveChanceLevel) {
  std::mt19937_64 rng(41);
  const auto logo = hmtest::small_logo();
  for (int i = 0; i < 20; ++i) {
    const auto noise = hmtest::random_bytes_image(rng, 256, 256);
    EXPECT_LT(nc(logo, extract(noise, keys(1, 24, logo))), 0.8);
  }
}

TEST(Extract, TieBreaksToZero) {
  EXPECT_EQ((BlockCorrelation{0.25, 0.25}.bit()), 0);
  EXPECT_EQ((BlockCorrelation{0.1, 0.2}.bit()), 1);
}

TEST(Embed, RoundTripPropertyOverHostsLogosAndKeys) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> key;
  std::uniform_int_distribution<std::size_t> side(8, 16);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t h = side(rng) * 8, w = side(rng) * 8;
    GrayImage host(h, w);
    if (trial % 2) {
      host = hmtest::random_bytes_image(rng, h, w);
    } else {
      const auto base = synthetic_image(key(rng), static_cast<std::size_t>(trial), 128);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) host(y, x) = base(y, x);
    }
    const std::size_t blocks = (h / 8) * (w / 8);
    const auto logo = hmtest::random_bits(rng, 1 + blocks / 16, 8, 0.4);
    auto cfg = keys(key(rng), key(rng) % 200, logo);
    const auto r = embed(host, logo, cfg);
    EXPECT_EQ(extract(r.watermarked, cfg), logo) << "trial " << trial;
  }
}

TEST(Embed, SquareLogoRoundTrip) {
  const auto logo = hmtest::square_logo();
  const auto cfg = keys(99, 24, logo);
  const auto r = embed(read_pgm(hmtest::data_dir() / "astronaut.pgm"), logo, cfg);
  EXPECT_EQ(extract(r.watermarked, cfg), logo);
}

TEST(Embed, PsnrStrictlyDecreasesWithStrength) {
  const auto host = hmtest::camera();
  const auto logo = hmtest::small_logo();
  double last = std::numeric_limits<double>::infinity();
  for (double k : {2400.0, 4800.0, 9600.0, 19200.0}) {
    auto cfg = keys(1, 24, logo);
    cfg.strength = k;
    const auto r = embed(host, logo, cfg);
    EXPECT_LT(r.psnr, last) << k;
    last = r.psnr;
  }
}

TEST(Embed, DftOnlyDomainRoundTrips) {
  const auto logo = hmtest::small_logo();
  auto cfg = keys(1, 24, logo);
  cfg.domain = EmbedDomain::kDftOnly;
  const auto r = embed(hmtest::camera(), logo, cfg);
  EXPECT_EQ(extract(r.watermarked, cfg), logo);
}

TEST(Embed, PlainAdditiveRuleWithoutCompensation) {
  // Without host compensation the scheme is the bare additive rule; it still
  // recovers most bits on a photo but not all of them.
  const auto logo = hmtest::small_logo();
  auto cfg = keys(1, 24, logo);
  cfg.host_compensation = false;
  const auto r = embed(hmtest::camera(), logo, cfg);
  EXPECT_GT(nc(logo, extract(r.watermarked, cfg)), 0.9);
}
