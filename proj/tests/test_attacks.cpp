#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

using namespace hybridmark;

namespace {

void expect_eight_bit(const GrayImage& img, const GrayImage& ref) {
  ASSERT_TRUE(img.same_shape(ref));
  for (double v : img.values()) {
    ASSERT_EQ(v, std::round(v));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 255.0);
  }
}

}  // namespace

TEST(GaussianNoise, EmpiricalVarianceOnConstantImage) {
  const GrayImage flat(512, 512, 128.0);
  const auto noisy = gaussian_noise(flat, 0.001, 7);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < flat.pixel_count(); ++i) {
    const double d = (noisy.values()[i] - 128.0) / 255.0;
    s += d;
    s2 += d * d;
  }
  const double n = static_cast<double>(flat.pixel_count());
  const double var = s2 / n - (s / n) * (s / n);
  EXPECT_GE(var, 0.0009);
  EXPECT_LE(var, 0.0011);
}

TEST(GaussianNoise, VanishingVarianceStaysWithinOne) {
  std::mt19937_64 rng(51);
  const auto img = hmtest::random_bytes_image(rng, 32, 32);
  const auto out = gaussian_noise(img, 1e-12, 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) EXPECT_LE(std::abs(out.values()[i] - img.values()[i]), 1.0);
  EXPECT_THROW(gaussian_noise(img, 0.0, 1), ContractViolation);
}

TEST(SaltPepper, ChangedFractionNearDensity) {
  const GrayImage flat(512, 512, 128.0);
  const auto out = salt_pepper(flat, 0.01, 9);
  std::size_t changed = 0;
  for (double v : out.values()) changed += v != 128.0;
  const double frac = static_cast<double>(changed) / static_cast<double>(flat.pixel_count());
  EXPECT_NEAR(frac, 0.01, 0.002);
}

TEST(SaltPepper, FullDensityIsBinary) {
  const auto out = salt_pepper(GrayImage(64, 64, 128.0), 1.0, 2);
  std::set<double> seen(out.values().begin(), out.values().end());
  EXPECT_EQ(seen, (std::set<double>{0.0, 255.0}));
}

TEST(GaussianBlur, KernelValues) {
  const auto k = gaussian_kernel(0.5, 3);
  EXPECT_NEAR(k(1, 1), 0.6193, 1e-4);
  EXPECT_NEAR(k(0, 1), 0.0838, 1e-4);
  EXPECT_NEAR(k(0, 0), 0.0113, 1e-4);
  double sum = 0.0;
  const auto wide = gaussian_kernel(2.0, 9);
  for (double v : wide.values()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(GaussianBlur, ConstantImageUnchanged) {
  const GrayImage flat(16, 16, 77.0);
  for (int w : {3, 5, 7, 9}) EXPECT_EQ(gaussian_blur(flat, 1.3, w), flat);
  EXPECT_THROW(gaussian_blur(flat, 0.5, 4), ContractViolation);
  EXPECT_THROW(gaussian_blur(flat, 0.0, 3), ContractViolation);
}

TEST(GaussianBlur, MatchesDirectConvolutionAtInteriorPixel) {
  std::mt19937_64 rng(52);
  const auto img = hmtest::random_bytes_image(rng, 16, 16);
  const auto k = gaussian_kernel(0.8, 5);
  double acc = 0.0;
  for (std::size_t dy = 0; dy < 5; ++dy)
    for (std::size_t dx = 0; dx < 5; ++dx) acc += k(dy, dx) * img(6 + dy, 4 + dx);
  EXPECT_EQ(gaussian_blur(img, 0.8, 5)(8, 6), to_byte(acc));
}

TEST(HistogramEq, TwoLevelImageUnchanged) {
  GrayImage img(16, 16);
  for (std::size_t y = 8; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) img(y, x) = 255.0;
  EXPECT_EQ(histogram_equalize(img), img);
}

TEST(HistogramEq, ConstantMapsToZero) {
  const auto out = histogram_equalize(GrayImage(16, 16, 90.0));
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(HistogramEq, SpreadsToFullRange) {
  const auto out = histogram_equalize(hmtest::camera());
  const auto [lo, hi] = std::minmax_element(out.values().begin(), out.values().end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 255.0);
}

TEST(Jpeg, QuantTableScaling) {
  EXPECT_EQ(jpeg_quant_table(50), kJpegLuminance);
  const auto q90 = jpeg_quant_table(90);
  EXPECT_EQ(q90[0], 3);   // (16*20+50)/100
  EXPECT_EQ(q90[63], 20);  // (99*20+50)/100
  const auto q10 = jpeg_quant_table(10);
  EXPECT_EQ(q10[0], 80);
  EXPECT_EQ(q10[63], 255);
  EXPECT_EQ(jpeg_quant_table(99)[1], 1);
  EXPECT_THROW(jpeg_quant_table(100), ContractViolation);
}

TEST(Jpeg, HighQualityNearlyLossless) {
  const auto cam = hmtest::camera();
  EXPECT_GE(psnr(cam, jpeg_attack(cam, 99)), 45.0);
}

TEST(Jpeg, LowerQualityDistortsMore) {
  const auto cam = hmtest::camera();
  const double m10 = mse(cam, jpeg_attack(cam, 10));
  const double m50 = mse(cam, jpeg_attack(cam, 50));
  const double m90 = mse(cam, jpeg_attack(cam, 90));
  EXPECT_GE(m10, m50);
  EXPECT_GE(m50, m90);
}

TEST(Crop, QuarterTopLeft) {
  const GrayImage img(512, 512, 200.0);
  const auto out = crop_attack(img, 0.25);
  for (std::size_t y = 0; y < 512; ++y)
    for (std::size_t x = 0; x < 512; ++x) ASSERT_EQ(out(y, x), (y < 256 && x < 256) ? 0.0 : 200.0);
}

TEST(Crop, CenterAnchor) {
  const auto out = crop_attack(GrayImage(64, 64, 1.0), 0.25, CropAnchor::kCenter);
  EXPECT_EQ(out(16, 16), 0.0);
  EXPECT_EQ(out(47, 47), 0.0);
  EXPECT_EQ(out(15, 16), 1.0);
  EXPECT_EQ(out(48, 48), 1.0);
}

TEST(Rotate, ZeroIsIdentityAndEdgesBlank) {
  std::mt19937_64 rng(53);
  const auto img = hmtest::random_bytes_image(rng, 32, 32);
  EXPECT_EQ(rotate_attack(img, 0.0), img);
  const auto r = rotate_attack(GrayImage(64, 64, 100.0), 30.0);
  EXPECT_EQ(r(0, 0), 0.0);
  EXPECT_EQ(r(32, 32), 100.0);
  EXPECT_THROW(rotate_attack(img, 46.0), ContractViolation);
}

TEST(Rotate, BilinearSamplingOfHorizontalRamp) {
  // The ramp is constant along y, so the sample is 10 * source x.
  GrayImage ramp(16, 16);
  for (std::size_t y = 0; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) ramp(y, x) = static_cast<double>(10 * x);
  const double deg = 5.0;
  const auto r = rotate_attack(ramp, deg);
  const double t = deg * std::numbers::pi / 180.0;
  const double c = 7.5;
  const double dx = 10.0 - c, dy = 7.0 - c;
  const double sx = c + std::cos(t) * dx - std::sin(t) * dy;
  EXPECT_EQ(r(7, 10), to_byte(10.0 * sx));
}

TEST(Attacks, PreserveShapeRangeAndSeeds) {
  std::mt19937_64 rng(54);
  const auto img = hmtest::random_bytes_image(rng, 64, 64);
  for (const char* token : {"gn:var=0.01,seed=3", "sp:density=0.05,seed=3", "lpf:sigma=1,win=5", "smooth:sigma=0.5,win=3",
                            "he", "jpeg:qf=30", "crop:frac=0.5,anchor=center", "rot:deg=-7.5",
                            "chain:[he|gn:var=0.001,seed=7|jpeg:qf=90]"}) {
    const auto spec = parse_attack(token);
    const auto a = apply_attack(img, spec);
    expect_eight_bit(a, img);
    EXPECT_EQ(a, apply_attack(img, spec)) << token;
  }
  EXPECT_NE(gaussian_noise(img, 0.01, 1), gaussian_noise(img, 0.01, 2));
}

TEST(Chain, EmptyIsIdentityAndOrderMatters) {
  std::mt19937_64 rng(55);
  const auto img = hmtest::random_bytes_image(rng, 32, 32);
  EXPECT_EQ(apply_chain(img, {}), img);
  EXPECT_EQ(apply_attack(img, parse_attack("chain:[]")), img);
  const auto he_then_blur = apply_attack(img, parse_attack("chain:[he|lpf:sigma=1,win=3]"));
  EXPECT_EQ(he_then_blur, gaussian_blur(histogram_equalize(img), 1.0, 3));
}

TEST(AttackTokens, RoundTripCanonicalForm) {
  for (const char* token : {"none", "he", "gn:var=0.001,seed=7", "sp:density=0.001,seed=7", "lpf:sigma=0.5,win=9",
                            "smooth:sigma=0.5,win=3", "jpeg:qf=90", "crop:frac=0.25,anchor=tl",
                            "crop:frac=0.5,anchor=center", "rot:deg=0.25", "chain:[he|gn:var=0.001,seed=7]",
                            "chain:[chain:[he]|none]"}) {
    const auto spec = parse_attack(token);
    EXPECT_EQ(attack_token(spec), token);
    EXPECT_EQ(parse_attack(attack_token(spec)), spec);
  }
}

TEST(AttackTokens, DefaultsAndFamilies) {
  EXPECT_EQ(attack_token(parse_attack("gn:var=0.001")), "gn:var=0.001,seed=0");
  EXPECT_EQ(attack_token(parse_attack("lpf:sigma=2")), "lpf:sigma=2,win=3");
  EXPECT_EQ(attack_token(parse_attack("crop:frac=0.25")), "crop:frac=0.25,anchor=tl");
  EXPECT_EQ(attack_family(parse_attack("jpeg:qf=50")), "jpeg");
  EXPECT_EQ(attack_family(parse_attack("chain:[he]")), "chain");
}

TEST(AttackTokens, ErrorsCarryPosition) {
  auto position = [](const char* token) -> std::size_t {
    try {
      parse_attack(token);
    } catch (const AttackParseError& e) {
      return e.position();
    }
    return std::string::npos;
  };
  EXPECT_EQ(position("blur:sigma=1"), 0u);
  EXPECT_EQ(position("jpeg:qf=ninety"), 5u);
  EXPECT_EQ(position("jpeg:q=90"), 5u);
  EXPECT_EQ(position("gn:var=0.001,seed=7,var=0.1"), 20u);
  EXPECT_EQ(position("chain:[he|jpeg:qf=90"), 20u);
  EXPECT_EQ(position("he:x=1"), 0u);
  EXPECT_EQ(position("jpeg:qf=100"), 0u);
  EXPECT_EQ(position("lpf:sigma=0.5,win=4"), 0u);
  EXPECT_EQ(position("crop:frac=0.25,anchor=middle"), 15u);
  EXPECT_EQ(position("rot"), 0u);
  EXPECT_EQ(position("none trailing"), 4u);
}
