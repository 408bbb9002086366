// Copyright 2026 The camfail Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "camfail/transforms.hpp"
#include "support/test_support.hpp"

namespace camfail::transforms {
namespace {

ImageBuffer plane3x3_center9() {
  ImageBuffer img(3, 3, 0);
  img.set_pixel(1, 1, 9, 9, 9);
  return img;
}

int changed_pixels(const ImageBuffer& a, const ImageBuffer& b) {
  int n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        if (a.at(x, y, c) != b.at(x, y, c)) {
          ++n;
          break;
        }
      }
    }
  }
  return n;
}

TEST(Reflect101Test, MirrorsWithoutRepeatingEdge) {
  EXPECT_EQ(reflect101(-1, 5), 1);
  EXPECT_EQ(reflect101(-2, 5), 2);
  EXPECT_EQ(reflect101(5, 5), 3);
  EXPECT_EQ(reflect101(6, 5), 2);
  EXPECT_EQ(reflect101(3, 5), 3);
  EXPECT_EQ(reflect101(-3, 1), 0);
}

TEST(BlurTest, KernelOneIsIdentity) {
  const auto img = testing::random_image(17, 9, 1);
  EXPECT_EQ(blur(img, 1), img);
}

TEST(BlurTest, UniformImageUnchanged) {
  const ImageBuffer img(20, 11, 137);
  for (int k : {2, 3, 7, 25}) EXPECT_EQ(blur(img, k), img) << "k=" << k;
}

TEST(BlurTest, HandComputedThreeByThree) {
  const ImageBuffer out = blur(plane3x3_center9(), 3);
  EXPECT_EQ(out.at(1, 1, 0), 1);  // 9 / 9
  // Corner (0,0): reflected window rows/cols {1,0,1} hit the centre 4 times.
  EXPECT_EQ(out.at(0, 0, 0), 4);
  // Edge (1,0): rows {1,0,1}, cols {0,1,2}: centre counted twice.
  EXPECT_EQ(out.at(1, 0, 1), 2);
}

TEST(BlurTest, RejectsOutOfRangeLevels) {
  const ImageBuffer img(4, 4);
  EXPECT_THROW(blur(img, 0), UsageError);
  EXPECT_THROW(blur(img, 26), UsageError);
}

TEST(BlurTest, GlobalMeanPreservedOnLargeImage) {
  const auto img = testing::random_image(160, 120, 3);
  const double before = mean_luminance(img);
  for (int k : {3, 5, 10, 25}) {
    EXPECT_NEAR(mean_luminance(blur(img, k)), before, 1.0) << "k=" << k;
  }
}

TEST(BrightnessTest, Examples) {
  const auto img = testing::random_image(8, 8, 4);
  const auto black = brightness(img, 0.0);
  for (auto v : black.data()) EXPECT_EQ(v, 0);
  EXPECT_EQ(brightness(img, 1.0), img);

  ImageBuffer px(1, 1);
  px.set_pixel(0, 0, 100, 50, 200);
  const auto out = brightness(px, 2.0);
  EXPECT_EQ(out.at(0, 0, 0), 200);
  EXPECT_EQ(out.at(0, 0, 1), 100);
  EXPECT_EQ(out.at(0, 0, 2), 255);

  const auto sat = brightness(ImageBuffer(2, 2, 200), 2.0);
  for (auto v : sat.data()) EXPECT_EQ(v, 255);
  EXPECT_THROW(brightness(img, -0.5), UsageError);
}

TEST(BrightnessTest, MeanIsMonotoneInFactor) {
  const auto img = testing::random_image(32, 32, 5);
  double prev = -1.0;
  for (double f : {0.0, 0.3, 0.6, 1.0, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0}) {
    const double m = mean_luminance(brightness(img, f));
    EXPECT_GE(m, prev) << "f=" << f;
    prev = m;
  }
}

TEST(BandingTest, StripeRowsAreDarker) {
  const ImageBuffer white(48, 48, 255);
  const ImageBuffer out = banding(white, 1);
  for (int y = 0; y < 48; ++y) {
    const bool stripe = (y % 24) < 6;  // period 24, duty 0.25
    for (int x = 0; x < 48; ++x) {
      EXPECT_EQ(out.at(x, y, 0), stripe ? 128 : 255) << x << "," << y;
    }
  }
}

TEST(BandingTest, PresetsDifferAndZeroOpacityIsIdentity) {
  const auto img = testing::random_image(40, 40, 6);
  EXPECT_NE(banding(img, 1), banding(img, 2));
  BandingParams p = banding_preset(2);
  p.opacity = 0.0;
  EXPECT_EQ(banding(img, p), img);
  EXPECT_THROW(banding(img, 3), UsageError);
  // BAND2 darkens columns as well.
  const auto band2 = banding(ImageBuffer(32, 32, 200), 2);
  EXPECT_LT(band2.at(1, 10, 0), 200);
  EXPECT_EQ(band2.at(10, 10, 0), 200);
}

TEST(DeadPixelTest, SinglePixelBottomRight) {
  const ImageBuffer img(10, 7, 50);
  const auto out = dead_pixels(img, DeadPixelMode::N1, 0);
  EXPECT_EQ(changed_pixels(img, out), 1);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(9, 6, c), 0);
}

TEST(DeadPixelTest, ScatteredCountsAreExactAndDistinct) {
  const ImageBuffer img(384, 160, 90);
  for (auto [mode, n] : {std::pair{DeadPixelMode::N50, 50}, std::pair{DeadPixelMode::N200, 200},
                         std::pair{DeadPixelMode::N500, 500}}) {
    const auto coords = dead_pixel_coords(384, 160, mode, 1234);
    std::set<std::pair<int, int>> unique;
    for (const auto& p : coords) {
      ASSERT_GE(p.x, 0);
      ASSERT_LT(p.x, 384);
      ASSERT_GE(p.y, 0);
      ASSERT_LT(p.y, 160);
      unique.insert({p.x, p.y});
    }
    EXPECT_EQ(unique.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(changed_pixels(img, dead_pixels(img, mode, 1234)), n);
  }
  EXPECT_NE(dead_pixel_coords(50, 50, DeadPixelMode::N50, 1),
            dead_pixel_coords(50, 50, DeadPixelMode::N50, 2));
  EXPECT_EQ(dead_pixel_coords(50, 50, DeadPixelMode::N50, 1),
            dead_pixel_coords(50, 50, DeadPixelMode::N50, 1));
}

TEST(DeadPixelTest, LinesFollowThePattern) {
  const ImageBuffer img(384, 160, 90);
  const auto vcl = dead_pixels(img, DeadPixelMode::VerticalLine, 0);
  EXPECT_EQ(changed_pixels(img, vcl), 160);
  for (int y = 0; y < 160; ++y) EXPECT_EQ(vcl.at(192, y, 1), 0);

  const auto three = dead_pixels(img, DeadPixelMode::ThreeLines, 0);
  EXPECT_EQ(changed_pixels(img, three), 2 * 384 + 160 - 2);
  for (int x = 0; x < 384; ++x) {
    EXPECT_EQ(three.at(x, 53, 0), 0);
    EXPECT_EQ(three.at(x, 106, 0), 0);
  }
  EXPECT_EQ(three.at(191, 0, 0), 90);
}

TEST(DeadPixelTest, TinyImagesRejected) {
  EXPECT_THROW(dead_pixels(ImageBuffer(2, 5), DeadPixelMode::N1, 0), UsageError);
  // Scattered modes cap at the number of pixels.
  EXPECT_EQ(dead_pixel_coords(3, 3, DeadPixelMode::N500, 0).size(), 9u);
}

TEST(FlareTest, DeterministicAndBrightening) {
  const ImageBuffer img = testing::random_image(96, 64, 7);
  EXPECT_EQ(flare(img, 99), flare(img, 99));
  EXPECT_NE(flare(img, 99), flare(img, 100));
  const ImageBuffer grey(96, 64, 100);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    EXPECT_GT(mean_luminance(flare(grey, seed)), mean_luminance(grey));
  }
}

TEST(FlareTest, GhostCentresAreCollinear) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = make_flare_geometry(384, 160, seed);
    ASSERT_EQ(g.circles.size(), static_cast<std::size_t>(kFlareCircles));
    // Principal axis of the centres, then the largest perpendicular residual.
    double mx = 0, my = 0;
    for (const auto& c : g.circles) {
      mx += c.cx;
      my += c.cy;
    }
    mx /= g.circles.size();
    my /= g.circles.size();
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto& c : g.circles) {
      sxx += (c.cx - mx) * (c.cx - mx);
      syy += (c.cy - my) * (c.cy - my);
      sxy += (c.cx - mx) * (c.cy - my);
    }
    const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
    const double nx = -std::sin(theta), ny = std::cos(theta);
    for (const auto& c : g.circles) {
      EXPECT_LE(std::abs((c.cx - mx) * nx + (c.cy - my) * ny), 0.5) << "seed " << seed;
      EXPECT_GE(c.cx, -1e-9);
      EXPECT_LE(c.cx, 383 + 1e-9);
      EXPECT_GE(c.cy, -1e-9);
      EXPECT_LE(c.cy, 159 + 1e-9);
    }
    EXPECT_LT(g.source_y, 80.0);
  }
}

TEST(NoBayerTest, Examples) {
  ImageBuffer px(3, 1);
  px.set_pixel(0, 0, 100, 100, 100);
  px.set_pixel(1, 0, 255, 0, 0);
  px.set_pixel(2, 0, 255, 255, 255);
  const auto lum = no_bayer(px, NoBayerMode::Luminance);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(lum.at(0, 0, c), 100);
    EXPECT_EQ(lum.at(1, 0, c), 76);
  }
  const auto scale = no_bayer(px, NoBayerMode::ChannelScale);
  EXPECT_EQ(scale.at(2, 0, 0), 76);
  EXPECT_EQ(scale.at(2, 0, 1), 150);
  EXPECT_EQ(scale.at(2, 0, 2), 29);
}

TEST(AberrationTest, ZeroDeltaIsIdentityAndUniformIsUnchanged) {
  const auto img = testing::random_image(31, 17, 8);
  EXPECT_EQ(chromatic_aberration_delta(img, 0.0, false), img);
  const ImageBuffer flat(64, 40, 77);
  for (int level : {1, 2}) {
    EXPECT_EQ(chromatic_aberration(flat, level, false), flat);
    EXPECT_EQ(chromatic_aberration(flat, level, true), flat);
  }
  EXPECT_THROW(chromatic_aberration(img, 3, false), UsageError);
}

TEST(AberrationTest, LevelTwoDisplacesRedFurther) {
  // Horizontal ramp: bilinear sampling of a linear field is exact, so the
  // red value at x is the source coordinate it was read from.
  ImageBuffer ramp(256, 9);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 256; ++x) ramp.set_pixel(x, y, static_cast<std::uint8_t>(x), 128, 0);
  }
  const auto l1 = chromatic_aberration(ramp, 1, false);
  const auto l2 = chromatic_aberration(ramp, 2, false);
  const double cx = 127.5;
  for (int x : {10, 40, 220, 250}) {
    const double d1 = std::abs(x - l1.at(x, 4, 0));
    const double d2 = std::abs(x - l2.at(x, 4, 0));
    EXPECT_GT(d2, d1) << "x=" << x;
    // Analytic offset |x - cx| * delta / (1 + delta), rounded to 8 bits.
    EXPECT_NEAR(d2, std::abs(x - cx) * 0.010 / 1.010, 0.51);
    EXPECT_EQ(l2.at(x, 4, 1), 128);
  }
  EXPECT_NE(chromatic_aberration(ramp, 1, true), l1);
}

TEST(DemosaicTest, SinglePixelCell) {
  ImageBuffer px(1, 1);
  px.set_pixel(0, 0, 10, 20, 30);
  const auto out = demosaic_raw(px);
  ASSERT_EQ(out.width(), 2);
  ASSERT_EQ(out.height(), 2);
  auto rgb = [&](int x, int y) {
    return std::tuple(out.at(x, y, 0), out.at(x, y, 1), out.at(x, y, 2));
  };
  using T = std::tuple<std::uint8_t, std::uint8_t, std::uint8_t>;
  EXPECT_EQ(rgb(0, 0), T(0, 0, 30));
  EXPECT_EQ(rgb(1, 0), T(0, 20, 0));
  EXPECT_EQ(rgb(0, 1), T(0, 20, 0));
  EXPECT_EQ(rgb(1, 1), T(10, 0, 0));
}

TEST(DemosaicTest, DimensionsAndBlack) {
  const auto out = demosaic_raw(testing::random_image(13, 7, 9));
  EXPECT_EQ(out.width(), 26);
  EXPECT_EQ(out.height(), 14);
  const auto black = demosaic_raw(ImageBuffer(5, 4, 0));
  for (auto v : black.data()) EXPECT_EQ(v, 0);
}

TEST(NoiseTest, BlackStaysBlackAndSeedIsDeterministic) {
  const ImageBuffer black(20, 20, 0);
  EXPECT_EQ(speckle_noise(black, 5.0, 1), black);
  const auto img = testing::random_image(20, 20, 10);
  EXPECT_EQ(speckle_noise(img, 0.5, 3), speckle_noise(img, 0.5, 3));
  EXPECT_NE(speckle_noise(img, 0.5, 3), speckle_noise(img, 0.5, 4));
  EXPECT_THROW(speckle_noise(img, 0.0, 3), UsageError);
}

// Scalar Monte-Carlo model of the clamped speckle distribution with an
// unrelated generator.
double speckle_expectation(double v, double sigma, int n) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal(0.0, sigma);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = std::round(v + v * normal(gen));
    sum += std::clamp(s, 0.0, 255.0);
  }
  return sum / n;
}

TEST(NoiseTest, SpeckleMeanMatchesMonteCarloOracle) {
  const ImageBuffer grey(1000, 334, 128);  // ~1e6 samples
  const auto out = speckle_noise(grey, 0.2, 77);
  double sum = 0.0;
  for (auto v : out.data()) sum += v;
  const double mean = sum / static_cast<double>(out.data().size());
  EXPECT_NEAR(mean, speckle_expectation(128.0, 0.2, 1000000), 1.0);
}

TEST(NoiseTest, AdditiveModeAddsGreyLevels) {
  const ImageBuffer black(200, 200, 0);
  const auto out = speckle_noise(black, 4.0, 5, NoiseModel::Additive);
  EXPECT_NE(out, black);
}

TEST(SharpnessTest, IdentityAndUniform) {
  const auto img = testing::random_image(19, 11, 12);
  EXPECT_EQ(sharpness(img, 1.0), img);
  const ImageBuffer flat(9, 9, 42);
  for (double f : {-5.0, -3.5, 0.0, 2.0}) EXPECT_EQ(sharpness(flat, f), flat);
}

TEST(SharpnessTest, FactorZeroOnStepEdge) {
  // Columns 0..2 are 0, columns 3..5 are 130.
  ImageBuffer step(6, 5, 0);
  for (int y = 0; y < 5; ++y) {
    for (int x = 3; x < 6; ++x) step.set_pixel(x, y, 130, 130, 130);
  }
  const auto out = sharpness(step, 0.0);
  // At (2,2): left and centre columns are 0, right column (3 samples) 130.
  EXPECT_EQ(out.at(2, 2, 0), 30);  // 390 / 13
  // At (3,2): centre weight 5 plus 2 column neighbours on 130, 3 on 130.
  EXPECT_EQ(out.at(3, 2, 0), 100);  // (5 + 2 + 3) * 130 / 13
  EXPECT_EQ(out.at(0, 2, 0), 0);
  EXPECT_EQ(smooth13(step), out);
}

TEST(SharpnessTest, NegativeFactorOvershoots) {
  ImageBuffer step(6, 5, 60);
  for (int y = 0; y < 5; ++y) {
    for (int x = 3; x < 6; ++x) step.set_pixel(x, y, 190, 190, 190);
  }
  const auto out = sharpness(step, -1.0);
  // S(2,2) = (10*60 + 3*190)/13 = 90; out = 90 - (60 - 90) = 120.
  EXPECT_EQ(out.at(2, 2, 0), 120);
}

}  // namespace
}  // namespace camfail::transforms
