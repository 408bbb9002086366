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

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "camfail/presets.hpp"
#include "support/test_support.hpp"

namespace camfail {
namespace {

TEST(CatalogTest, SizeAndFamilyBreakdown) {
  const auto& cat = preset_catalog();
  ASSERT_EQ(cat.size(), 130u);
  std::map<Family, int> counts;
  std::set<std::string> names;
  for (const auto& p : cat) {
    ++counts[p.family];
    names.insert(p.name);
  }
  EXPECT_EQ(names.size(), 130u);
  const std::map<Family, int> expected = {
      {Family::Banding, 2},        {Family::Blur, 25},          {Family::Brightness, 10},
      {Family::BrokenLens, 16},    {Family::Condensation, 3},   {Family::Dirty, 36},
      {Family::Ice, 4},            {Family::Rain, 5},           {Family::DeadPixel, 6},
      {Family::Flare, 1},          {Family::NoBayerFilter, 1},  {Family::ChromaticAberration, 4},
      {Family::NoDemosaicing, 1},  {Family::Noise, 10},         {Family::Sharpness, 6}};
  EXPECT_EQ(counts, expected);
}

TEST(CatalogTest, ContainsNamedConfigurations) {
  for (const char* n : {"BRIGHT_0.6", "BRIGHT_1.5", "BRIGHT_0", "BRIGHT_15", "SHARP_0", "SHARP_-5",
                        "BLUR_12", "DEAPIX-vcl", "DEAPIX-3l", "CHROMAB2-b", "NOISE_0.2", "NOISE_5",
                        "NBAYF", "DEMOS", "FLARE", "BAND1", "BAND2", "DIRTY36", "BRLE16"}) {
    EXPECT_TRUE(find_preset(n).has_value()) << n;
  }
  // The extra sharpness alias resolves but is not one of the 130.
  EXPECT_TRUE(find_preset("SHARP_-3.5").has_value());
  for (const auto& p : preset_catalog()) EXPECT_NE(p.name, "SHARP_-3.5");
}

TEST(CatalogTest, ReferenceFlags) {
  EXPECT_TRUE(find_preset("BRIGHT_0.6")->reference_params);
  EXPECT_FALSE(find_preset("BRIGHT_0.3")->reference_params);
  EXPECT_FALSE(find_preset("NOISE_0.5")->reference_params);
  EXPECT_TRUE(find_preset("NOISE_5")->reference_params);
  EXPECT_FALSE(find_preset("SHARP_-4")->reference_params);
  EXPECT_TRUE(find_preset("SHARP_-3.5")->reference_params);
  EXPECT_FALSE(find_preset("BAND1")->reference_params);
}

TEST(CatalogTest, StochasticFlagMatchesSeedUse) {
  const auto img = testing::random_image(24, 24, 1);
  for (const auto& p : preset_catalog()) {
    const bool differs = apply(p, img, std::uint64_t{1}) != apply(p, img, std::uint64_t{2});
    EXPECT_TRUE(!differs || p.stochastic) << p.name;
    EXPECT_TRUE(p.stochastic || !differs) << p.name;
  }
}

TEST(ApplyTest, EveryPresetRunsOnSmallImage) {
  const auto img = testing::random_image(8, 8, 2);
  for (const auto& p : preset_catalog()) {
    const auto out = apply(p, img, SeedSpec{0, "img", p.name});
    if (p.family == Family::NoDemosaicing) {
      EXPECT_EQ(out.width(), 16);
      EXPECT_EQ(out.height(), 16);
    } else {
      EXPECT_EQ(out.width(), 8) << p.name;
      EXPECT_EQ(out.height(), 8) << p.name;
    }
  }
}

TEST(ApplyTest, DeterministicAndPure) {
  const auto img = testing::random_image(40, 30, 3);
  const auto copy = img;
  for (const auto& p : preset_catalog()) {
    const SeedSpec seed{9, "000001", p.name};
    EXPECT_EQ(apply(p, img, seed), apply(p, img, seed)) << p.name;
  }
  EXPECT_EQ(img, copy);
}

TEST(ApplyTest, BrightZeroIsBlack) {
  const auto out = apply("BRIGHT_0", testing::random_image(16, 9, 4), 0, "x");
  for (auto v : out.data()) EXPECT_EQ(v, 0);
}

TEST(ApplyTest, UnknownNamesAreRejected) {
  const ImageBuffer img(8, 8);
  EXPECT_THROW(apply("BLUR_99", img, 0, "x"), UsageError);
  EXPECT_THROW(apply("FOG_1", img, 0, "x"), UsageError);
  EXPECT_THROW(resolve_preset("BRIGHT_-1"), UsageError);
  EXPECT_THROW(resolve_preset("NOISE_0"), UsageError);
  EXPECT_THROW(resolve_preset("BLUR_x"), UsageError);
  try {
    resolve_preset("BLUR_99");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("BLUR_99"), std::string::npos);
  }
}

TEST(ApplyTest, MissingOverlayAssetIsAnError) {
  AssetLibrary empty;
  EXPECT_THROW(apply(*find_preset("RAIN1"), ImageBuffer(8, 8), std::uint64_t{0}, empty),
               UsageError);
}

TEST(ResolveTest, NumericOverrides) {
  const auto b = resolve_preset("BLUR_7");
  EXPECT_EQ(std::get<BlurParams>(b.params).k, 7);
  const auto br = resolve_preset("BRIGHT_1");
  EXPECT_EQ(br.family, Family::Brightness);
  EXPECT_DOUBLE_EQ(std::get<BrightnessParams>(br.params).factor, 1.0);
  EXPECT_FALSE(br.reference_params);
  const auto s = resolve_preset("SHARP_1");
  EXPECT_DOUBLE_EQ(std::get<SharpnessParams>(s.params).factor, 1.0);
  const auto n = resolve_preset("NOISE_0.05");
  EXPECT_DOUBLE_EQ(std::get<NoiseParams>(n.params).sigma, 0.05);
  EXPECT_TRUE(n.stochastic);
}

TEST(SelectionTest, GlobsAndErrors) {
  EXPECT_EQ(expand_selection({"BLUR_*"}).size(), 25u);
  EXPECT_EQ(expand_selection({"DIRTY*"}).size(), 36u);
  EXPECT_EQ(expand_selection({"*"}).size(), 130u);
  const auto mixed = expand_selection({"BLUR_1", "BLUR_?", "BLUR_1"});
  EXPECT_EQ(mixed.size(), 9u);
  EXPECT_EQ(mixed.front().name, "BLUR_1");
  EXPECT_THROW(expand_selection({}), UsageError);
  EXPECT_THROW(expand_selection({"FOG*"}), UsageError);
  EXPECT_THROW(expand_selection({"FOG_1"}), UsageError);
  EXPECT_TRUE(glob_match("CHROMAB?-b", "CHROMAB2-b"));
  EXPECT_FALSE(glob_match("CHROMAB?-b", "CHROMAB2-nb"));
}

TEST(ExportTest, CatalogRoundTrips) {
  const std::string text = export_catalog(preset_catalog());
  const auto back = parse_catalog(text);
  ASSERT_EQ(back.size(), 130u);
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].name, preset_catalog()[i].name);
    EXPECT_EQ(back[i].family, preset_catalog()[i].family);
    EXPECT_EQ(back[i].params, preset_catalog()[i].params) << back[i].name;
    EXPECT_EQ(back[i].reference_params, preset_catalog()[i].reference_params);
  }
  EXPECT_EQ(export_catalog(back), text);
}

TEST(ExportTest, LineFormat) {
  EXPECT_EQ(format_preset(*find_preset("BLUR_3")), "BLUR_3 Blur k=3 ref=yes");
  EXPECT_EQ(format_preset(*find_preset("DEAPIX-vcl")), "DEAPIX-vcl DeadPixel mode=vcl ref=yes");
  EXPECT_THROW(parse_preset_line("BLUR_3 Blur"), DataError);
  EXPECT_THROW(parse_preset_line("BLUR_3 Blur k=3 ref=maybe"), DataError);
}

}  // namespace
}  // namespace camfail
