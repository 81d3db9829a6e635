#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tafi/error.h"
#include "tafi/texclass.h"
#include "test_util.h"

namespace tafi {
namespace {

TEST(Features, ZeroMotionClip) {
  Clip c;
  c.name = "still";
  for (int i = 0; i < 6; ++i) c.frames.push_back(testing::TexturedFrame(64, 64));
  const TextureFeatures f = ExtractFeatures(c, InterpParams{});
  EXPECT_EQ(f.gmc_residual, 0.0);
  EXPECT_EQ(f.mean_motion, 0.0);
  EXPECT_EQ(f.flow_incoherence, 0.0);
  EXPECT_GT(f.spatial_detail, 0.0);
}

TEST(Features, GlobalShift) {
  // Content moves right by 3 px per frame.
  const Clip c = testing::TranslatingClip(96, 96, 5, -3, 0);
  InterpParams p;
  p.search_range = 4;
  const TextureFeatures f = ExtractFeatures(c, p);
  EXPECT_LT(f.gmc_residual, 1e-9);
  // Blocks in the right-most column cannot follow the shift out of frame.
  EXPECT_NEAR(f.mean_motion, 3.0, 0.6);
  EXPECT_LT(f.flow_incoherence, 0.2);
}

TEST(Features, ShortClip) {
  Clip c{"two", {Frame(32, 32), Frame(32, 32)}, {25, 1}, std::nullopt};
  try {
    ExtractFeatures(c, InterpParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kClipTooShort);
  }
}

TEST(Features, InvariantsOnRandomClips) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    Clip c;
    for (int i = 0; i < 4; ++i) c.frames.push_back(testing::RandomFrame(48, 48, rng));
    const TextureFeatures f = ExtractFeatures(c, InterpParams{});
    EXPECT_GE(f.gmc_residual, 0);
    EXPECT_GE(f.mean_motion, 0);
    EXPECT_GE(f.spatial_detail, 0);
    EXPECT_GE(f.flow_incoherence, 0);
    EXPECT_LE(f.flow_incoherence, 1);
  }
}

// Exhaustive minimum of mean absolute difference over the overlap.
double GmcOracle(const Frame& a, const Frame& b, int range) {
  double best = 1e300;
  const PlaneView pa = a.luma(), pb = b.luma();
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      double s = 0;
      int n = 0;
      for (int y = 0; y < pa.height; ++y)
        for (int x = 0; x < pa.width; ++x) {
          const int u = x + dx, v = y + dy;
          if (u < 0 || v < 0 || u >= pa.width || v >= pa.height) continue;
          s += std::abs(pa.at(x, y) - pb.at(u, v));
          ++n;
        }
      best = std::min(best, s / n);
    }
  }
  return best;
}

TEST(Features, GlobalResidualMatchesExhaustiveSearch) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Frame a = testing::RandomFrame(24, 20, rng);
    const Frame b = testing::RandomFrame(24, 20, rng);
    EXPECT_NEAR(GlobalTranslationResidual(a, b, 3), GmcOracle(a, b, 3), 1e-12);
  }
  const Frame a = testing::TexturedFrame(40, 40, 0, 0);
  const Frame b = testing::TexturedFrame(40, 40, 2, -1);
  EXPECT_EQ(GlobalTranslationResidual(a, b, 3), 0.0);
}

TEST(Incoherence, Cases) {
  const std::vector<MotionVector> same(10, MotionVector{2, 1});
  EXPECT_EQ(FlowIncoherence(same), 0.0);
  std::vector<MotionVector> two;
  for (int i = 0; i < 6; ++i) two.push_back({4, 0});
  for (int i = 0; i < 6; ++i) two.push_back({-4, 0});
  EXPECT_NEAR(FlowIncoherence(two), 0.0, 1e-12);
  std::mt19937_64 rng(11);
  std::vector<MotionVector> noisy;
  for (int i = 0; i < 200; ++i)
    noisy.push_back({static_cast<int>(rng() % 17) - 8, static_cast<int>(rng() % 17) - 8});
  const double f = FlowIncoherence(noisy);
  EXPECT_GT(f, 0.5);
  EXPECT_LE(f, 1.0);
}

TEST(Classify, DecisionRule) {
  const ClassifierThresholds th;
  EXPECT_EQ(Classify({0, 0.9, 0, 0}, th), TextureClass::kStatic);
  EXPECT_EQ(Classify({10, 0.05, 0, 0}, th), TextureClass::kDynDis);
  EXPECT_EQ(Classify({10, 0.8, 0, 0}, th), TextureClass::kDynCon);
  // Boundaries resolve toward the earlier branch.
  EXPECT_EQ(Classify({2.0, 0.9, 0, 0}, th), TextureClass::kStatic);
  EXPECT_EQ(Classify({2.5, 0.35, 0, 0}, th), TextureClass::kDynDis);
}

TEST(Classify, Monotonicity) {
  const ClassifierThresholds th;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> g(0, 6), inc(0, 1);
  for (int i = 0; i < 2000; ++i) {
    TextureFeatures f{g(rng), inc(rng), 0, 0};
    TextureFeatures up = f;
    up.gmc_residual += g(rng);
    if (Classify(f, th) != TextureClass::kStatic) {
      EXPECT_NE(Classify(up, th), TextureClass::kStatic);
    }
    TextureFeatures more = f;
    more.flow_incoherence = std::min(1.0, f.flow_incoherence + inc(rng));
    if (Classify(f, th) == TextureClass::kDynCon) {
      EXPECT_EQ(Classify(more, th), TextureClass::kDynCon);
    }
  }
}

TEST(Classify, ThresholdValidation) {
  ClassifierThresholds th;
  th.static_residual_max = 0;
  EXPECT_THROW(th.Validate(), Error);
}

}  // namespace
}  // namespace tafi
