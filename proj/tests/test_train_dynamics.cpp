#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aerodet/random.hpp"
#include "aerodet/train_dynamics.hpp"

namespace aerodet {
namespace {

TEST(ScheduleTest, EndpointsAndMidpoint) {
  const CosineSchedule s{0.0001, 0.001, 1000};
  EXPECT_NEAR(lr_at(s, 0), 0.001, 1e-12);
  EXPECT_NEAR(lr_at(s, 1000), 0.0001, 1e-12);
  EXPECT_NEAR(lr_at(s, 500), 0.00055, 1e-12);
}

TEST(ScheduleTest, NonIncreasing) {
  const CosineSchedule s{0.0001, 0.001, 37};
  double prev = lr_at(s, 0);
  for (int i = 1; i <= 1000; ++i) {
    const double now = lr_at(s, 37.0 * i / 1000.0);
    EXPECT_LE(now, prev);
    prev = now;
  }
}

TEST(ScheduleTest, GammaIsUnitSchedule) {
  EXPECT_EQ(gamma_at(50, 0), 1.0);
  EXPECT_NEAR(gamma_at(50, 50), 0.0, 1e-15);
  for (double t : {0.0, 3.0, 17.5, 49.0})
    EXPECT_EQ(gamma_at(50, t), lr_at(CosineSchedule{0.0, 1.0, 50}, t));
}

TEST(ScheduleTest, RejectsBadInput) {
  EXPECT_THROW(lr_at(CosineSchedule{0.01, 0.001, 10}, 0), std::invalid_argument);
  EXPECT_THROW(lr_at(CosineSchedule{0.0001, 0.001, 0}, 0), std::invalid_argument);
  EXPECT_THROW(lr_at(CosineSchedule{0.0001, 0.001, 10}, 11), std::invalid_argument);
  EXPECT_THROW(lr_at(CosineSchedule{0.0001, 0.001, 10}, -1), std::invalid_argument);
}

TEST(AugmentDecideTest, WorkedExamples) {
  const AugmentationPolicy policy;
  RandomStream rng(1);
  for (double u : {0.0, 0.3, 0.999})
    EXPECT_TRUE(std::holds_alternative<Augment>(augment_decide(1.0, false, u, policy, rng)));
  EXPECT_TRUE(std::holds_alternative<PassThrough>(augment_decide(0.0, false, 0.5, policy, rng)));
  for (double g : {0.0, 0.5, 1.0}) {
    const auto d = augment_decide(g, true, 0.9, policy, rng);
    ASSERT_TRUE(std::holds_alternative<HardColor>(d));
    const double delta = std::get<HardColor>(d).saturation_delta;
    EXPECT_GE(delta, -0.5);
    EXPECT_LE(delta, 0.5);
  }
  EXPECT_STREQ(decision_name(PassThrough{}), "PassThrough");
  EXPECT_STREQ(decision_name(Augment{}), "Augment");
  EXPECT_STREQ(decision_name(HardColor{}), "HardColor");
}

TEST(AugmentDecideTest, EmpiricalFrequencyWithinThreeSigma) {
  const AugmentationPolicy policy;
  const int n = 10000;
  for (double gamma : {0.0, 0.35, 0.7, 1.0}) {
    const RandomStream root(2024);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      RandomStream rng = root.split(static_cast<std::uint64_t>(i));
      const double u = rng.uniform();
      hits += std::holds_alternative<Augment>(augment_decide(gamma, false, u, policy, rng));
    }
    const double p = std::clamp(1.0 - (policy.zeta - gamma), 0.0, 1.0);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    EXPECT_LE(std::abs(hits / double(n) - p), 3.0 * sigma + 1e-12) << "gamma=" << gamma;
  }
}

TEST(SampleAffineTest, DetectionProfileHasNoRotation) {
  RandomStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = sample_affine(AugmentationPolicy::detection_profile(), rng);
    EXPECT_EQ(p.rotation_deg, 0.0);
    EXPECT_GE(p.scale_x, 0.5);
    EXPECT_LT(p.scale_x, 1.5);
  }
  RandomStream r2(3);
  bool rotated = false;
  for (int i = 0; i < 20; ++i) rotated |= sample_affine(AugmentationPolicy::transfer_profile(), r2).rotation_deg != 0.0;
  EXPECT_TRUE(rotated);
}

Image ramp_image(int w, int h) {
  std::vector<double> px;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) px.push_back(static_cast<double>(y * w + x) / (w * h - 1));
  return Image(w, h, 1, std::move(px));
}

TEST(ApplyAffineTest, IdentityLeavesEverythingUnchanged) {
  const auto img = ramp_image(9, 7);
  const std::vector<Box> boxes{{1, 1, 3, 2}, {5.5, 2.25, 2, 4}};
  const auto out = apply_affine(img, boxes, AffineParams{});
  EXPECT_EQ(out.image, img);
  ASSERT_EQ(out.boxes.size(), 2u);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    EXPECT_NEAR(out.boxes[i].x, boxes[i].x, 1e-12);
    EXPECT_NEAR(out.boxes[i].y, boxes[i].y, 1e-12);
    EXPECT_NEAR(out.boxes[i].w, boxes[i].w, 1e-12);
    EXPECT_NEAR(out.boxes[i].h, boxes[i].h, 1e-12);
  }
}

TEST(ApplyAffineTest, ReflectXOnSymmetricImage) {
  std::vector<double> px;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 8; ++x) px.push_back(0.1 * std::min(x, 7 - x) + 0.05 * y);
  const Image img(8, 5, 1, px);
  AffineParams p;
  p.reflect_x = true;
  const auto out = apply_affine(img, {Box{1, 1, 2, 3}}, p);
  EXPECT_EQ(out.image, img);
  ASSERT_EQ(out.boxes.size(), 1u);
  EXPECT_NEAR(out.boxes[0].x, 8 - 1 - 2, 1e-12);
  EXPECT_NEAR(out.boxes[0].y, 1, 1e-12);
  EXPECT_NEAR(out.boxes[0].w, 2, 1e-12);
  EXPECT_NEAR(out.boxes[0].h, 3, 1e-12);
}

TEST(ApplyAffineTest, HalfScaleKeepsOriginalBorder) {
  const auto img = ramp_image(8, 8);
  AffineParams p;
  p.scale_x = p.scale_y = 0.5;
  const auto out = apply_affine(img, {}, p);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      const bool interior = x >= 2 && x < 6 && y >= 2 && y < 6;
      const double want = interior ? img.at(2 * x - 3, 2 * y - 3) : img.at(x, y);
      EXPECT_EQ(out.image.at(x, y), want) << x << "," << y;
    }
}

TEST(ApplyAffineTest, BoxesAreClippedCornerHulls) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Image img = Image::filled(40, 30, 3, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    AffineParams p{0.5 + u(rng), 0.5 + u(rng), u(rng) < 0.5, u(rng) < 0.5, trial % 2 ? 360 * u(rng) - 180 : 0.0};
    const Box b{u(rng) * 35, u(rng) * 25, 1 + u(rng) * 10, 1 + u(rng) * 10};
    const auto out = apply_affine(img, {b}, p);

    const double sx = p.reflect_x ? -p.scale_x : p.scale_x, sy = p.reflect_y ? -p.scale_y : p.scale_y;
    const double c = std::cos(p.rotation_deg * M_PI / 180), s = std::sin(p.rotation_deg * M_PI / 180);
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (auto [px, py] : {std::pair{b.x, b.y}, {b.x + b.w, b.y}, {b.x, b.y + b.h}, {b.x + b.w, b.y + b.h}}) {
      const double dx = px - 20, dy = py - 15;
      const double tx = 20 + c * sx * dx - s * sy * dy, ty = 15 + s * sx * dx + c * sy * dy;
      x0 = std::min(x0, tx), x1 = std::max(x1, tx), y0 = std::min(y0, ty), y1 = std::max(y1, ty);
    }
    const double hull = (x1 - x0) * (y1 - y0);
    const double cx0 = std::max(x0, 0.0), cy0 = std::max(y0, 0.0), cx1 = std::min(x1, 40.0), cy1 = std::min(y1, 30.0);
    const bool keep = cx1 > cx0 && cy1 > cy0 && (cx1 - cx0) * (cy1 - cy0) >= 0.25 * hull;
    ASSERT_EQ(out.boxes.size(), keep ? 1u : 0u) << trial;
    if (keep) {
      EXPECT_NEAR(out.boxes[0].x, cx0, 1e-9);
      EXPECT_NEAR(out.boxes[0].y, cy0, 1e-9);
      EXPECT_NEAR(out.boxes[0].w, cx1 - cx0, 1e-9);
      EXPECT_NEAR(out.boxes[0].h, cy1 - cy0, 1e-9);
    }
  }
}

TEST(ApplyAffineTest, RejectsNonPositiveScale) {
  AffineParams p;
  p.scale_x = 0.0;
  EXPECT_THROW(apply_affine(Image::filled(2, 2, 1, 0), {}, p), std::invalid_argument);
}

TEST(SaturationTest, ZeroDeltaRoundTrips) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(3 * 50);
  for (auto& v : px) v = u(rng);
  const Image img(10, 5, 3, px);
  const auto out = adjust_saturation(img, 0.0);
  for (std::size_t i = 0; i < px.size(); ++i) EXPECT_NEAR(out.pixels()[i], px[i], 1e-6);
}

TEST(SaturationTest, GrayStaysGray) {
  const Image gray(2, 1, 3, {0.3, 0.3, 0.3, 0.8, 0.8, 0.8});
  EXPECT_EQ(adjust_saturation(gray, 0.5), gray);
  EXPECT_EQ(adjust_saturation(gray, -0.5), gray);
}

// Reference values from Python's colorsys HSV round trip.
TEST(SaturationTest, MatchesHsvReference) {
  struct Case {
    std::array<double, 3> in;
    double delta;
    std::array<double, 3> want;
  };
  const Case cases[] = {
      {{1, 0, 0}, -0.5, {1, 0.5, 0.5}},
      {{0.8, 0.3, 0.1}, 0.15, {0.8, 0.22857142857142865, 0.0}},
      {{0.2, 0.6, 0.9}, -0.3, {0.47000000000000014, 0.7157142857142856, 0.9}},
      {{0.5, 0.4, 0.45}, 0.4, {0.5, 0.2, 0.35}},
  };
  for (const auto& c : cases) {
    const auto out = adjust_saturation(Image(1, 1, 3, {c.in[0], c.in[1], c.in[2]}), c.delta);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(out.pixels()[k], c.want[k], 1e-12);
  }
}

TEST(HuberTest, WorkedValues) {
  EXPECT_EQ(huber(3.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(huber(1.0, 0.5), 0.125);
  EXPECT_DOUBLE_EQ(huber(2.0, 0.0), 1.5);
  EXPECT_DOUBLE_EQ(huber(0.0, 2.0), 1.5);
  EXPECT_THROW(huber(0, 1, 0.0), std::invalid_argument);
}

TEST(HuberTest, ContinuousValueAndSlopeAtJoint) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const double hv = 1e-10;
    const double below = huber(delta - hv, 0.0, delta), above = huber(delta + hv, 0.0, delta);
    const double h = 1e-7;
    EXPECT_LE(std::abs(above - below), 1e-6);
    const double slope_in = (huber(delta, 0.0, delta) - huber(delta - h, 0.0, delta)) / h;
    const double slope_out = (huber(delta + h, 0.0, delta) - huber(delta, 0.0, delta)) / h;
    EXPECT_LE(std::abs(slope_out - slope_in), 1e-6);
  }
}

TEST(HuberTest, BoundedByQuadratic) {
  for (int i = -500; i <= 500; ++i) {
    const double e = i / 100.0;
    const double q = 0.5 * e * e;
    const double v = huber(e, 0.0, 1.0);
    EXPECT_LE(v, q + 1e-15);
    if (std::abs(e) <= 1.0) EXPECT_EQ(v, q);
    else EXPECT_LT(v, q);
  }
}

TEST(MiningTriggerTest, HandWalkedWindows) {
  const MiningState ramp({1, 2, 3, 4, 5});
  EXPECT_TRUE(mining_trigger(ramp, 5.0));
  EXPECT_FALSE(mining_trigger(ramp, 4.0));
  EXPECT_TRUE(mining_trigger(ramp, 3.0 + std::sqrt(2.5) + 1e-12));
  EXPECT_FALSE(mining_trigger(ramp, 3.0 + std::sqrt(2.5) - 1e-9));
  const MiningState flat({1, 1, 1, 1, 1});
  EXPECT_TRUE(mining_trigger(flat, 1.0));
  EXPECT_FALSE(mining_trigger(flat, 0.999));
}

TEST(MiningTriggerTest, PopulationDeviationOption) {
  const MiningState ramp({1, 2, 3, 4, 5});
  // Population sigma is sqrt(2): threshold 4.414...
  EXPECT_TRUE(mining_trigger(ramp, 4.5, Deviation::Population));
  EXPECT_FALSE(mining_trigger(ramp, 4.5, Deviation::Sample));
}

TEST(MiningTriggerTest, WarmUpNeverTriggers) {
  MiningState s;
  for (int i = 0; i < 5; ++i) {
    EXPECT_FALSE(mining_trigger(s, 1e6));
    s = s.push(1.0);
  }
  EXPECT_TRUE(mining_trigger(s, 1e6));
  EXPECT_EQ(s.push(2.0).window().back(), 2.0);
  EXPECT_EQ(s.push(2.0).window().size(), 5u);
}

TEST(MiningTriggerTest, TranslationCovariant) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w(5);
    for (auto& v : w) v = std::round(u(rng) * 8) / 8;  // dyadic values shift exactly
    const double l = std::round(u(rng) * 8) / 8;
    const double c = 16.0;
    std::vector<double> shifted = w;
    for (auto& v : shifted) v += c;
    EXPECT_EQ(mining_trigger(MiningState(w), l), mining_trigger(MiningState(shifted), l + c));
  }
}

TEST(MiningTriggerTest, RejectsInvalidLosses) {
  EXPECT_THROW(MiningState({1, -1}), std::invalid_argument);
  EXPECT_THROW(MiningState().push(NAN), std::invalid_argument);
  EXPECT_THROW(MiningState({1, 2, 3, 4, 5, 6}), std::invalid_argument);
}

TEST(SimulateTrainingTest, ConstantLossesHardFromRowSix) {
  const auto steps = simulate_training(std::vector<double>(20, 1.0), SimulationConfig{0.7, 0.0, 5});
  ASSERT_EQ(steps.size(), 20u);
  for (const auto& s : steps) {
    if (s.t >= 6) EXPECT_TRUE(std::holds_alternative<HardColor>(s.decision)) << s.t;
    else EXPECT_FALSE(std::holds_alternative<HardColor>(s.decision)) << s.t;
  }
  EXPECT_EQ(steps.front().gamma, 1.0);
  EXPECT_NEAR(steps.back().gamma, 0.0, 1e-15);
}

TEST(SimulateTrainingTest, DecreasingLossesNeverHard) {
  std::vector<double> losses;
  for (int i = 0; i < 60; ++i) losses.push_back(10.0 - 0.1 * i);
  for (const auto& s : simulate_training(losses, SimulationConfig{0.7, 0.0, 9}))
    EXPECT_FALSE(std::holds_alternative<HardColor>(s.decision));
}

TEST(SimulateTrainingTest, SeededDeterminism) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> losses(100);
  for (auto& v : losses) v = u(rng);
  const auto a = simulate_training(losses, SimulationConfig{0.7, 150.0, 11});
  const auto b = simulate_training(losses, SimulationConfig{0.7, 150.0, 11});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].decision, b[i].decision);
    EXPECT_EQ(a[i].gamma, b[i].gamma);
  }
  EXPECT_THROW(simulate_training(losses, SimulationConfig{0.7, 50.0, 11}), std::invalid_argument);
  EXPECT_THROW(simulate_training({}, SimulationConfig{}), std::invalid_argument);
}

}  // namespace
}  // namespace aerodet
