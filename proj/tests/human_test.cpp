#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

#include "specforge/generators.hpp"

namespace specforge {
namespace {

std::map<std::array<int, 4>, int> table(const SpecSet& set) {
  std::map<std::array<int, 4>, int> out;
  for (const auto& s : set.specs) {
    std::array<int, 4> key{};
    for (int j = 0; j < 4; ++j) {
      key[j] = static_cast<int>(std::lround(s.input.lower()[j] + 0.5));
    }
    out[key] = std::get<ClassLabel>(s.output).value;
  }
  return out;
}

// Ordinary least squares through (i, x_i) evaluated at 4, computed the
// textbook way in floating point.
double ols_at_four(const std::array<int, 4>& w) {
  double mx = 1.5;
  double my = (w[0] + w[1] + w[2] + w[3]) / 4.0;
  double sxy = 0;
  double sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (i - mx) * (w[i] - my);
    sxx += (i - mx) * (i - mx);
  }
  const double slope = sxy / sxx;
  return my + slope * (4 - mx);
}

TEST(HumanBaseline, HeadlineExamples) {
  const auto t = table(gen_human_throughput(10));
  EXPECT_EQ(t.at({0, 2, 4, 6}), 8);
  EXPECT_EQ(t.at({9, 7, 5, 3}), 1);
  EXPECT_EQ(t.at({0, 0, 0, 0}), 0);
  EXPECT_EQ(t.at({9, 9, 9, 9}), 9);
}

TEST(HumanBaseline, ListedRows) {
  const auto t = table(gen_human_throughput(10));
  EXPECT_EQ(t.at({0, 1, 2, 3}), 4);
  EXPECT_EQ(t.at({0, 1, 2, 4}), 5);
  EXPECT_EQ(t.at({0, 1, 2, 5}), 6);
  EXPECT_EQ(t.at({0, 1, 2, 6}), 7);
  EXPECT_EQ(t.at({2, 4, 5, 7}), 8);
  EXPECT_EQ(t.at({5, 4, 1, 0}), 0);
  EXPECT_EQ(t.at({5, 4, 2, 0}), 0);
  EXPECT_EQ(t.at({5, 4, 2, 1}), 0);
  EXPECT_EQ(t.at({9, 8, 7, 6}), 5);
}

TEST(HumanBaseline, CountsAndCoverage) {
  const SpecSet set = gen_human_throughput(10);
  // C(10,4) increasing + C(10,4) decreasing + 10 stable.
  EXPECT_EQ(set.specs.size(), 210u + 210u + 10u);
  EXPECT_EQ(set.feature_dim, 4u);
  EXPECT_NO_THROW(set.validate());
  for (const auto& s : set.specs) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(s.input.upper()[j] - s.input.lower()[j], 1.0);
    }
  }
}

TEST(HumanBaseline, PredictionMatchesFloatingPointOls) {
  for (int bins : {2, 5, 10}) {
    const auto t = table(gen_human_throughput(bins));
    for (const auto& [w, label] : t) {
      const double p = ols_at_four(w);
      const double r = std::nearbyint(p);  // default mode: ties to even
      const int expect = static_cast<int>(std::clamp(r, 0.0, bins - 1.0));
      EXPECT_EQ(label, expect) << w[0] << w[1] << w[2] << w[3];
    }
  }
}

TEST(HumanBaseline, TrendPredictionEdges) {
  const std::array<int, 4> up{6, 7, 8, 9};
  EXPECT_EQ(trend_prediction(up, 10), 9);  // 10 clamped
  const std::array<int, 3> short_window{1, 2, 3};
  EXPECT_THROW(trend_prediction(short_window, 10), std::invalid_argument);
  EXPECT_THROW(gen_human_throughput(1), std::invalid_argument);
}

}  // namespace
}  // namespace specforge
