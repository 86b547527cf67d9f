#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "specforge/error.hpp"
#include "specforge/verifier.hpp"

namespace specforge {
namespace {

const std::filesystem::path kNets = std::filesystem::path(SPECFORGE_DATA_DIR) / "networks";

Network random_net(std::mt19937_64& rng, std::size_t in, std::size_t out) {
  std::uniform_int_distribution<int> nl(1, 4);
  std::uniform_int_distribution<std::size_t> width(1, 16);
  std::normal_distribution<double> w(0, 1);
  const int layers = nl(rng);
  std::vector<Layer> ls;
  std::size_t prev = in;
  for (int l = 0; l < layers; ++l) {
    const bool last = l == layers - 1;
    const std::size_t next = last ? out : width(rng);
    Layer layer{prev, next, std::vector<double>(prev * next), std::vector<double>(next),
                !last};
    for (double& v : layer.weights) v = w(rng);
    for (double& v : layer.bias) v = w(rng);
    ls.push_back(std::move(layer));
    prev = next;
  }
  return Network(std::move(ls));
}

Hyperrectangle random_box(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> lo(dim);
  std::vector<double> hi(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double a = u(rng);
    const double b = u(rng);
    lo[j] = std::min(a, b);
    hi[j] = std::max(a, b);
  }
  return Hyperrectangle(lo, hi);
}

std::vector<double> sample_in(std::mt19937_64& rng, const Hyperrectangle& box) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(box.dim());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = std::min(box.upper()[j],
                    box.lower()[j] + u(rng) * (box.upper()[j] - box.lower()[j]));
  }
  return x;
}

TEST(Ibp, IdentityBoxMapsToItself) {
  const Network id = load_network(kNets / "identity2.json");
  const auto b = ibp_bounds(id, Hyperrectangle({0, -1}, {1, 2}));
  EXPECT_EQ(b.lower, (std::vector<double>{0, -1}));
  EXPECT_EQ(b.upper, (std::vector<double>{1, 2}));
}

TEST(Ibp, DifferenceMatchesCornerEnumeration) {
  const Network net({Layer{2, 1, {1, -1}, {0}, false}});
  const auto [lo, hi] = oracle::affine_range_by_corners({1, -1}, 0, {{0, 0}, {1, 1}});
  const auto b = ibp_bounds(net, Hyperrectangle({0, 0}, {1, 1}));
  EXPECT_EQ(lo, -1.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_EQ(b.lower[0], lo);
  EXPECT_EQ(b.upper[0], hi);
}

TEST(Ibp, SingleAffineLayerIsTightAgainstCorners) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> w(0, 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 5;
    std::vector<double> wt(k);
    for (double& v : wt) v = w(rng);
    const double bias = w(rng);
    const Network net({Layer{k, 1, wt, {bias}, false}});
    const Hyperrectangle box = random_box(rng, k);
    const auto [lo, hi] =
        oracle::affine_range_by_corners(wt, bias, {box.lower(), box.upper()});
    const auto b = ibp_bounds(net, box);
    EXPECT_NEAR(b.lower[0], lo, 1e-12);
    EXPECT_NEAR(b.upper[0], hi, 1e-12);
  }
}

TEST(Ibp, SoundOnRandomNetworks) {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 30; ++n) {
    const Network net = random_net(rng, 3, 2);
    for (int b = 0; b < 5; ++b) {
      const Hyperrectangle box = random_box(rng, 3);
      const auto bounds = ibp_bounds(net, box);
      for (int s = 0; s < 300; ++s) {
        const auto y = forward(net, sample_in(rng, box));
        for (std::size_t j = 0; j < y.size(); ++j) {
          ASSERT_LE(bounds.lower[j], y[j]);
          ASSERT_GE(bounds.upper[j], y[j]);
        }
      }
      // Corners are the extreme cases for the first layer.
      const auto corner = forward(net, box.upper());
      for (std::size_t j = 0; j < corner.size(); ++j) {
        ASSERT_LE(bounds.lower[j], corner[j]);
        ASSERT_GE(bounds.upper[j], corner[j]);
      }
    }
  }
}

TEST(Ibp, PointBoxIsExact) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 50; ++n) {
    const Network net = random_net(rng, 4, 3);
    const auto x = sample_in(rng, random_box(rng, 4));
    const auto b = ibp_bounds(net, Hyperrectangle(x, x));
    const auto y = forward(net, x);
    EXPECT_EQ(b.lower, y);
    EXPECT_EQ(b.upper, y);
  }
}

TEST(Ibp, MonotoneUnderInclusion) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const Network net = random_net(rng, 2, 2);
    const Hyperrectangle inner = random_box(rng, 2);
    std::vector<double> lo = inner.lower();
    std::vector<double> hi = inner.upper();
    for (auto& v : lo) v -= 0.5;
    for (auto& v : hi) v += 0.25;
    const auto a = ibp_bounds(net, inner);
    const auto b = ibp_bounds(net, Hyperrectangle(lo, hi));
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LE(b.lower[j], a.lower[j]);
      EXPECT_GE(b.upper[j], a.upper[j]);
    }
  }
}

TEST(Ibp, RequiresFiniteBox) {
  const Network id = load_network(kNets / "identity1.json");
  EXPECT_THROW(ibp_bounds(id, Hyperrectangle::unbounded(1)), DataError);
}

TEST(ClampBox, UsesMarginOfDataRange) {
  const DatasetStats st{{0, -1}, {10, 1}, 0, 1};
  const auto b = clamp_box(Hyperrectangle({-INFINITY, 0}, {5, INFINITY}), st);
  EXPECT_EQ(b.lower(), (std::vector<double>{-1, 0}));
  EXPECT_EQ(b.upper(), (std::vector<double>{5, 1.2}));
}

TEST(VerifySpec, IdentityIsVerified) {
  const Network id = load_network(kNets / "identity1.json");
  const Specification spec{Hyperrectangle({3}, {5}), Interval{3, 5}, "id"};
  const auto r = verify_spec(id, spec, std::nullopt, {});
  EXPECT_EQ(r.status, VerifyStatus::Verified);
  EXPECT_TRUE(r.counterexamples.empty());
}

TEST(VerifySpec, NegationIsViolatedWithRealCounterexamples) {
  const Network neg = load_network(kNets / "negation1.json");
  const Specification spec{Hyperrectangle({3}, {5}), Interval{3, 5}, "id"};
  const auto r = verify_spec(neg, spec, std::nullopt, {100, 1, 5});
  EXPECT_EQ(r.status, VerifyStatus::Violated);
  ASSERT_EQ(r.counterexamples.size(), 5u);
  for (const auto& c : r.counterexamples) {
    EXPECT_TRUE(contains(spec.input, c.input));
    EXPECT_EQ(forward(neg, c.input), c.output);
    EXPECT_FALSE(output_satisfies(spec.output, c.output));
    EXPECT_EQ(c.provenance, "id");
    EXPECT_EQ(c.source, CounterexampleSource::Sampled);
  }
}

TEST(VerifySpec, ProbePointsComeFirst) {
  const Network neg = load_network(kNets / "negation1.json");
  const Specification spec{Hyperrectangle({3}, {5}), Interval{3, 5}, "id"};
  const Dataset probe({4, 100}, 1, {4, 100}, TaskKind::Regression);
  const auto r = verify_spec(neg, spec, std::nullopt, {10, 1, 3}, &probe);
  ASSERT_FALSE(r.counterexamples.empty());
  EXPECT_EQ(r.counterexamples[0].source, CounterexampleSource::Dataset);
  EXPECT_EQ(r.counterexamples[0].input, (std::vector<double>{4}));
}

TEST(VerifySpec, IncreasingTrendSpecViolatedByDampingModel) {
  // A rising window expected to keep rising: the damping demo model
  // predicts below the band.
  const Network net = load_network(kNets / "throughput_demo.json");
  const Specification spec{Hyperrectangle({190, 390, 590, 790}, {210, 410, 610, 810}),
                           Interval{900, 1100}, "human:increasing"};
  const auto r = verify_spec(net, spec, std::nullopt, {1000, 3, 10});
  EXPECT_EQ(r.status, VerifyStatus::Violated);
  for (const auto& c : r.counterexamples) {
    EXPECT_LT(c.output[0], 900);
  }
}

TEST(VerifySpec, UnknownWhenBoundsLooseButNoViolation) {
  // y = relu(x) - relu(x) is identically 0 but IBP cannot see it.
  const Network net({Layer{1, 2, {1, 1}, {0, 0}, true}, Layer{2, 1, {1, -1}, {0}, false}});
  const Specification spec{Hyperrectangle({-1}, {1}), Interval{-0.5, 0.5}, "zero"};
  const auto r = verify_spec(net, spec, std::nullopt, {2000, 0, 10});
  EXPECT_EQ(r.status, VerifyStatus::Unknown);
  EXPECT_LE(r.output_bounds.lower[0], -0.5);
}

TEST(VerifySpec, ClassificationUsesArgmaxDominance) {
  const Network id = load_network(kNets / "identity2.json");
  // Output (x0, x1); class 0 wins whenever x0 > x1.
  const Specification proved{Hyperrectangle({2, 0}, {3, 1}), ClassLabel{0}, "p"};
  EXPECT_EQ(verify_spec(id, proved, std::nullopt, {}).status, VerifyStatus::Verified);
  const Specification broken{Hyperrectangle({0, 0}, {1, 1}), ClassLabel{0}, "b"};
  const auto r = verify_spec(id, broken, std::nullopt, {500, 0, 3});
  EXPECT_EQ(r.status, VerifyStatus::Violated);
  for (const auto& c : r.counterexamples) EXPECT_GE(c.input[1], c.input[0]);
}

TEST(VerifySpec, InfiniteSidesNeedStats) {
  const Network id = load_network(kNets / "identity1.json");
  const Specification spec{Hyperrectangle({-INFINITY}, {2}), Interval{-100, 2}, "t"};
  EXPECT_THROW(verify_spec(id, spec, std::nullopt, {}), DataError);
  const auto r = verify_spec(id, spec, DatasetStats{{0}, {10}, 0, 1}, {});
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.checked_box, Hyperrectangle({-1}, {2}));
  EXPECT_EQ(r.status, VerifyStatus::Verified);
}

TEST(VerifySpec, ShapeErrors) {
  const Network id = load_network(kNets / "identity1.json");
  EXPECT_THROW(verify_spec(id, {Hyperrectangle({0, 0}, {1, 1}), Interval{0, 1}, ""},
                           std::nullopt, {}),
               DataError);
  EXPECT_THROW(verify_spec(id, {Hyperrectangle({0}, {1}), ClassLabel{0}, ""},
                           std::nullopt, {}),
               DataError);
}

TEST(VerifyAll, IdentityAllVerifiedAndEmptySet) {
  const Network id = load_network(kNets / "identity1.json");
  SpecSet set;
  set.task = TaskKind::Regression;
  set.feature_dim = 1;
  for (int i = 0; i < 10; ++i) {
    set.specs.push_back({Hyperrectangle({double(i)}, {i + 0.5}), Interval{double(i), i + 0.5},
                         "s" + std::to_string(i)});
  }
  const auto s = verify_all(id, set, std::nullopt, {});
  EXPECT_EQ(s.verified, 10u);
  EXPECT_EQ(s.violated + s.unknown, 0u);

  const auto e = verify_all(id, SpecSet{{}, TaskKind::Regression, 1}, std::nullopt, {});
  EXPECT_EQ(e.verified + e.violated + e.unknown, 0u);
  EXPECT_TRUE(e.counterexamples.empty());
}

TEST(VerifyAll, ConstantNetworkNeverVerifiesExcludedValue) {
  const Network c({Layer{2, 1, {0, 0}, {3}, false}});
  SpecSet set;
  set.task = TaskKind::Regression;
  set.feature_dim = 2;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const double lo = i * 0.5;
    set.specs.push_back({random_box(rng, 2), Interval{lo, lo + 1}, "c"});
  }
  const auto s = verify_all(c, set, std::nullopt, {200, 1, 2});
  for (std::size_t i = 0; i < set.specs.size(); ++i) {
    const auto iv = std::get<Interval>(set.specs[i].output);
    const bool holds = iv.lo <= 3 && 3 <= iv.hi;
    EXPECT_EQ(s.results[i].status, holds ? VerifyStatus::Verified : VerifyStatus::Violated);
  }
  EXPECT_GT(s.violated, 0u);
}

TEST(VerifyAll, DeterministicAndTrustworthy) {
  std::mt19937_64 rng(13);
  const Network net = random_net(rng, 2, 1);
  SpecSet set;
  set.task = TaskKind::Regression;
  set.feature_dim = 2;
  for (int i = 0; i < 40; ++i) {
    const Hyperrectangle box = random_box(rng, 2);
    const auto b = ibp_bounds(net, box);
    // Some intervals enclose the bounds, others cut into them.
    const double cut = (i % 2 == 0) ? -0.1 : 0.3;
    const double width = b.upper[0] - b.lower[0];
    set.specs.push_back({box, Interval{b.lower[0] + cut * width, b.upper[0] - cut * width},
                         "r"});
  }
  const auto a = verify_all(net, set, std::nullopt, {500, 9, 4});
  const auto b = verify_all(net, set, std::nullopt, {500, 9, 4});
  ASSERT_EQ(a.counterexamples.size(), b.counterexamples.size());
  for (std::size_t i = 0; i < a.counterexamples.size(); ++i) {
    EXPECT_EQ(a.counterexamples[i].input, b.counterexamples[i].input);
  }
  for (std::size_t i = 0; i < set.specs.size(); ++i) {
    EXPECT_EQ(a.results[i].status, b.results[i].status);
    if (a.results[i].status != VerifyStatus::Verified) continue;
    // Adversarial resampling of a verified spec never finds a violation.
    std::mt19937_64 adv(i);
    for (int s = 0; s < 2000; ++s) {
      const auto y = forward(net, sample_in(adv, set.specs[i].input));
      ASSERT_TRUE(output_satisfies(set.specs[i].output, y));
    }
  }
  EXPECT_GT(a.verified, 0u);
  EXPECT_GT(a.violated, 0u);
}

}  // namespace
}  // namespace specforge
