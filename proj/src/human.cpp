#include <algorithm>
#include <array>
#include <stdexcept>

#include "specforge/generators.hpp"

namespace specforge {

namespace {

constexpr int kWindow = 4;

int floor_div2(int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

}  // namespace

int trend_prediction(std::span<const int> window, int bins) {
  if (window.size() != kWindow) {
    throw std::invalid_argument("trend_prediction expects a 4-step window");
  }
  // With x = 0..3 the least-squares line evaluated at x = 4 reduces to
  // (sum_i i*y_i - sum_i y_i) / 2, so the prediction is a multiple of 1/2
  // and can be rounded exactly in integers.
  int weighted = 0;
  int total = 0;
  for (int i = 0; i < kWindow; ++i) {
    weighted += i * window[static_cast<std::size_t>(i)];
    total += window[static_cast<std::size_t>(i)];
  }
  const int twice = weighted - total;
  int pred = floor_div2(twice);
  if (twice % 2 != 0 && pred % 2 != 0) ++pred;  // tie: round to even
  return std::clamp(pred, 0, bins - 1);
}

SpecSet gen_human_throughput(int bins) {
  if (bins < 2) throw std::invalid_argument("bins must be >= 2");

  SpecSet set;
  set.task = TaskKind::Classification;
  set.feature_dim = kWindow;
  set.generator = "human";
  set.params = {{"bins", bins}, {"window", kWindow}};

  std::array<int, kWindow> w{};
  long long total = 1;
  for (int i = 0; i < kWindow; ++i) total *= bins;
  for (long long code = 0; code < total; ++code) {
    long long rest = code;
    for (int i = kWindow - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<int>(rest % bins);
      rest /= bins;
    }
    bool increasing = true;
    bool decreasing = true;
    bool stable = true;
    for (int i = 1; i < kWindow; ++i) {
      increasing = increasing && w[i] > w[i - 1];
      decreasing = decreasing && w[i] < w[i - 1];
      stable = stable && w[i] == w[i - 1];
    }
    if (!increasing && !decreasing && !stable) continue;

    // Bin indices are integers; a unit-width box centred on each index
    // contains exactly that index and nothing else.
    std::vector<double> lo(kWindow);
    std::vector<double> hi(kWindow);
    for (int i = 0; i < kWindow; ++i) {
      lo[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] - 0.5;
      hi[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] + 0.5;
    }
    const int label = stable ? w[0] : trend_prediction(w, bins);
    std::string kind = stable ? "stable" : increasing ? "increasing" : "decreasing";
    std::string name = "human:" + kind + ":";
    for (int i = 0; i < kWindow; ++i) {
      name += (i ? "," : "") + std::to_string(w[static_cast<std::size_t>(i)]);
    }
    set.specs.push_back(
        {Hyperrectangle(std::move(lo), std::move(hi)), ClassLabel{label}, name});
  }
  return set;
}

}  // namespace specforge
