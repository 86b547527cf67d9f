#include "specforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "specforge/error.hpp"

namespace specforge {

std::string to_string(TaskKind task) {
  return task == TaskKind::Classification ? "classification" : "regression";
}

TaskKind parse_task(const std::string& name) {
  if (name == "classification") return TaskKind::Classification;
  if (name == "regression") return TaskKind::Regression;
  throw DataError("unknown task kind '" + name + "'");
}

namespace {

bool is_class_id(double v) {
  return v >= 0.0 && v == std::floor(v) && v < 2147483647.0;
}

}  // namespace

Dataset::Dataset(std::vector<double> features, std::size_t cols,
                 std::vector<double> labels, TaskKind task,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)),
      cols_(cols),
      labels_(std::move(labels)),
      task_(task),
      feature_names_(std::move(feature_names)) {
  if (cols_ == 0) throw DataError("dataset needs at least one feature");
  if (labels_.empty()) throw DataError("dataset needs at least one row");
  if (features_.size() != labels_.size() * cols_) {
    throw DataError("feature matrix has " + std::to_string(features_.size()) +
                    " values, expected " +
                    std::to_string(labels_.size() * cols_));
  }
  if (!feature_names_.empty() && feature_names_.size() != cols_) {
    throw DataError("feature name count does not match column count");
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!std::isfinite(features_[i])) {
      throw DataError("non-finite feature at row " +
                      std::to_string(i / cols_) + ", column " +
                      std::to_string(i % cols_));
    }
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double y = labels_[i];
    if (!std::isfinite(y)) {
      throw DataError("non-finite label at row " + std::to_string(i));
    }
    if (task_ == TaskKind::Classification && !is_class_id(y)) {
      throw DataError("classification label at row " + std::to_string(i) +
                      " is not a non-negative integer");
    }
  }
}

int Dataset::num_classes() const {
  if (task_ != TaskKind::Classification) {
    throw std::invalid_argument("num_classes on a regression dataset");
  }
  return static_cast<int>(*std::max_element(labels_.begin(), labels_.end())) +
         1;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(indices.size() * cols_);
  y.reserve(indices.size());
  for (std::size_t i : indices) {
    auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    y.push_back(labels_[i]);
  }
  return Dataset(std::move(x), cols_, std::move(y), task_, feature_names_);
}

DatasetStats compute_stats(const Dataset& data) {
  DatasetStats s;
  const std::size_t k = data.cols();
  s.x_min.assign(k, INFINITY);
  s.x_max.assign(k, -INFINITY);
  s.y_min = INFINITY;
  s.y_max = -INFINITY;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto r = data.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      s.x_min[j] = std::min(s.x_min[j], r[j]);
      s.x_max[j] = std::max(s.x_max[j], r[j]);
    }
    s.y_min = std::min(s.y_min, data.label(i));
    s.y_max = std::max(s.y_max, data.label(i));
  }
  return s;
}

DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b) {
  if (a.x_min.size() != b.x_min.size()) {
    throw DataError("cannot merge stats of different dimension");
  }
  DatasetStats s = a;
  for (std::size_t j = 0; j < s.x_min.size(); ++j) {
    s.x_min[j] = std::min(a.x_min[j], b.x_min[j]);
    s.x_max[j] = std::max(a.x_max[j], b.x_max[j]);
  }
  s.y_min = std::min(a.y_min, b.y_min);
  s.y_max = std::max(a.y_max, b.y_max);
  return s;
}

std::pair<Dataset, Dataset> split(const Dataset& data,
                                  const SplitOptions& options) {
  const std::size_t n = data.rows();
  if (n < 2) throw std::invalid_argument("split needs at least two rows");
  if (!(options.gen_fraction > 0.0 && options.gen_fraction < 1.0)) {
    throw std::invalid_argument("gen_fraction must lie in (0, 1)");
  }
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const auto n_gen = static_cast<std::size_t>(
      std::floor(options.gen_fraction * static_cast<double>(n) + 1e-9));
  if (n_gen == 0 || n_gen >= n) {
    throw std::invalid_argument(
        "gen_fraction " + std::to_string(options.gen_fraction) + " on " +
        std::to_string(n) + " rows leaves an empty fold");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (options.shuffle) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::span<const std::size_t> all(order);
  return {data.subset(all.first(n_gen)), data.subset(all.subspan(n_gen))};
}

std::string to_string(SpiralShape shape) {
  return shape == SpiralShape::Wound ? "wound" : "open";
}

SpiralShape parse_spiral_shape(const std::string& name) {
  if (name == "wound") return SpiralShape::Wound;
  if (name == "open") return SpiralShape::Open;
  throw std::invalid_argument("unknown spiral shape '" + name + "'");
}

Dataset synth_spiral(int points_per_class, int classes, double noise_std,
                     std::uint64_t seed, SpiralShape shape) {
  if (points_per_class < 1) {
    throw std::invalid_argument("points_per_class must be >= 1");
  }
  if (classes < 2) throw std::invalid_argument("classes must be >= 2");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> x;
  std::vector<double> y;
  x.reserve(static_cast<std::size_t>(points_per_class) * classes * 2);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < points_per_class; ++i) {
      const double r = static_cast<double>(i + 1) / points_per_class;
      const double base = shape == SpiralShape::Wound
                              ? two_pi * (static_cast<double>(c) / classes) +
                                    r * 1.5 * two_pi
                              : 4.0 * c + 4.0 * r;
      const double theta = base + noise_std * noise(rng);
      x.push_back(r * std::sin(theta));
      x.push_back(r * std::cos(theta));
      y.push_back(c);
    }
  }
  return Dataset(std::move(x), 2, std::move(y), TaskKind::Classification,
                 {"x0", "x1"});
}

std::vector<double> synth_throughput_series(std::size_t length,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Slowly drifting target level with occasional jumps; the observed value
  // relaxes towards it, giving runs of rising, falling and flat windows.
  constexpr double peak = 1000.0;
  double level = 0.5 * peak;
  double value = level;
  std::vector<double> series;
  series.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    if (unit(rng) < 0.02) level = unit(rng) * peak;
    level = std::clamp(level + 0.01 * peak * jitter(rng), 0.0, peak);
    value += 0.3 * (level - value) + 0.02 * peak * jitter(rng);
    value = std::clamp(value, 0.0, peak);
    series.push_back(value);
  }
  return series;
}

Dataset window_timeseries(std::span<const double> series, std::size_t window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (series.size() <= window) {
    throw std::invalid_argument("series of length " +
                                std::to_string(series.size()) +
                                " is too short for window " +
                                std::to_string(window));
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = window; i < series.size(); ++i) {
    x.insert(x.end(), series.begin() + static_cast<std::ptrdiff_t>(i - window),
             series.begin() + static_cast<std::ptrdiff_t>(i));
    y.push_back(series[i]);
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < window; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(x), window, std::move(y), TaskKind::Regression,
                 std::move(names));
}

Dataset bin_labels(const Dataset& data, int bins, bool bin_features) {
  if (data.task() != TaskKind::Regression) {
    throw std::invalid_argument("bin_labels needs a regression dataset");
  }
  if (bins < 2) throw std::invalid_argument("bins must be >= 2");
  const double y_max = compute_stats(data).y_max;
  if (!(y_max > 0.0)) {
    throw DataError("cannot bin labels: maximum label is not positive");
  }
  auto to_bin = [&](double v) {
    const double b = std::floor(static_cast<double>(bins) * v / y_max);
    return std::clamp(b, 0.0, static_cast<double>(bins - 1));
  };
  std::vector<double> x = data.features();
  if (bin_features) {
    for (double& v : x) v = to_bin(v);
  }
  std::vector<double> y;
  y.reserve(data.rows());
  for (double v : data.labels()) y.push_back(to_bin(v));
  return Dataset(std::move(x), data.cols(), std::move(y),
                 TaskKind::Classification, data.feature_names());
}

}  // namespace specforge
