#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace specforge {

enum class TaskKind { Classification, Regression };

std::string to_string(TaskKind task);
TaskKind parse_task(const std::string& name);

// Row-major N x k feature matrix with one label per row. Classification
// labels are stored as doubles holding non-negative integers.
class Dataset {
 public:
  Dataset() = default;
  // Validates shape and finiteness; throws DataError on violation.
  Dataset(std::vector<double> features, std::size_t cols,
          std::vector<double> labels, TaskKind task,
          std::vector<std::string> feature_names = {});

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return cols_; }
  TaskKind task() const { return task_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * cols_, cols_};
  }
  double label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  // Number of classes C (max label + 1). Classification only.
  int num_classes() const;

  // Rows selected by index, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> features_;
  std::size_t cols_ = 0;
  std::vector<double> labels_;
  TaskKind task_ = TaskKind::Classification;
  std::vector<std::string> feature_names_;
};

struct DatasetStats {
  std::vector<double> x_min;
  std::vector<double> x_max;
  double y_min = 0.0;
  double y_max = 0.0;
};

DatasetStats compute_stats(const Dataset& data);
// Stats of the union of the two underlying datasets.
DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b);

// Label column chosen by header name, or by zero-based index when the
// selector is an integer that is not itself a header name.
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column, TaskKind task);
// One numeric column (by name or index) of a CSV with a header row.
std::vector<double> load_csv_column(const std::filesystem::path& path,
                                    const std::string& column);
void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_name = "label");

struct SplitOptions {
  double gen_fraction = 0.9;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

// Returns (generation fold, evaluation fold).
std::pair<Dataset, Dataset> split(const Dataset& data,
                                  const SplitOptions& options);

enum class SpiralShape {
  // Angle 2*pi*c/classes + 3*pi*r: every arm winds one and a half turns.
  Wound,
  // Angle 4*c + 4*r: each arm sweeps four radians, as in the widely used
  // classroom spiral data.
  Open,
};

std::string to_string(SpiralShape shape);
SpiralShape parse_spiral_shape(const std::string& name);

// Arm c, point i: radius r = (i + 1) / points_per_class, angle from the
// shape plus Gaussian noise, point (r sin(angle), r cos(angle)). Starting at
// r > 0 keeps the arms from sharing the origin.
Dataset synth_spiral(int points_per_class, int classes, double noise_std,
                     std::uint64_t seed, SpiralShape shape = SpiralShape::Wound);

// Positive, regime-switching series loosely shaped like link throughput.
std::vector<double> synth_throughput_series(std::size_t length,
                                            std::uint64_t seed);

Dataset window_timeseries(std::span<const double> series, std::size_t window);

// Maps regression labels to floor(bins * y / y_max) clamped to
// [0, bins-1]. With bin_features set, features are mapped the same way
// (using the label maximum as the common scale) so rows hold bin indices.
Dataset bin_labels(const Dataset& data, int bins, bool bin_features = false);

}  // namespace specforge
