#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "specforge/dataset.hpp"

namespace specforge {

// Closed axis-aligned box. Bounds may be -inf/+inf.
class Hyperrectangle {
 public:
  Hyperrectangle() = default;
  // Throws DataError if dimensions differ, a bound is NaN, or lower > upper.
  Hyperrectangle(std::vector<double> lower, std::vector<double> upper);

  static Hyperrectangle unbounded(std::size_t dim);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  bool is_finite() const;

  // Dimension is checked by the free function `contains`; this one assumes it.
  bool contains_unchecked(std::span<const double> point) const {
    for (std::size_t j = 0; j < lower_.size(); ++j) {
      if (!(lower_[j] <= point[j] && point[j] <= upper_[j])) return false;
    }
    return true;
  }

  friend bool operator==(const Hyperrectangle&, const Hyperrectangle&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

bool contains(const Hyperrectangle& box, std::span<const double> point);

struct ClassLabel {
  int value = 0;
  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

using OutputConstraint = std::variant<ClassLabel, Interval>;

// Throws DataError for an Interval with lo > hi or a non-finite end.
OutputConstraint make_interval(double lo, double hi);

bool matches_task(const OutputConstraint& constraint, TaskKind task);

// ClassLabel(c): label == c. Interval: lo <= label <= hi.
bool satisfies_output(const OutputConstraint& constraint, double label);
// As above, but throws std::invalid_argument if the variant does not fit
// the task kind.
bool satisfies_output(const OutputConstraint& constraint, double label,
                      TaskKind task);

std::string describe(const OutputConstraint& constraint);

struct Specification {
  Hyperrectangle input;
  OutputConstraint output;
  std::string provenance;
  friend bool operator==(const Specification&, const Specification&) = default;
};

struct SpecSet {
  std::vector<Specification> specs;
  TaskKind task = TaskKind::Classification;
  std::size_t feature_dim = 0;
  std::string generator;
  // Effective generator/run parameters, echoed into saved files.
  nlohmann::json params = nlohmann::json::object();
  // Stats of the full dataset the set was mined from, when known.
  std::optional<DatasetStats> data_stats;

  // Throws DataError if any spec disagrees with feature_dim or task.
  void validate() const;
};

bool operator==(const DatasetStats& a, const DatasetStats& b);
bool operator==(const SpecSet& a, const SpecSet& b);

// Output constraint derived from the labels of the given rows of `gen`.
// Classification: most common label, ties to the smallest id.
// Regression: [mean - std, mean + std] with the population std.
// Returns nothing for an empty selection.
std::optional<OutputConstraint> extract_output(const Dataset& gen,
                                               std::span<const std::size_t> rows);

// Collects the generation points inside `box` (closed) and derives the
// output constraint from their labels.
std::optional<Specification> extract_specification(const Hyperrectangle& box,
                                                   const Dataset& gen,
                                                   TaskKind task);

// Drops specs whose output range is too permissive: classification specs
// must pin one class, regression intervals must be no wider than
// alpha * (y_max - y_min).
SpecSet filter_unbounded(const SpecSet& set, double alpha,
                         const DatasetStats& stats);

}  // namespace specforge
