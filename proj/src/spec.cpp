#include "specforge/spec.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "specforge/error.hpp"

namespace specforge {

Hyperrectangle::Hyperrectangle(std::vector<double> lower,
                               std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw DataError("box has " + std::to_string(lower_.size()) +
                    " lower bounds but " + std::to_string(upper_.size()) +
                    " upper bounds");
  }
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j])) {
      throw DataError("box bound in dimension " + std::to_string(j) + " is NaN");
    }
    if (lower_[j] > upper_[j]) {
      std::ostringstream msg;
      msg << "box lower bound " << lower_[j] << " exceeds upper bound "
          << upper_[j] << " in dimension " << j;
      throw DataError(msg.str());
    }
  }
}

Hyperrectangle Hyperrectangle::unbounded(std::size_t dim) {
  return Hyperrectangle(std::vector<double>(dim, -INFINITY),
                        std::vector<double>(dim, INFINITY));
}

bool Hyperrectangle::is_finite() const {
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) return false;
  }
  return true;
}

bool contains(const Hyperrectangle& box, std::span<const double> point) {
  if (box.dim() != point.size()) {
    throw std::invalid_argument("point of dimension " +
                                std::to_string(point.size()) +
                                " tested against box of dimension " +
                                std::to_string(box.dim()));
  }
  return box.contains_unchecked(point);
}

OutputConstraint make_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DataError("output interval bounds must be finite");
  }
  if (lo > hi) throw DataError("output interval has lo > hi");
  return Interval{lo, hi};
}

bool matches_task(const OutputConstraint& constraint, TaskKind task) {
  return std::holds_alternative<ClassLabel>(constraint) ==
         (task == TaskKind::Classification);
}

bool satisfies_output(const OutputConstraint& constraint, double label) {
  if (const auto* c = std::get_if<ClassLabel>(&constraint)) {
    return label == static_cast<double>(c->value);
  }
  const auto& iv = std::get<Interval>(constraint);
  return iv.lo <= label && label <= iv.hi;
}

bool satisfies_output(const OutputConstraint& constraint, double label,
                      TaskKind task) {
  if (!matches_task(constraint, task)) {
    throw std::invalid_argument("output constraint " + describe(constraint) +
                                " does not fit a " + to_string(task) + " task");
  }
  return satisfies_output(constraint, label);
}

std::string describe(const OutputConstraint& constraint) {
  std::ostringstream out;
  if (const auto* c = std::get_if<ClassLabel>(&constraint)) {
    out << "class " << c->value;
  } else {
    const auto& iv = std::get<Interval>(constraint);
    out << '[' << iv.lo << ", " << iv.hi << ']';
  }
  return out.str();
}

void SpecSet::validate() const {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].input.dim() != feature_dim) {
      throw DataError("spec " + std::to_string(i) + " has dimension " +
                      std::to_string(specs[i].input.dim()) +
                      ", set declares " + std::to_string(feature_dim));
    }
    if (!matches_task(specs[i].output, task)) {
      throw DataError("spec " + std::to_string(i) + " output " +
                      describe(specs[i].output) + " does not fit a " +
                      to_string(task) + " set");
    }
  }
}

bool operator==(const DatasetStats& a, const DatasetStats& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.y_min == b.y_min &&
         a.y_max == b.y_max;
}

bool operator==(const SpecSet& a, const SpecSet& b) {
  return a.specs == b.specs && a.task == b.task &&
         a.feature_dim == b.feature_dim && a.generator == b.generator &&
         a.params == b.params && a.data_stats == b.data_stats;
}

std::optional<OutputConstraint> extract_output(
    const Dataset& gen, std::span<const std::size_t> rows) {
  if (rows.empty()) return std::nullopt;
  if (gen.task() == TaskKind::Classification) {
    std::map<int, std::size_t> counts;
    for (std::size_t i : rows) ++counts[static_cast<int>(gen.label(i))];
    // std::map iterates ascending, so strict > keeps the smallest id on ties.
    int best = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts) {
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    return ClassLabel{best};
  }
  const double n = static_cast<double>(rows.size());
  double sum = 0.0;
  for (std::size_t i : rows) sum += gen.label(i);
  const double mean = sum / n;
  double sq = 0.0;
  for (std::size_t i : rows) {
    const double d = gen.label(i) - mean;
    sq += d * d;
  }
  const double std_dev = std::sqrt(sq / n);
  return Interval{mean - std_dev, mean + std_dev};
}

std::optional<Specification> extract_specification(const Hyperrectangle& box,
                                                   const Dataset& gen,
                                                   TaskKind task) {
  if (box.dim() != gen.cols()) {
    throw std::invalid_argument("box dimension " + std::to_string(box.dim()) +
                                " differs from dataset dimension " +
                                std::to_string(gen.cols()));
  }
  if (task != gen.task()) {
    throw std::invalid_argument("task kind differs from the dataset's");
  }
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < gen.rows(); ++i) {
    if (box.contains_unchecked(gen.row(i))) inside.push_back(i);
  }
  auto output = extract_output(gen, inside);
  if (!output) return std::nullopt;
  return Specification{box, *output, {}};
}

SpecSet filter_unbounded(const SpecSet& set, double alpha,
                         const DatasetStats& stats) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  SpecSet out = set;
  out.specs.clear();
  const double max_width = alpha * (stats.y_max - stats.y_min);
  for (const auto& spec : set.specs) {
    bool keep = false;
    if (set.task == TaskKind::Classification) {
      keep = std::holds_alternative<ClassLabel>(spec.output);
    } else if (const auto* iv = std::get_if<Interval>(&spec.output)) {
      keep = iv->hi - iv->lo <= max_width;
    }
    if (keep) out.specs.push_back(spec);
  }
  return out;
}

}  // namespace specforge
