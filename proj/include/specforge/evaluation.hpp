#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "specforge/dataset.hpp"
#include "specforge/spec.hpp"

namespace specforge {

enum class Verdict { TP, FP, FN };

std::string to_string(Verdict v);

struct PointVerdict {
  Verdict verdict = Verdict::FN;
  std::vector<std::size_t> covering_spec_ids;  // ascending
  friend bool operator==(const PointVerdict&, const PointVerdict&) = default;
};

struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t specs_filtered = 0;
  std::size_t specs_used = 0;
  std::optional<std::vector<PointVerdict>> per_point;
};

// A point with no covering spec is FN. A covered point is TP only when its
// label satisfies every covering spec; otherwise FP.
PointVerdict classify_point(const SpecSet& set, std::span<const double> x,
                            double y);

// Fills precision/recall/F1 from the counts. Zero denominators give 0.
void finalize_metrics(EvalReport& report);

struct EvalOptions {
  double alpha = 0.1;
  bool keep_per_point = false;
};

// Filters the set with filter_unbounded, then classifies every evaluation
// row in parallel.
EvalReport evaluate(const SpecSet& set, const Dataset& eval,
                    const DatasetStats& stats, const EvalOptions& options = {});

// Single-threaded reference path with the same contract as evaluate.
EvalReport evaluate_serial(const SpecSet& set, const Dataset& eval,
                           const DatasetStats& stats,
                           const EvalOptions& options = {});

nlohmann::json report_to_json(const EvalReport& report);

// Aligned table with #TP, #FP, #FN, Precision, Recall, F1; percentages with
// two decimals.
void print_report_table(std::ostream& out, const std::string& method,
                        const EvalReport& report);

// Percentage with two decimals. The double is formatted exactly, so a value
// sitting on a decimal tie rounds half to even.
std::string format_percent(double fraction);

}  // namespace specforge
