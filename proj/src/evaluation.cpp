#include "specforge/evaluation.hpp"

#include <cstdio>
#include <iomanip>
#include <stdexcept>

#include "specforge/error.hpp"

namespace specforge {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::TP:
      return "TP";
    case Verdict::FP:
      return "FP";
    case Verdict::FN:
      return "FN";
  }
  return "?";
}

namespace {

PointVerdict classify_unchecked(const SpecSet& set, std::span<const double> x,
                                double y) {
  PointVerdict v;
  bool all_hold = true;
  for (std::size_t j = 0; j < set.specs.size(); ++j) {
    const auto& spec = set.specs[j];
    if (!spec.input.contains_unchecked(x)) continue;
    v.covering_spec_ids.push_back(j);
    all_hold = all_hold && satisfies_output(spec.output, y);
  }
  if (v.covering_spec_ids.empty()) {
    v.verdict = Verdict::FN;
  } else {
    v.verdict = all_hold ? Verdict::TP : Verdict::FP;
  }
  return v;
}

void check_compatible(const SpecSet& set, const Dataset& eval) {
  if (set.feature_dim != eval.cols()) {
    throw DataError("spec set has feature_dim " +
                    std::to_string(set.feature_dim) +
                    " but the evaluation dataset has " +
                    std::to_string(eval.cols()) + " features");
  }
  if (set.task != eval.task()) {
    throw DataError("spec set task is " + to_string(set.task) +
                    " but the evaluation dataset is " + to_string(eval.task()));
  }
  set.validate();
}

void tally(EvalReport& report, Verdict v) {
  switch (v) {
    case Verdict::TP:
      ++report.tp;
      break;
    case Verdict::FP:
      ++report.fp;
      break;
    case Verdict::FN:
      ++report.fn;
      break;
  }
}

}  // namespace

PointVerdict classify_point(const SpecSet& set, std::span<const double> x,
                            double y) {
  if (x.size() != set.feature_dim) {
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " differs from spec set dimension " +
                                std::to_string(set.feature_dim));
  }
  for (const auto& spec : set.specs) {
    if (!matches_task(spec.output, set.task)) {
      throw std::invalid_argument("spec output " + describe(spec.output) +
                                  " does not fit a " + to_string(set.task) +
                                  " set");
    }
  }
  return classify_unchecked(set, x, y);
}

void finalize_metrics(EvalReport& r) {
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  const double s = r.precision + r.recall;
  r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
}

EvalReport evaluate(const SpecSet& set, const Dataset& eval,
                    const DatasetStats& stats, const EvalOptions& options) {
  check_compatible(set, eval);
  const SpecSet kept = filter_unbounded(set, options.alpha, stats);

  const auto n = static_cast<std::ptrdiff_t>(eval.rows());
  std::vector<PointVerdict> verdicts(eval.rows());
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : tp, fp, fn)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    verdicts[i] = classify_unchecked(kept, eval.row(i), eval.label(i));
    switch (verdicts[i].verdict) {
      case Verdict::TP:
        ++tp;
        break;
      case Verdict::FP:
        ++fp;
        break;
      case Verdict::FN:
        ++fn;
        break;
    }
  }

  EvalReport report;
  report.tp = tp;
  report.fp = fp;
  report.fn = fn;
  report.specs_used = kept.specs.size();
  report.specs_filtered = set.specs.size() - kept.specs.size();
  finalize_metrics(report);
  if (options.keep_per_point) report.per_point = std::move(verdicts);
  return report;
}

EvalReport evaluate_serial(const SpecSet& set, const Dataset& eval,
                           const DatasetStats& stats,
                           const EvalOptions& options) {
  check_compatible(set, eval);
  const SpecSet kept = filter_unbounded(set, options.alpha, stats);
  EvalReport report;
  std::vector<PointVerdict> verdicts;
  for (std::size_t i = 0; i < eval.rows(); ++i) {
    auto v = classify_unchecked(kept, eval.row(i), eval.label(i));
    tally(report, v.verdict);
    if (options.keep_per_point) verdicts.push_back(std::move(v));
  }
  report.specs_used = kept.specs.size();
  report.specs_filtered = set.specs.size() - kept.specs.size();
  finalize_metrics(report);
  if (options.keep_per_point) report.per_point = std::move(verdicts);
  return report;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json doc{{"tp", r.tp},
                     {"fp", r.fp},
                     {"fn", r.fn},
                     {"precision", r.precision},
                     {"recall", r.recall},
                     {"f1", r.f1},
                     {"specs_used", r.specs_used},
                     {"specs_filtered", r.specs_filtered}};
  if (r.per_point) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& v : *r.per_point) {
      points.push_back(
          {{"verdict", to_string(v.verdict)}, {"covering", v.covering_spec_ids}});
    }
    doc["per_point"] = std::move(points);
  }
  return doc;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

void print_report_table(std::ostream& out, const std::string& method,
                        const EvalReport& r) {
  const int mw = std::max<int>(8, static_cast<int>(method.size()));
  out << std::left << std::setw(mw) << "Method" << std::right << std::setw(10)
      << "#TP" << std::setw(10) << "#FP" << std::setw(10) << "#FN"
      << std::setw(15) << "Precision(%)" << std::setw(12) << "Recall(%)"
      << std::setw(10) << "F1(%)" << '\n';
  out << std::left << std::setw(mw) << method << std::right << std::setw(10)
      << r.tp << std::setw(10) << r.fp << std::setw(10) << r.fn
      << std::setw(15) << format_percent(r.precision) << std::setw(12)
      << format_percent(r.recall) << std::setw(10) << format_percent(r.f1)
      << '\n';
}

}  // namespace specforge
