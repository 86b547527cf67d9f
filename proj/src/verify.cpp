#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "specforge/error.hpp"
#include "specforge/verifier.hpp"

namespace specforge {

std::string to_string(CounterexampleSource source) {
  return source == CounterexampleSource::Dataset ? "dataset" : "sampled";
}

std::string to_string(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::Verified:
      return "verified";
    case VerifyStatus::Violated:
      return "violated";
    case VerifyStatus::Unknown:
      return "unknown";
  }
  return "?";
}

Hyperrectangle clamp_box(const Hyperrectangle& box, const DatasetStats& stats,
                         double margin) {
  if (stats.x_min.size() != box.dim()) {
    throw DataError("dataset stats dimension differs from the box dimension");
  }
  auto lo = box.lower();
  auto hi = box.upper();
  for (std::size_t j = 0; j < box.dim(); ++j) {
    const double pad = margin * (stats.x_max[j] - stats.x_min[j]);
    if (!std::isfinite(lo[j])) lo[j] = std::min(stats.x_min[j] - pad, hi[j]);
    if (!std::isfinite(hi[j])) hi[j] = std::max(stats.x_max[j] + pad, lo[j]);
  }
  return Hyperrectangle(std::move(lo), std::move(hi));
}

bool output_satisfies(const OutputConstraint& constraint,
                      std::span<const double> output) {
  if (const auto* c = std::get_if<ClassLabel>(&constraint)) {
    const auto best = std::max_element(output.begin(), output.end()) - output.begin();
    return best == c->value;
  }
  return satisfies_output(constraint, output[0]);
}

namespace {

void check_shapes(const Network& net, const Specification& spec) {
  if (spec.input.dim() != net.input_dim()) {
    throw DataError("spec has dimension " + std::to_string(spec.input.dim()) +
                    " but the network takes " +
                    std::to_string(net.input_dim()) + " inputs");
  }
  if (const auto* c = std::get_if<ClassLabel>(&spec.output)) {
    if (net.output_dim() < 2 ||
        static_cast<std::size_t>(c->value) >= net.output_dim()) {
      throw DataError("class " + std::to_string(c->value) +
                      " cannot be checked against a network with " +
                      std::to_string(net.output_dim()) + " outputs");
    }
  } else if (net.output_dim() != 1) {
    throw DataError("interval specs need a single-output network, got " +
                    std::to_string(net.output_dim()) + " outputs");
  }
}

bool bounds_prove(const OutputConstraint& constraint, const IntervalVector& b) {
  if (const auto* c = std::get_if<ClassLabel>(&constraint)) {
    const auto target = static_cast<std::size_t>(c->value);
    for (std::size_t j = 0; j < b.lower.size(); ++j) {
      if (j != target && !(b.lower[target] > b.upper[j])) return false;
    }
    return true;
  }
  const auto& iv = std::get<Interval>(constraint);
  return iv.lo <= b.lower[0] && b.upper[0] <= iv.hi;
}

std::mt19937_64 spec_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

VerifyResult verify_spec(const Network& net, const Specification& spec,
                         const std::optional<DatasetStats>& stats,
                         const SamplerConfig& sampler, const Dataset* probe,
                         std::size_t spec_index) {
  check_shapes(net, spec);
  VerifyResult res;
  if (spec.input.is_finite()) {
    res.checked_box = spec.input;
  } else {
    if (!stats) {
      throw DataError("spec '" + spec.provenance +
                      "' has infinite sides and no dataset stats to clamp them");
    }
    res.checked_box = clamp_box(spec.input, *stats);
    res.clamped = true;
  }
  res.output_bounds = ibp_bounds(net, res.checked_box);
  if (bounds_prove(spec.output, res.output_bounds)) {
    res.status = VerifyStatus::Verified;
    return res;
  }

  auto record = [&](std::span<const double> x, std::vector<double> y,
                    CounterexampleSource source) {
    res.counterexamples.push_back({std::vector<double>(x.begin(), x.end()),
                                   std::move(y), spec.output, source, spec_index,
                                   spec.provenance});
  };
  const std::size_t cap = std::max<std::size_t>(1, sampler.max_counterexamples);

  if (probe != nullptr) {
    if (probe->cols() != spec.input.dim()) {
      throw DataError("probe dataset dimension differs from the spec's");
    }
    for (std::size_t i = 0; i < probe->rows() && res.counterexamples.size() < cap; ++i) {
      const auto x = probe->row(i);
      if (!res.checked_box.contains_unchecked(x)) continue;
      auto y = forward(net, x);
      if (!output_satisfies(spec.output, y)) {
        record(x, std::move(y), CounterexampleSource::Dataset);
      }
    }
  }

  auto rng = spec_rng(sampler.seed, spec_index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& lo = res.checked_box.lower();
  const auto& hi = res.checked_box.upper();
  std::vector<double> x(lo.size());
  for (std::size_t s = 0; s < sampler.budget && res.counterexamples.size() < cap; ++s) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = std::min(hi[j], lo[j] + unit(rng) * (hi[j] - lo[j]));
    }
    auto y = forward(net, x);
    if (!output_satisfies(spec.output, y)) {
      record(x, std::move(y), CounterexampleSource::Sampled);
    }
  }

  res.status = res.counterexamples.empty() ? VerifyStatus::Unknown
                                           : VerifyStatus::Violated;
  return res;
}

VerifySummary verify_all(const Network& net, const SpecSet& set,
                         const std::optional<DatasetStats>& stats,
                         const SamplerConfig& sampler, const Dataset* probe) {
  for (const auto& spec : set.specs) check_shapes(net, spec);

  VerifySummary summary;
  summary.results.resize(set.specs.size());
  const auto n = static_cast<std::ptrdiff_t>(set.specs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    try {
      summary.results[i] = verify_spec(net, set.specs[i], stats, sampler, probe, i);
    } catch (...) {
#pragma omp critical(specforge_verify_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : summary.results) {
    switch (r.status) {
      case VerifyStatus::Verified:
        ++summary.verified;
        break;
      case VerifyStatus::Violated:
        ++summary.violated;
        break;
      case VerifyStatus::Unknown:
        ++summary.unknown;
        break;
    }
    summary.counterexamples.insert(summary.counterexamples.end(),
                                   r.counterexamples.begin(),
                                   r.counterexamples.end());
  }
  return summary;
}

}  // namespace specforge
