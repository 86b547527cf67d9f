#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "specforge/dataset.hpp"
#include "specforge/spec.hpp"

namespace specforge {

// Affine layer y = W x + b, optionally followed by ReLU. Weights are
// row-major: weights[i * inputs + j] multiplies input j into output i.
struct Layer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  bool relu = false;

  double w(std::size_t i, std::size_t j) const { return weights[i * inputs + j]; }
};

class Network {
 public:
  Network() = default;
  // Throws DataError on shape mismatch, non-finite parameters or a ReLU on
  // the last layer.
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t input_dim() const { return layers_.front().inputs; }
  std::size_t output_dim() const { return layers_.back().outputs; }

 private:
  std::vector<Layer> layers_;
};

// {"layers": [{"weights": [[...], ...], "bias": [...], "relu": bool}, ...]}
Network network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const Network& net);
Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

std::vector<double> forward(const Network& net, std::span<const double> x);

struct IntervalVector {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Interval bound propagation through the affine/ReLU stack. Each output
// bound is accumulated term by term in the same order forward() uses, so by
// monotonicity of rounded arithmetic the bounds enclose forward(net, x) for
// every x in the box exactly, not just up to rounding. Requires a finite box.
IntervalVector ibp_bounds(const Network& net, const Hyperrectangle& box);

// Replaces infinite sides with the data range widened by `margin` times its
// width on each side.
Hyperrectangle clamp_box(const Hyperrectangle& box, const DatasetStats& stats,
                         double margin = 0.1);

struct SamplerConfig {
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  std::size_t max_counterexamples = 10;
};

enum class CounterexampleSource { Dataset, Sampled };
std::string to_string(CounterexampleSource source);

struct Counterexample {
  std::vector<double> input;
  std::vector<double> output;
  OutputConstraint expected;
  CounterexampleSource source = CounterexampleSource::Sampled;
  std::size_t spec_index = 0;
  std::string provenance;
};

enum class VerifyStatus { Verified, Violated, Unknown };
std::string to_string(VerifyStatus status);

struct VerifyResult {
  VerifyStatus status = VerifyStatus::Unknown;
  IntervalVector output_bounds;
  std::vector<Counterexample> counterexamples;
  // The box IBP ran on, and whether infinite sides had to be clamped.
  Hyperrectangle checked_box;
  bool clamped = false;
};

// True when the network output meets the constraint: the single output lies
// in the interval, or the argmax (first on ties) equals the class.
bool output_satisfies(const OutputConstraint& constraint,
                      std::span<const double> output);

// Proves the spec with IBP when possible, otherwise searches for
// counterexamples among `probe` rows inside the box and then among uniform
// samples. `stats` is needed only when the box has infinite sides.
VerifyResult verify_spec(const Network& net, const Specification& spec,
                         const std::optional<DatasetStats>& stats,
                         const SamplerConfig& sampler,
                         const Dataset* probe = nullptr,
                         std::size_t spec_index = 0);

struct VerifySummary {
  std::size_t verified = 0;
  std::size_t violated = 0;
  std::size_t unknown = 0;
  std::vector<VerifyResult> results;  // one per spec, in set order
  std::vector<Counterexample> counterexamples;
};

// Specs are checked in parallel; spec i samples with a generator seeded from
// (sampler.seed, i), so the summary does not depend on thread count.
VerifySummary verify_all(const Network& net, const SpecSet& set,
                         const std::optional<DatasetStats>& stats,
                         const SamplerConfig& sampler,
                         const Dataset* probe = nullptr);

}  // namespace specforge
