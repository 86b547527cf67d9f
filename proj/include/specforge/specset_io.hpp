#pragma once

#include <filesystem>

#include "json.hpp"

#include "specforge/spec.hpp"

namespace specforge {

// Spec file layout:
//   {"task": "classification"|"regression", "feature_dim": k,
//    "generator": "...", "params": {...}, "data_stats": {...}?,
//    "specs": [{"lower": [...], "upper": [...],
//               "output": {"class": c} | {"lo": a, "hi": b},
//               "provenance": "..."}]}
// A null entry in lower/upper stands for -inf/+inf respectively.
nlohmann::json specset_to_json(const SpecSet& set);
SpecSet specset_from_json(const nlohmann::json& doc);

void save_specset(const SpecSet& set, const std::filesystem::path& path);
SpecSet load_specset(const std::filesystem::path& path);

nlohmann::json stats_to_json(const DatasetStats& stats);
DatasetStats stats_from_json(const nlohmann::json& doc);

}  // namespace specforge
