#include "specforge/specset_io.hpp"

#include <cmath>
#include <fstream>

#include "specforge/error.hpp"

namespace specforge {

using nlohmann::json;

namespace {

json bounds_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double b : v) {
    if (std::isfinite(b)) {
      arr.push_back(b);
    } else {
      arr.push_back(nullptr);
    }
  }
  return arr;
}

std::vector<double> bounds_from_json(const json& arr, double null_value,
                                     const std::string& where) {
  if (!arr.is_array()) throw DataError(where + " is not an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (v.is_null()) {
      out.push_back(null_value);
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      throw DataError(where + " holds a non-numeric entry");
    }
  }
  return out;
}

std::vector<double> numbers_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw DataError(where + " is not an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw DataError(where + " holds a non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json stats_to_json(const DatasetStats& stats) {
  return json{{"x_min", stats.x_min},
              {"x_max", stats.x_max},
              {"y_min", stats.y_min},
              {"y_max", stats.y_max}};
}

DatasetStats stats_from_json(const json& doc) {
  if (!doc.is_object()) throw DataError("data_stats is not an object");
  DatasetStats s;
  try {
    s.x_min = numbers_from_json(doc.at("x_min"), "data_stats.x_min");
    s.x_max = numbers_from_json(doc.at("x_max"), "data_stats.x_max");
    s.y_min = doc.at("y_min").get<double>();
    s.y_max = doc.at("y_max").get<double>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed data_stats: ") + e.what());
  }
  if (s.x_min.size() != s.x_max.size()) {
    throw DataError("data_stats x_min/x_max lengths differ");
  }
  for (std::size_t j = 0; j < s.x_min.size(); ++j) {
    if (s.x_min[j] > s.x_max[j]) throw DataError("data_stats has x_min > x_max");
  }
  if (s.y_min > s.y_max) throw DataError("data_stats has y_min > y_max");
  return s;
}

json specset_to_json(const SpecSet& set) {
  json doc;
  doc["task"] = to_string(set.task);
  doc["feature_dim"] = set.feature_dim;
  doc["generator"] = set.generator;
  doc["params"] = set.params;
  if (set.data_stats) doc["data_stats"] = stats_to_json(*set.data_stats);
  json specs = json::array();
  for (const auto& spec : set.specs) {
    json s;
    s["lower"] = bounds_to_json(spec.input.lower());
    s["upper"] = bounds_to_json(spec.input.upper());
    if (const auto* c = std::get_if<ClassLabel>(&spec.output)) {
      s["output"] = json{{"class", c->value}};
    } else {
      const auto& iv = std::get<Interval>(spec.output);
      s["output"] = json{{"lo", iv.lo}, {"hi", iv.hi}};
    }
    s["provenance"] = spec.provenance;
    specs.push_back(std::move(s));
  }
  doc["specs"] = std::move(specs);
  return doc;
}

SpecSet specset_from_json(const json& doc) {
  if (!doc.is_object()) throw DataError("spec file root is not an object");
  SpecSet set;
  try {
    set.task = parse_task(doc.at("task").get<std::string>());
    const auto dim = doc.at("feature_dim").get<long long>();
    if (dim < 1) throw DataError("feature_dim must be >= 1");
    set.feature_dim = static_cast<std::size_t>(dim);
    set.generator = doc.value("generator", std::string{});
    set.params = doc.value("params", json::object());
    if (doc.contains("data_stats")) {
      set.data_stats = stats_from_json(doc.at("data_stats"));
      if (set.data_stats->x_min.size() != set.feature_dim) {
        throw DataError("data_stats dimension differs from feature_dim");
      }
    }
    const auto& specs = doc.at("specs");
    if (!specs.is_array()) throw DataError("specs is not an array");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& s = specs[i];
      const std::string where = "specs[" + std::to_string(i) + "]";
      Specification spec;
      spec.input = Hyperrectangle(
          bounds_from_json(s.at("lower"), -INFINITY, where + ".lower"),
          bounds_from_json(s.at("upper"), INFINITY, where + ".upper"));
      const auto& out = s.at("output");
      if (out.contains("class")) {
        const auto c = out.at("class").get<long long>();
        if (c < 0) throw DataError(where + " has a negative class id");
        spec.output = ClassLabel{static_cast<int>(c)};
      } else {
        spec.output = make_interval(out.at("lo").get<double>(),
                                    out.at("hi").get<double>());
      }
      spec.provenance = s.value("provenance", std::string{});
      set.specs.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed spec file: ") + e.what());
  }
  set.validate();
  return set;
}

void save_specset(const SpecSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << specset_to_json(set).dump(2) << '\n';
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

SpecSet load_specset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return specset_from_json(doc);
}

}  // namespace specforge
