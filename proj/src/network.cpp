#include <cmath>
#include <fstream>

#include "specforge/error.hpp"
#include "specforge/verifier.hpp"

namespace specforge {

using nlohmann::json;

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DataError("network has no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.inputs == 0 || layer.outputs == 0) {
      throw DataError(where + " has an empty weight matrix");
    }
    if (layer.weights.size() != layer.inputs * layer.outputs) {
      throw DataError(where + " weight count does not match its shape");
    }
    if (layer.bias.size() != layer.outputs) {
      throw DataError(where + " has " + std::to_string(layer.outputs) +
                      "x" + std::to_string(layer.inputs) + " weights but a bias of length " +
                      std::to_string(layer.bias.size()));
    }
    if (l > 0 && layer.inputs != layers_[l - 1].outputs) {
      throw DataError(where + " expects " + std::to_string(layer.inputs) +
                      " inputs but the previous layer produces " +
                      std::to_string(layers_[l - 1].outputs));
    }
    for (double v : layer.weights) {
      if (!std::isfinite(v)) throw DataError(where + " has a non-finite weight");
    }
    for (double v : layer.bias) {
      if (!std::isfinite(v)) throw DataError(where + " has a non-finite bias");
    }
  }
  if (layers_.back().relu) throw DataError("the final layer must not apply ReLU");
}

Network network_from_json(const json& doc) {
  std::vector<Layer> layers;
  try {
    const auto& arr = doc.at("layers");
    if (!arr.is_array()) throw DataError("'layers' is not an array");
    for (std::size_t l = 0; l < arr.size(); ++l) {
      const auto& jl = arr[l];
      const std::string where = "layer " + std::to_string(l);
      Layer layer;
      const auto& rows = jl.at("weights");
      if (!rows.is_array() || rows.empty()) {
        throw DataError(where + " weights must be a non-empty array of rows");
      }
      layer.outputs = rows.size();
      layer.inputs = rows[0].size();
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != layer.inputs) {
          throw DataError(where + " weights are ragged");
        }
        for (const auto& v : row) {
          if (!v.is_number()) throw DataError(where + " has a non-numeric weight");
          layer.weights.push_back(v.get<double>());
        }
      }
      for (const auto& v : jl.at("bias")) {
        if (!v.is_number()) throw DataError(where + " has a non-numeric bias");
        layer.bias.push_back(v.get<double>());
      }
      layer.relu = jl.value("relu", false);
      layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed network file: ") + e.what());
  }
  return Network(std::move(layers));
}

json network_to_json(const Network& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    json rows = json::array();
    for (std::size_t i = 0; i < layer.outputs; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < layer.inputs; ++j) row.push_back(layer.w(i, j));
      rows.push_back(std::move(row));
    }
    layers.push_back({{"weights", rows}, {"bias", layer.bias}, {"relu", layer.relu}});
  }
  return json{{"layers", layers}};
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return network_from_json(doc);
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << network_to_json(net).dump(2) << '\n';
}

std::vector<double> forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DataError("network expects " + std::to_string(net.input_dim()) +
                    " inputs, got " + std::to_string(x.size()));
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (const auto& layer : net.layers()) {
    next.assign(layer.outputs, 0.0);
    for (std::size_t i = 0; i < layer.outputs; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < layer.inputs; ++j) acc += layer.w(i, j) * cur[j];
      acc += layer.bias[i];
      next[i] = layer.relu ? std::max(acc, 0.0) : acc;
    }
    std::swap(cur, next);
  }
  return cur;
}

IntervalVector ibp_bounds(const Network& net, const Hyperrectangle& box) {
  if (box.dim() != net.input_dim()) {
    throw DataError("network expects " + std::to_string(net.input_dim()) +
                    " inputs, box has dimension " + std::to_string(box.dim()));
  }
  if (!box.is_finite()) {
    throw DataError("interval bound propagation needs a finite box");
  }
  IntervalVector cur{box.lower(), box.upper()};
  IntervalVector next;
  for (const auto& layer : net.layers()) {
    next.lower.assign(layer.outputs, 0.0);
    next.upper.assign(layer.outputs, 0.0);
    for (std::size_t i = 0; i < layer.outputs; ++i) {
      double lo = 0.0;
      double hi = 0.0;
      for (std::size_t j = 0; j < layer.inputs; ++j) {
        const double w = layer.w(i, j);
        if (w >= 0.0) {
          lo += w * cur.lower[j];
          hi += w * cur.upper[j];
        } else {
          lo += w * cur.upper[j];
          hi += w * cur.lower[j];
        }
      }
      lo += layer.bias[i];
      hi += layer.bias[i];
      if (layer.relu) {
        lo = std::max(lo, 0.0);
        hi = std::max(hi, 0.0);
      }
      next.lower[i] = lo;
      next.upper[i] = hi;
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace specforge
