#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "specforge/dataset.hpp"
#include "specforge/error.hpp"

namespace specforge {

namespace {

// Splits one RFC 4180 record. Quoted fields may contain commas, doubled
// quotes and line breaks; the latter pull further lines from the stream.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          throw DataError("unterminated quoted field starting near line " +
                          std::to_string(line_no));
        }
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& selector, const std::string& file) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == selector) return j;
  }
  std::size_t idx = 0;
  auto [ptr, ec] =
      std::from_chars(selector.data(), selector.data() + selector.size(), idx);
  if (ec == std::errc() && ptr == selector.data() + selector.size() &&
      idx < header.size()) {
    return idx;
  }
  throw DataError("column '" + selector + "' not found in '" + file + "'");
}

std::vector<std::string> read_header(std::istream& in, std::size_t& line_no,
                                     const std::filesystem::path& path) {
  std::vector<std::string> header;
  if (!read_record(in, header, line_no) ||
      (header.size() == 1 && trim(header[0]).empty())) {
    throw DataError("'" + path.string() + "' is empty");
  }
  for (auto& h : header) h = trim(h);
  if (header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
  return header;
}

}  // namespace

std::vector<double> load_csv_column(const std::filesystem::path& path,
                                    const std::string& column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::size_t line_no = 0;
  const auto header = read_header(in, line_no, path);
  const std::size_t col = find_column(header, column, path.string());
  std::vector<double> values;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (read_record(in, fields, line_no)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    ++row;
    double v = 0.0;
    if (col >= fields.size() || !parse_number(fields[col], v) || !std::isfinite(v)) {
      throw DataError("row " + std::to_string(row) + " (line " +
                      std::to_string(line_no) + "), column '" + header[col] +
                      "' is not a finite number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError("'" + path.string() + "' has no data rows");
  return values;
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column, TaskKind task) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::size_t line_no = 0;
  const auto header = read_header(in, line_no, path);
  std::size_t label_idx = 0;
  try {
    label_idx = find_column(header, label_column, path.string());
  } catch (const DataError&) {
    throw DataError("label column '" + label_column + "' not found in '" +
                    path.string() + "'");
  }
  if (header.size() < 2) {
    throw DataError("'" + path.string() + "' has no feature columns");
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) names.push_back(header[j]);
  }

  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (read_record(in, fields, line_no)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    ++row;
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " (line " +
                      std::to_string(line_no) + ") has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_number(fields[j], v) || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(row) + " (line " +
                        std::to_string(line_no) + "), column '" + header[j] +
                        "': '" + fields[j] + "' is not a finite number");
      }
      if (j == label_idx) {
        if (task == TaskKind::Classification &&
            (v < 0.0 || v != std::floor(v))) {
          throw DataError("row " + std::to_string(row) + ", column '" +
                          header[j] + "': class label '" + fields[j] +
                          "' is not a non-negative integer");
        }
        y.push_back(v);
      } else {
        x.push_back(v);
      }
    }
  }
  if (y.empty()) throw DataError("'" + path.string() + "' has no data rows");
  const std::size_t cols = names.size();
  return Dataset(std::move(x), cols, std::move(y), task, std::move(names));
}

void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_name) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (data.feature_names().empty()) {
      out << 'x' << j;
    } else {
      out << data.feature_names()[j];
    }
    out << ',';
  }
  out << label_name << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (double v : data.row(i)) out << v << ',';
    out << data.label(i) << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace specforge
