#pragma once

// Matrix files: {"n": N, "matrix": [[[re, im], ...], ...]}, row-major, with
// every number written using 17 significant digits so doubles round-trip.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sungeo/matrix_core.hpp"

namespace sungeo::cli {

/// Malformed or unreadable input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string write_matrix_text(const Matrix& a) {
  std::string out = "{\"n\": " + std::to_string(a.rows()) + ", \"matrix\": [";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out += i == 0 ? "\n  [" : ",\n  [";
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out += ", ";
      out += "[" + format_double(a(i, j).real()) + ", " + format_double(a(i, j).imag()) + "]";
    }
    out += "]";
  }
  out += "\n]}\n";
  return out;
}

inline Matrix matrix_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("matrix")) {
    throw InputError("matrix file needs fields \"n\" and \"matrix\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw InputError("\"n\" must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw InputError("\"matrix\" must have n rows");
  }
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InputError("row " + std::to_string(i) + " must have n entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& e = row[static_cast<std::size_t>(j)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") must be [re, im]");
      }
      a(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!a.allFinite()) throw InputError("matrix has non-finite entries");
  return a;
}

inline Matrix parse_matrix_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed matrix file: ") + e.what());
  }
  return matrix_from_json(doc);
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix_text(ss.str());
}

inline void write_matrix_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << write_matrix_text(a);
  if (!out) throw InputError("write failed for " + path);
}

/// Matrix as a report fragment with the same layout as a matrix file.
inline nlohmann::json matrix_to_json(const Matrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"n", a.rows()}, {"matrix", std::move(rows)}};
}

}  // namespace sungeo::cli
