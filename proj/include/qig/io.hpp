#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qig/matrix.hpp"
#include "qig/states.hpp"

namespace qig {

// {"dim": n} for square matrices, {"rows": r, "cols": c} otherwise;
// entries row-major as [re, im] pairs.
inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json j;
  if (m.is_square()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      entries.push_back({m(i, k).real(), m(i, k).imag()});
  j["entries"] = std::move(entries);
  return j;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t max_dim = 64) {
  if (!j.is_object()) throw std::invalid_argument("matrix json: expected an object");
  std::size_t rows = 0, cols = 0;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned())
      throw std::invalid_argument("matrix json: dim must be a positive integer");
    rows = cols = j["dim"].get<std::size_t>();
  } else if (j.contains("rows") && j.contains("cols")) {
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
      throw std::invalid_argument("matrix json: rows/cols must be positive integers");
    rows = j["rows"].get<std::size_t>();
    cols = j["cols"].get<std::size_t>();
  } else {
    throw std::invalid_argument("matrix json: need either dim or rows+cols");
  }
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix json: dimensions must be >= 1");
  if (rows > max_dim || cols > max_dim)
    throw std::invalid_argument("matrix json: dimension exceeds the cap of " +
                                std::to_string(max_dim));
  if (!j.contains("entries") || !j["entries"].is_array())
    throw std::invalid_argument("matrix json: missing entries array");
  const auto& entries = j["entries"];
  if (entries.size() != rows * cols)
    throw std::invalid_argument("matrix json: expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(entries.size()));
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k, ++idx) {
      const auto& e = entries[idx];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument("matrix json: entry " + std::to_string(idx) +
                                    " is not a [re, im] pair");
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw std::invalid_argument("matrix json: non-finite entry at index " +
                                    std::to_string(idx));
      m(i, k) = cx{re, im};
    }
  return m;
}

inline nlohmann::json channel_to_json(const KrausChannel& ch) {
  nlohmann::json j;
  j["in_dim"] = ch.in_dim();
  j["out_dim"] = ch.out_dim();
  nlohmann::json kraus = nlohmann::json::array();
  for (const ComplexMatrix& k : ch.ops()) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

inline KrausChannel channel_from_json(const nlohmann::json& j, std::size_t max_dim = 64) {
  if (!j.is_object() || !j.contains("in_dim") || !j.contains("out_dim") || !j.contains("kraus"))
    throw std::invalid_argument("channel json: need in_dim, out_dim and kraus");
  if (!j["in_dim"].is_number_unsigned() || !j["out_dim"].is_number_unsigned())
    throw std::invalid_argument("channel json: dimensions must be positive integers");
  const std::size_t in_dim = j["in_dim"].get<std::size_t>();
  const std::size_t out_dim = j["out_dim"].get<std::size_t>();
  if (in_dim > max_dim || out_dim > max_dim)
    throw std::invalid_argument("channel json: dimension exceeds the cap of " +
                                std::to_string(max_dim));
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw std::invalid_argument("channel json: kraus must be a non-empty array");
  std::vector<ComplexMatrix> ops;
  ops.reserve(j["kraus"].size());
  for (const auto& k : j["kraus"]) ops.push_back(matrix_from_json(k, max_dim));
  return KrausChannel(in_dim, out_dim, std::move(ops));
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

inline ComplexMatrix read_matrix_file(const std::string& path, std::size_t max_dim = 64) {
  return matrix_from_json(read_json_file(path), max_dim);
}

inline HermitianMatrix read_hermitian_file(const std::string& path, std::size_t max_dim = 64) {
  return HermitianMatrix(read_matrix_file(path, max_dim));
}

inline DensityMatrix read_density_file(const std::string& path, double floor = kDefaultFloor,
                                       std::size_t max_dim = 64) {
  return DensityMatrix(read_hermitian_file(path, max_dim), floor);
}

inline KrausChannel read_channel_file(const std::string& path, std::size_t max_dim = 64) {
  return channel_from_json(read_json_file(path), max_dim);
}

}  // namespace qig
