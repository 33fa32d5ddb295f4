#pragma once

// Embedding CSV: header "node_index,e0,...,e{d-1}", one row per node, values
// in shortest round-trip form.

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ssnkit/csv.hpp"
#include "ssnkit/embed/types.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

inline void write_embedding_csv(std::ostream& out, const Eigen::MatrixXd& X) {
  out << "node_index";
  for (Eigen::Index c = 0; c < X.cols(); ++c) out << ",e" << c;
  out << '\n';
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < X.cols(); ++c) out << ',' << csv::format_double(X(i, c));
    out << '\n';
  }
}

inline void write_embedding_csv(const std::filesystem::path& path, const Eigen::MatrixXd& X) {
  auto out = csv::open_output(path);
  write_embedding_csv(out, X);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Reads a "node_index,<columns...>" matrix (embeddings or projections).
inline Eigen::MatrixXd read_embedding_csv(std::istream& in, const std::string& name = "embedding") {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(name + ": missing header");
  const auto header = csv::split(csv::strip_cr(line));
  if (header.empty() || header[0] != "node_index") throw SchemaError(name + ": header must start with node_index");
  const std::size_t d = header.size() - 1;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    const auto ctx = name + " line " + std::to_string(line_no);
    if (f.size() != d + 1) throw SchemaError(ctx + ": expected " + std::to_string(d + 1) + " fields");
    if (csv::parse_number<std::size_t>(f[0], ctx) != rows.size()) throw SchemaError(ctx + ": node_index out of order");
    std::vector<double> row(d);
    for (std::size_t c = 0; c < d; ++c) row[c] = csv::parse_number<double>(f[c + 1], ctx);
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < d; ++c) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return X;
}

inline Eigen::MatrixXd read_embedding_csv(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_embedding_csv(in, path.filename().string());
}

}  // namespace ssnkit
