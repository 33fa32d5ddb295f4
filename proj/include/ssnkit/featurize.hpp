#pragma once

// k-mer frequency vectors. Every length-k window (stride 1) of a sequence is
// ranked in base 20 over the alphabet order A=0 ... Y=19 and counted; the
// vector is stored sparsely as sorted (rank, count) pairs.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssnkit/csv.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/parallel.hpp"
#include "ssnkit/seqio.hpp"

namespace ssnkit {

/// 20^k fits in a signed 64-bit integer up to k = 14.
inline constexpr int kMaxMerSize = 14;

/// Number of windows of width k over a length-n sequence: (n - k) + 1.
inline std::size_t total_kmers(std::size_t n, std::size_t k) {
  if (k == 0) throw MerSizeError("k must be >= 1");
  if (k > n)
    throw MerSizeError("k = " + std::to_string(k) + " exceeds sequence length " + std::to_string(n));
  return (n - k) + 1;
}

/// |alphabet|^k, the logical length of a frequency vector.
inline std::uint64_t logical_length(int k) {
  if (k < 1 || k > kMaxMerSize) throw MerSizeError("k must lie in [1, " + std::to_string(kMaxMerSize) + "]");
  std::uint64_t len = 1;
  for (int i = 0; i < k; ++i) len *= kAlphabetSize;
  return len;
}

inline std::uint64_t kmer_rank(std::string_view mer) {
  if (mer.empty() || mer.size() > static_cast<std::size_t>(kMaxMerSize))
    throw MerSizeError("k-mer length must lie in [1, " + std::to_string(kMaxMerSize) + "]");
  std::uint64_t rank = 0;
  for (char c : mer) {
    const int idx = residue_index(c);
    if (idx < 0) throw AlphabetError("k-mer '" + std::string(mer) + "' has a residue outside the alphabet");
    rank = rank * kAlphabetSize + static_cast<std::uint64_t>(idx);
  }
  return rank;
}

inline std::string kmer_unrank(std::uint64_t rank, int k) {
  if (rank >= logical_length(k)) throw MerSizeError("rank out of range for k = " + std::to_string(k));
  std::string mer(static_cast<std::size_t>(k), 'A');
  for (int i = k - 1; i >= 0; --i) {
    mer[static_cast<std::size_t>(i)] = kAminoAlphabet[rank % kAlphabetSize];
    rank /= kAlphabetSize;
  }
  return mer;
}

struct KmerCount {
  std::uint64_t rank;
  std::uint32_t count;
  friend bool operator==(const KmerCount&, const KmerCount&) = default;
};

/// Sparse frequency vector; entries sorted by rank, every count > 0.
class FrequencyVector {
 public:
  FrequencyVector() = default;
  FrequencyVector(int k, std::vector<KmerCount> entries) : k_(k), entries_(std::move(entries)) {}

  int k() const { return k_; }
  std::uint64_t logical_length() const { return ssnkit::logical_length(k_); }
  const std::vector<KmerCount>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& e : entries_) s += e.count;
    return s;
  }

  std::uint32_t count(std::uint64_t rank) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), rank,
                                     [](const KmerCount& e, std::uint64_t r) { return e.rank < r; });
    return (it != entries_.end() && it->rank == rank) ? it->count : 0;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += static_cast<double>(e.count) * e.count;
    return s;
  }

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

 private:
  int k_ = 0;
  std::vector<KmerCount> entries_;
};

inline double dot(const FrequencyVector& a, const FrequencyVector& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].rank < y[j].rank) {
      ++i;
    } else if (y[j].rank < x[i].rank) {
      ++j;
    } else {
      s += static_cast<double>(x[i].count) * y[j].count;
      ++i;
      ++j;
    }
  }
  return s;
}

/// Counts every width-k window of `seq`. Windows touching a residue outside
/// the alphabet are skipped when `skip_invalid`, otherwise AlphabetError.
inline FrequencyVector compute_frequency_vector(std::string_view seq, int k, bool skip_invalid = true) {
  logical_length(k);
  total_kmers(seq.size(), static_cast<std::size_t>(k));
  const auto width = static_cast<std::size_t>(k);
  std::uint64_t modulus = 1;
  for (int i = 1; i < k; ++i) modulus *= kAlphabetSize;

  std::vector<std::uint64_t> ranks;
  ranks.reserve(seq.size() - width + 1);
  std::uint64_t rank = 0;
  std::size_t valid_run = 0;  // consecutive valid residues ending at i
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int idx = residue_index(seq[i]);
    if (idx < 0) {
      if (!skip_invalid)
        throw AlphabetError("residue '" + std::string(1, seq[i]) + "' at position " + std::to_string(i) +
                            " is outside the alphabet");
      valid_run = 0;
      rank = 0;
      continue;
    }
    rank = (valid_run >= width ? rank % modulus : rank) * kAlphabetSize + static_cast<std::uint64_t>(idx);
    ++valid_run;
    if (valid_run >= width) ranks.push_back(rank);
  }
  std::sort(ranks.begin(), ranks.end());
  std::vector<KmerCount> entries;
  for (std::size_t i = 0; i < ranks.size();) {
    std::size_t j = i;
    while (j < ranks.size() && ranks[j] == ranks[i]) ++j;
    entries.push_back({ranks[i], static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return FrequencyVector(k, std::move(entries));
}

/// Row-stacked frequency vectors aligned with dataset order.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(int k, std::vector<FrequencyVector> rows) : k_(k), rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.k() != k_) throw SchemaError("feature rows disagree on k");
  }

  int k() const { return k_; }
  std::size_t rows() const { return rows_.size(); }
  std::uint64_t logical_length() const { return ssnkit::logical_length(k_); }
  const FrequencyVector& row(std::size_t i) const { return rows_[i]; }
  const std::vector<FrequencyVector>& row_vectors() const { return rows_; }

  /// Dense copy, one row per sequence, |alphabet|^k columns. Optionally
  /// scales every row to unit L2 norm.
  Eigen::MatrixXd to_dense(bool l2_normalize = false) const {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()),
                                              static_cast<Eigen::Index>(logical_length()));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double norm = l2_normalize ? std::sqrt(rows_[i].squared_norm()) : 1.0;
      for (const auto& e : rows_[i].entries())
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.rank)) =
            norm > 0 ? static_cast<double>(e.count) / norm : 0.0;
    }
    return X;
  }

  /// Dense copy restricted to columns that are nonzero in some row; the
  /// Euclidean geometry between rows is unchanged.
  Eigen::MatrixXd to_compact_dense(bool l2_normalize = false, std::vector<std::uint64_t>* columns = nullptr) const {
    std::vector<std::uint64_t> used;
    for (const auto& r : rows_)
      for (const auto& e : r.entries()) used.push_back(e.rank);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()),
                                              static_cast<Eigen::Index>(used.size()));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double norm = l2_normalize ? std::sqrt(rows_[i].squared_norm()) : 1.0;
      for (const auto& e : rows_[i].entries()) {
        const auto col = std::lower_bound(used.begin(), used.end(), e.rank) - used.begin();
        X(static_cast<Eigen::Index>(i), col) = norm > 0 ? static_cast<double>(e.count) / norm : 0.0;
      }
    }
    if (columns) *columns = std::move(used);
    return X;
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  int k_ = 3;
  std::vector<FrequencyVector> rows_;
};

/// Featurizes every record (row i = record i). Non-strict records keep their
/// invalid residues; windows over them are skipped.
inline FeatureMatrix featurize_dataset(const Dataset& ds, int k = 3, unsigned workers = 1) {
  logical_length(k);
  std::vector<FrequencyVector> rows(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    const auto& rec = ds[i];
    if (rec.residues.size() < static_cast<std::size_t>(k))
      throw MerSizeError("record '" + rec.id + "' has length " + std::to_string(rec.residues.size()) +
                         " < k = " + std::to_string(k));
    rows[i] = compute_frequency_vector(rec.residues, k, true);
  });
  return FeatureMatrix(k, std::move(rows));
}

// Sparse triplet CSV: "# n=<rows> k=<k> logical_length=<L>", then
// "row,rank,count" lines ordered by row then rank.

inline void write_triplets(std::ostream& out, const FeatureMatrix& fm) {
  out << "# n=" << fm.rows() << " k=" << fm.k() << " logical_length=" << fm.logical_length() << '\n';
  for (std::size_t i = 0; i < fm.rows(); ++i)
    for (const auto& e : fm.row(i).entries()) out << i << ',' << e.rank << ',' << e.count << '\n';
}

inline void write_triplets(const std::filesystem::path& path, const FeatureMatrix& fm) {
  auto out = csv::open_output(path);
  write_triplets(out, fm);
}

inline FeatureMatrix read_triplets(std::istream& in, const std::string& name = "features") {
  std::string header;
  if (!std::getline(in, header)) throw SchemaError(name + ": missing header line");
  header = csv::strip_cr(header);
  std::size_t n = 0;
  int k = 0;
  std::uint64_t length = 0;
  {
    std::istringstream hs(header);
    std::string hash, a, b, c;
    if (!(hs >> hash >> a >> b >> c) || hash != "#" || a.rfind("n=", 0) != 0 || b.rfind("k=", 0) != 0 ||
        c.rfind("logical_length=", 0) != 0)
      throw SchemaError(name + ": header must be '# n=<rows> k=<k> logical_length=<L>'");
    n = csv::parse_number<std::size_t>(std::string_view(a).substr(2), name);
    k = csv::parse_number<int>(std::string_view(b).substr(2), name);
    length = csv::parse_number<std::uint64_t>(std::string_view(c).substr(15), name);
  }
  if (k < 1 || k > kMaxMerSize || length != logical_length(k))
    throw SchemaError(name + ": logical_length does not equal 20^k");
  std::vector<std::vector<KmerCount>> entries(n);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    const auto ctx = name + " line " + std::to_string(line_no);
    if (f.size() != 3) throw SchemaError(ctx + ": expected row,rank,count");
    const auto row = csv::parse_number<std::size_t>(f[0], ctx);
    const auto rank = csv::parse_number<std::uint64_t>(f[1], ctx);
    const auto count = csv::parse_number<std::uint32_t>(f[2], ctx);
    if (row >= n || rank >= length || count == 0) throw SchemaError(ctx + ": triplet out of range");
    auto& r = entries[row];
    if (!r.empty() && r.back().rank >= rank) throw SchemaError(ctx + ": ranks must be strictly increasing per row");
    r.push_back({rank, count});
  }
  std::vector<FrequencyVector> rows;
  rows.reserve(n);
  for (auto& e : entries) rows.emplace_back(k, std::move(e));
  return FeatureMatrix(k, std::move(rows));
}

inline FeatureMatrix read_triplets(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_triplets(in, path.filename().string());
}

/// Dense CSV with one column per k-mer, headed by the k-mer strings.
inline void write_dense_csv(std::ostream& out, const FeatureMatrix& fm) {
  out << "row";
  for (std::uint64_t r = 0; r < fm.logical_length(); ++r) out << ',' << kmer_unrank(r, fm.k());
  out << '\n';
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    out << i;
    const auto& entries = fm.row(i).entries();
    std::size_t p = 0;
    for (std::uint64_t r = 0; r < fm.logical_length(); ++r) {
      std::uint32_t c = 0;
      if (p < entries.size() && entries[p].rank == r) c = entries[p++].count;
      out << ',' << c;
    }
    out << '\n';
  }
}

}  // namespace ssnkit
