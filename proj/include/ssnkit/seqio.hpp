#pragma once

// Protein sequence datasets: FASTA ingestion and writing, a seeded synthetic
// lineage generator, and stratified train/test/fold splitting.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ssnkit/errors.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

inline constexpr std::string_view kAminoAlphabet = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kAlphabetSize = 20;

namespace detail {
constexpr std::array<std::int8_t, 256> make_residue_table() {
  std::array<std::int8_t, 256> table{};
  for (auto& v : table) v = -1;
  for (std::size_t i = 0; i < kAminoAlphabet.size(); ++i)
    table[static_cast<unsigned char>(kAminoAlphabet[i])] = static_cast<std::int8_t>(i);
  return table;
}
inline constexpr auto kResidueTable = make_residue_table();
}  // namespace detail

/// Position of `c` in the amino-acid alphabet, or -1.
constexpr int residue_index(char c) {
  return detail::kResidueTable[static_cast<unsigned char>(c)];
}

constexpr bool is_residue(char c) { return residue_index(c) >= 0; }

struct SequenceRecord {
  std::string id;
  std::string residues;
  std::optional<std::string> label;
  /// True when `residues` holds characters outside the alphabet (only
  /// possible for non-strict parses).
  bool has_invalid = false;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

/// Ordered, immutable collection of records with unique ids.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<SequenceRecord> records) : records_(std::move(records)) {
    std::unordered_set<std::string> seen;
    for (auto& r : records_) {
      if (r.residues.empty()) throw ConfigError("record '" + r.id + "' has no residues");
      if (!seen.insert(r.id).second) throw ConfigError("duplicate record id '" + r.id + "'");
      r.has_invalid = !std::all_of(r.residues.begin(), r.residues.end(), is_residue);
    }
  }

  static constexpr std::string_view alphabet() { return kAminoAlphabet; }

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const SequenceRecord& operator[](std::size_t i) const { return records_[i]; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }
  const std::vector<SequenceRecord>& records() const { return records_; }

  bool fully_labeled() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const auto& r) { return r.label.has_value(); });
  }

  /// Labels in record order; unlabeled records yield "".
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.label.value_or(""));
    return out;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.id);
    return out;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<SequenceRecord> records_;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}
}  // namespace detail

/// Reads FASTA records. Headers are "id" or "id|lineage"; anything after the
/// first whitespace in the id part is ignored. Residues are upper-cased and a
/// trailing '*' stop symbol is dropped. In strict mode any residue outside
/// the alphabet raises AlphabetError; otherwise the record is flagged.
inline Dataset parse_fasta(std::istream& in, bool strict = false) {
  std::vector<SequenceRecord> records;
  std::unordered_set<std::string> seen;
  std::size_t header_line = 0;
  std::size_t line_no = 0;
  std::string line;
  bool any_content = false;

  auto finish = [&] {
    if (records.empty()) return;
    auto& rec = records.back();
    if (!rec.residues.empty() && rec.residues.back() == '*') rec.residues.pop_back();
    if (rec.residues.empty())
      throw ParseError(header_line, "record '" + rec.id + "' has no residues");
    rec.has_invalid = !std::all_of(rec.residues.begin(), rec.residues.end(), is_residue);
    if (strict && rec.has_invalid) {
      const auto bad = *std::find_if_not(rec.residues.begin(), rec.residues.end(), is_residue);
      throw AlphabetError("record '" + rec.id + "' contains residue '" + std::string(1, bad) +
                          "' outside " + std::string(kAminoAlphabet));
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    any_content = true;
    if (text.front() == '>') {
      finish();
      header_line = line_no;
      const auto header = detail::trim(text.substr(1));
      const auto bar = header.find('|');
      auto id_part = detail::trim(header.substr(0, bar));
      const auto ws = std::find_if(id_part.begin(), id_part.end(),
                                   [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
      id_part = id_part.substr(0, static_cast<std::size_t>(ws - id_part.begin()));
      if (id_part.empty()) throw ParseError(line_no, "header has an empty id");
      SequenceRecord rec;
      rec.id = std::string(id_part);
      if (bar != std::string_view::npos) {
        const auto label = detail::trim(header.substr(bar + 1));
        if (label.empty()) throw ParseError(line_no, "header '|' is followed by an empty label");
        rec.label = std::string(label);
      }
      if (!seen.insert(rec.id).second) throw ParseError(line_no, "duplicate id '" + rec.id + "'");
      records.push_back(std::move(rec));
    } else {
      if (records.empty()) throw ParseError(line_no, "sequence data before the first '>' header");
      for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        records.back().residues.push_back(
            static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      }
    }
  }
  if (!any_content) throw EmptyInputError("FASTA input is empty");
  finish();

  return Dataset(std::move(records));
}

inline Dataset parse_fasta(const std::filesystem::path& path, bool strict = false) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_fasta(in, strict);
}

inline void write_fasta(std::ostream& out, const Dataset& ds, std::size_t line_width = 60) {
  for (const auto& rec : ds) {
    out << '>' << rec.id;
    if (rec.label) out << '|' << *rec.label;
    out << '\n';
    for (std::size_t i = 0; i < rec.residues.size(); i += line_width)
      out << std::string_view(rec.residues).substr(i, line_width) << '\n';
  }
}

inline void write_fasta(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_fasta(out, ds);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Two-column `id,label` sidecar.
inline void write_labels_csv(std::ostream& out, const Dataset& ds) {
  out << "id,label\n";
  for (const auto& rec : ds) out << rec.id << ',' << rec.label.value_or("") << '\n';
}

struct SynthConfig {
  int num_lineages = 4;
  std::vector<int> per_lineage{100, 100, 100, 100};
  int length = 300;
  double within_mut_rate = 0.01;
  int between_mut_count = 30;
  std::uint64_t seed = 0;
};

namespace detail {
inline char substitute(char current, Rng& rng) {
  const int cur = residue_index(current);
  auto pick = static_cast<int>(uniform_index(rng, kAlphabetSize - 1));
  if (pick >= cur) ++pick;
  return kAminoAlphabet[static_cast<std::size_t>(pick)];
}
}  // namespace detail

/// Seeded lineage simulator: a random root, one ancestor per lineage with
/// `between_mut_count` substitutions at lineage-specific positions, and
/// members that mutate each ancestor position independently with
/// probability `within_mut_rate`. Records are ordered lineage by lineage.
inline Dataset synthesize_dataset(const SynthConfig& cfg) {
  if (cfg.num_lineages < 1) throw ConfigError("num_lineages must be >= 1");
  if (cfg.length < 1) throw ConfigError("length must be >= 1");
  if (static_cast<int>(cfg.per_lineage.size()) != cfg.num_lineages)
    throw ConfigError("per_lineage has " + std::to_string(cfg.per_lineage.size()) +
                      " entries but num_lineages is " + std::to_string(cfg.num_lineages));
  if (!(cfg.within_mut_rate >= 0.0 && cfg.within_mut_rate <= 1.0))
    throw ConfigError("within_mut_rate must lie in [0, 1]");
  if (cfg.between_mut_count < 0 || cfg.between_mut_count > cfg.length)
    throw ConfigError("between_mut_count must lie in [0, length]");
  for (int c : cfg.per_lineage)
    if (c < 0) throw ConfigError("per_lineage counts must be nonnegative");

  Rng rng = make_rng(cfg.seed);
  std::string root(static_cast<std::size_t>(cfg.length), 'A');
  for (auto& c : root) c = kAminoAlphabet[uniform_index(rng, kAlphabetSize)];

  std::vector<int> positions(static_cast<std::size_t>(cfg.length));
  std::vector<SequenceRecord> records;
  int serial = 0;
  for (int lin = 0; lin < cfg.num_lineages; ++lin) {
    std::string ancestor = root;
    std::iota(positions.begin(), positions.end(), 0);
    // Partial Fisher-Yates: the first between_mut_count slots are the sites.
    for (int i = 0; i < cfg.between_mut_count; ++i) {
      const auto j = i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(cfg.length - i)));
      std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(j)]);
      auto& site = ancestor[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])];
      site = detail::substitute(site, rng);
    }
    for (int m = 0; m < cfg.per_lineage[static_cast<std::size_t>(lin)]; ++m) {
      SequenceRecord rec;
      rec.id = "seq" + std::to_string(serial++);
      rec.label = "L" + std::to_string(lin);
      rec.residues = ancestor;
      if (cfg.within_mut_rate > 0.0)
        for (auto& c : rec.residues)
          if (bernoulli(rng, cfg.within_mut_rate)) c = detail::substitute(c, rng);
      records.push_back(std::move(rec));
    }
  }
  return Dataset(std::move(records));
}

struct Fold {
  std::vector<int> train;
  std::vector<int> validate;
};

struct SplitPlan {
  std::vector<int> train_indices;
  std::vector<int> test_indices;
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
};

struct SplitOptions {
  double test_fraction = 0.3;
  int num_folds = 5;
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Size of the training side: round((1 - test_fraction) * n), halves away
/// from zero.
inline std::size_t train_size(std::size_t n, double test_fraction) {
  return static_cast<std::size_t>(std::llround((1.0 - test_fraction) * static_cast<double>(n)));
}

/// Shuffled train/test split plus a fold partition of the training side.
/// `classes` holds one class id per sample; pass an empty span for an
/// unstratified split of `n` samples. Stratified test counts use the
/// largest-remainder rule, so each class is within one sample of its exact
/// proportion and the global test size matches the unstratified one.
inline SplitPlan make_split(std::span<const int> classes, std::size_t n, const SplitOptions& opt) {
  if (!(opt.test_fraction > 0.0 && opt.test_fraction < 1.0))
    throw ConfigError("test_fraction must lie in (0, 1)");
  if (opt.num_folds < 2) throw ConfigError("num_folds must be >= 2");
  const bool stratified = opt.stratified && !classes.empty();
  if (stratified && classes.size() != n) throw ConfigError("class vector length does not match n");

  SplitPlan plan;
  plan.seed = opt.seed;
  Rng rng = make_rng(opt.seed, 0x5117);
  const std::size_t n_train = train_size(n, opt.test_fraction);
  const std::size_t n_test = n - n_train;
  const auto folds = static_cast<std::size_t>(opt.num_folds);
  std::vector<std::vector<int>> fold_members(folds);

  if (!stratified) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(perm.begin(), perm.end(), rng);
    plan.test_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.train_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    for (std::size_t i = 0; i < plan.train_indices.size(); ++i)
      fold_members[i % folds].push_back(plan.train_indices[i]);
  } else {
    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[classes[i]].push_back(static_cast<int>(i));
    for (const auto& [cls, members] : by_class)
      if (members.size() < folds)
        throw StratifyError("class " + std::to_string(cls) + " has " + std::to_string(members.size()) +
                            " members, fewer than " + std::to_string(folds) + " folds");

    struct Quota {
      int cls;
      std::size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [cls, members] : by_class) {
      const double ideal = opt.test_fraction * static_cast<double>(members.size());
      const auto base = static_cast<std::size_t>(std::floor(ideal));
      quotas.push_back({cls, base, ideal - static_cast<double>(base)});
      assigned += base;
    }
    std::vector<std::size_t> order(quotas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t i = 0; assigned < n_test && i < order.size(); ++i, ++assigned) ++quotas[order[i]].take;

    std::size_t q = 0;
    std::size_t fold_cursor = 0;
    for (auto& [cls, members] : by_class) {
      shuffle(members.begin(), members.end(), rng);
      const std::size_t take = quotas[q++].take;
      plan.test_indices.insert(plan.test_indices.end(), members.begin(),
                               members.begin() + static_cast<std::ptrdiff_t>(take));
      for (std::size_t i = take; i < members.size(); ++i) {
        plan.train_indices.push_back(members[i]);
        fold_members[fold_cursor++ % folds].push_back(members[i]);
      }
    }
    shuffle(plan.train_indices.begin(), plan.train_indices.end(), rng);
    shuffle(plan.test_indices.begin(), plan.test_indices.end(), rng);
  }

  for (std::size_t f = 0; f < folds; ++f) {
    Fold fold;
    fold.validate = fold_members[f];
    for (std::size_t g = 0; g < folds; ++g)
      if (g != f) fold.train.insert(fold.train.end(), fold_members[g].begin(), fold_members[g].end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

/// Maps string labels to dense class ids in sorted label order.
inline std::vector<int> encode_labels(std::span<const std::string> labels,
                                      std::vector<std::string>* classes_out = nullptr) {
  std::set<std::string> uniq(labels.begin(), labels.end());
  std::vector<std::string> classes(uniq.begin(), uniq.end());
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels)
    ids.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));
  if (classes_out) *classes_out = std::move(classes);
  return ids;
}

inline SplitPlan make_split(const Dataset& ds, const SplitOptions& opt) {
  if (!opt.stratified) return make_split(std::span<const int>{}, ds.size(), opt);
  if (!ds.fully_labeled()) throw StratifyError("stratified split requires every record to carry a label");
  const auto labels = ds.labels();
  const auto classes = encode_labels(labels);
  return make_split(classes, ds.size(), opt);
}

}  // namespace ssnkit
