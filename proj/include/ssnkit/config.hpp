#pragma once

// Pipeline configuration: a fixed schema of flat keys with defaults, loaded
// from INI-style files ("[section]" prefixes keys as "section.key") and
// overridden by command-line flags. Also the metadata sidecar written next to
// every artifact.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ssnkit/csv.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

inline constexpr std::string_view kToolName = "ssnkit";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Every accepted key with its default value.
inline const std::map<std::string, std::string>& config_defaults() {
  static const std::map<std::string, std::string> d{
      {"k", "3"},
      {"K", "20"},
      {"dim", "200"},
      {"method", "node2vec"},
      {"seed", "0"},
      {"seeds", "0,1,2,3,4"},
      {"strict", "false"},
      {"synth.num_lineages", "4"},
      {"synth.per_lineage", "100"},
      {"synth.length", "300"},
      {"synth.within_mut_rate", "0.01"},
      {"synth.between_mut_count", "30"},
      {"graph.mutual", "false"},
      {"embed.largest_component", "false"},
      {"embed.beta", "auto"},
      {"walk.walks_per_node", "10"},
      {"walk.walk_length", "80"},
      {"walk.p", "1"},
      {"walk.q", "1"},
      {"walk.window", "10"},
      {"walk.negatives", "5"},
      {"walk.epochs", "5"},
      {"walk.learning_rate", "0.025"},
      {"gf.lambda", "0.0001"},
      {"gf.learning_rate", "0.02"},
      {"gf.epochs", "100"},
      {"cluster.algorithm", "kmeans"},
      {"cluster.k", "4"},
      {"cluster.n_init", "10"},
      {"cluster.batch_size", "0"},
      {"cluster.linkage", "ward"},
      {"cluster.eps", "0.5"},
      {"cluster.min_pts", "5"},
      {"cluster.gamma", "auto"},
      {"elbow.k_min", "1"},
      {"elbow.k_max", "10"},
      {"classify.classifiers", "knn,logistic_regression,gaussian_nb,linear_svm,decision_tree,random_forest"},
      {"classify.test_fraction", "0.3"},
      {"classify.folds", "5"},
  };
  return d;
}

class PipelineConfig {
 public:
  PipelineConfig() : values_(config_defaults()) {}

  /// ConfigError if `key` is not in the schema.
  void set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
  }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
  }

  template <class T>
  T number(const std::string& key) const {
    try {
      return csv::parse_number<T>(get(key), key);
    } catch (const SchemaError&) {
      throw ConfigError("config key '" + key + "' expects a number, got '" + get(key) + "'");
    }
  }

  bool flag(const std::string& key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' expects true or false, got '" + v + "'");
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    for (auto part : csv::split(get(key))) {
      std::string s(part);
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      if (!s.empty()) out.push_back(s);
    }
    return out;
  }

  template <class T>
  std::vector<T> number_list(const std::string& key) const {
    std::vector<T> out;
    for (const auto& s : list(key)) {
      try {
        out.push_back(csv::parse_number<T>(s, key));
      } catch (const SchemaError&) {
        throw ConfigError("config key '" + key + "' expects numbers, got '" + s + "'");
      }
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  bool operator==(const PipelineConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

inline std::string trim_copy(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

/// Applies "key = value" lines from an INI stream on top of `cfg`. Lines
/// starting with '#' or ';' are comments.
inline void apply_config(PipelineConfig& cfg, std::istream& in) {
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim_copy(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim_copy(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim_copy(line.substr(0, eq));
    const auto full = section.empty() ? key : section + "." + key;
    cfg.set(full, trim_copy(line.substr(eq + 1)));
  }
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig cfg;
  auto in = csv::open_input(path);
  apply_config(cfg, in);
  return cfg;
}

/// 64-bit FNV-1a over the file's bytes.
inline std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& artifact) {
  return artifact.string() + ".meta";
}

/// Writes <artifact>.meta with the tool version, the subcommand, every
/// effective config value and a digest per input file (keyed by basename so
/// the sidecar does not depend on where the pipeline ran).
inline void write_sidecar(const std::filesystem::path& artifact, const std::string& subcommand,
                          const PipelineConfig& cfg, const std::vector<std::filesystem::path>& inputs) {
  auto out = csv::open_output(sidecar_path(artifact));
  out << "tool=" << kToolName << '\n' << "version=" << kToolVersion << '\n' << "subcommand=" << subcommand << '\n';
  out << "artifact=" << artifact.filename().string() << '\n';
  for (const auto& [k, v] : cfg.values()) out << "config." << k << '=' << v << '\n';
  for (const auto& p : inputs) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64_file(p);
    out << "input." << p.filename().string() << "=fnv1a64:" << hex.str() << '\n';
  }
}

/// Config values recorded in a sidecar, ready to feed back into apply_config.
inline PipelineConfig config_from_sidecar(const std::filesystem::path& meta) {
  auto in = csv::open_input(meta);
  PipelineConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    line = csv::strip_cr(line);
    if (line.rfind("config.", 0) != 0) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError("malformed sidecar line '" + line + "'");
    cfg.set(line.substr(7, eq - 7), line.substr(eq + 1));
  }
  return cfg;
}

}  // namespace ssnkit
