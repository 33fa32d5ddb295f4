// ssnkit command-line front end. Every subcommand reads and writes plain
// CSV/TSV/FASTA artifacts and drops a "<artifact>.meta" sidecar next to each
// output. Wall-clock measurements go only to "*.timings.csv" files so every
// other artifact is reproducible byte for byte.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssnkit.hpp"

namespace fs = std::filesystem;
using namespace ssnkit;

namespace {

enum ExitCode : int { kOk = 0, kUnknown = 1, kUsage = 2, kIo = 3, kSchema = 4, kConfig = 5, kDomain = 6 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Schema:
    case ErrorKind::Parse:
    case ErrorKind::Alphabet: return kSchema;
    case ErrorKind::Config:
    case ErrorKind::Stratify: return kConfig;
    default: return kDomain;
  }
}

int report_error(std::string_view kind, int code, std::string message) {
  for (char& c : message)
    if (c == '\n' || c == '\r') c = ' ';
  std::cerr << "ssnkit: error kind=" << kind << " exit=" << code << " message=" << message << '\n';
  return code;
}

// "<dir>/<stem><suffix>" next to `path`.
fs::path companion(const fs::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  auto out = csv::open_output(path);
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("input file '" + path.string() + "' does not exist");
}

// Flag values that override config keys once parsing succeeds.
struct Bindings {
  std::list<std::pair<std::string, std::optional<std::string>>> slots;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = slots.emplace_back(key, std::nullopt);
    app->add_option(flag, slot.second, help + " [" + key + "]");
  }
  void add_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = slots.emplace_back(key, std::nullopt);
    app->add_flag_callback(flag, [&slot] { slot.second = "true"; }, help + " [" + key + "]");
  }
  void apply(PipelineConfig& cfg) const {
    for (const auto& [key, value] : slots)
      if (value) cfg.set(key, *value);
  }
};

struct Common {
  std::string config_path;
  std::optional<unsigned> workers;
  unsigned worker_count() const { return workers ? std::max(1u, *workers) : default_workers(); }
};

PipelineConfig effective_config(const Common& common, const Bindings& b) {
  PipelineConfig cfg;
  if (!common.config_path.empty()) {
    require_file(common.config_path);
    cfg = load_config(common.config_path);
  }
  b.apply(cfg);
  return cfg;
}

// ---------------------------------------------------------------- readers

struct IdLabels {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
};

// Reads a CSV with "id" and "label" columns (an id,label labels file or an
// index,id,label node file).
IdLabels read_id_labels(const fs::path& path) {
  require_file(path);
  auto in = csv::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path.string() + ": missing header");
  const auto header = csv::split(csv::strip_cr(line));
  int id_col = -1, label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "id") id_col = static_cast<int>(c);
    if (header[c] == "label") label_col = static_cast<int>(c);
  }
  if (id_col < 0 || label_col < 0) throw SchemaError(path.string() + ": header needs id and label columns");
  IdLabels out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != header.size())
      throw SchemaError(path.string() + " line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " fields");
    out.ids.emplace_back(f[static_cast<std::size_t>(id_col)]);
    out.labels.emplace_back(f[static_cast<std::size_t>(label_col)]);
  }
  return out;
}

std::vector<int> read_assignments(const fs::path& path) {
  require_file(path);
  auto in = csv::open_input(path);
  std::string line;
  if (!std::getline(in, line) || csv::strip_cr(line) != "node_index,cluster")
    throw SchemaError(path.string() + ": header must be 'node_index,cluster'");
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    const auto ctx = path.string() + " line " + std::to_string(lineno);
    if (f.size() != 2) throw SchemaError(ctx + ": expected node_index,cluster");
    if (csv::parse_number<std::size_t>(f[0], ctx) != labels.size()) throw SchemaError(ctx + ": rows must be in order");
    labels.push_back(csv::parse_number<int>(f[1], ctx));
  }
  return labels;
}

Eigen::MatrixXd load_matrix(const fs::path& path) {
  require_file(path);
  return read_embedding_csv(path);
}

// ---------------------------------------------------------------- subcommands

struct SynthArgs {
  std::string output;
};

void run_synth(const SynthArgs& a, const PipelineConfig& cfg) {
  SynthConfig sc;
  sc.num_lineages = cfg.number<int>("synth.num_lineages");
  sc.per_lineage.assign(static_cast<std::size_t>(std::max(0, sc.num_lineages)), cfg.number<int>("synth.per_lineage"));
  sc.length = cfg.number<int>("synth.length");
  sc.within_mut_rate = cfg.number<double>("synth.within_mut_rate");
  sc.between_mut_count = cfg.number<int>("synth.between_mut_count");
  sc.seed = cfg.number<std::uint64_t>("seed");
  const auto ds = synthesize_dataset(sc);
  write_fasta(fs::path(a.output), ds);
  write_sidecar(a.output, "synth", cfg, {});
}

struct FeaturizeArgs {
  std::string input, output;
};

void run_featurize(const FeaturizeArgs& a, const PipelineConfig& cfg, unsigned workers) {
  require_file(a.input);
  const auto ds = parse_fasta(fs::path(a.input), cfg.flag("strict"));
  const auto fm = featurize_dataset(ds, cfg.number<int>("k"), workers);
  write_triplets(fs::path(a.output), fm);
  write_sidecar(a.output, "featurize", cfg, {a.input});
  const auto labels_path = companion(a.output, ".labels.csv");
  write_file(labels_path, [&](std::ostream& out) { write_labels_csv(out, ds); });
  write_sidecar(labels_path, "featurize", cfg, {a.input});
}

struct GraphArgs {
  std::string input, output, labels;
};

void run_graph(const GraphArgs& a, const PipelineConfig& cfg, unsigned workers) {
  require_file(a.input);
  const auto fm = read_triplets(fs::path(a.input));
  std::vector<fs::path> inputs{a.input};
  fs::path labels_path = a.labels.empty() ? companion(a.input, ".labels.csv") : fs::path(a.labels);
  std::vector<std::string> ids, labels;
  if (!a.labels.empty() || fs::exists(labels_path)) {
    auto il = read_id_labels(labels_path);
    if (il.ids.size() != fm.rows())
      throw SchemaError(labels_path.string() + " has " + std::to_string(il.ids.size()) + " rows for " +
                        std::to_string(fm.rows()) + " feature rows");
    ids = std::move(il.ids);
    if (std::any_of(il.labels.begin(), il.labels.end(), [](const auto& s) { return !s.empty(); }))
      labels = std::move(il.labels);
    inputs.push_back(labels_path);
  }
  SsnOptions opt;
  opt.mutual = cfg.flag("graph.mutual");
  opt.workers = workers;
  const auto g = build_ssn(fm, cfg.number<std::size_t>("K"), std::move(ids), std::move(labels), opt);
  export_graph(g, a.output);
  write_sidecar(edges_path(a.output), "graph", cfg, inputs);
  write_sidecar(nodes_path(a.output), "graph", cfg, inputs);
}

WalkConfig walk_config(const PipelineConfig& cfg) {
  WalkConfig w;
  w.walks_per_node = cfg.number<int>("walk.walks_per_node");
  w.walk_length = cfg.number<int>("walk.walk_length");
  w.p = cfg.number<double>("walk.p");
  w.q = cfg.number<double>("walk.q");
  w.window = cfg.number<int>("walk.window");
  w.negatives = cfg.number<int>("walk.negatives");
  w.epochs = cfg.number<int>("walk.epochs");
  w.learning_rate = cfg.number<double>("walk.learning_rate");
  w.seed = cfg.number<std::uint64_t>("seed");
  return w;
}

struct EmbedArgs {
  std::string input, output;
};

void run_embed(const EmbedArgs& a, const PipelineConfig& cfg, unsigned workers) {
  require_file(edges_path(a.input));
  require_file(nodes_path(a.input));
  const auto g = import_graph(a.input);
  const int d = cfg.number<int>("dim");
  const auto method = cfg.get("method");
  SpectralOptions sopt;
  sopt.largest_component = cfg.flag("embed.largest_component");
  EmbeddingMatrix emb;
  if (method == "laplacian_eigenmaps") {
    emb = laplacian_eigenmaps(g, d, sopt);
  } else if (method == "lle") {
    emb = lle_embed(g, d, sopt);
  } else if (method == "hope") {
    std::optional<double> beta;
    if (cfg.get("embed.beta") != "auto") beta = cfg.number<double>("embed.beta");
    emb = hope_embed(g, d, beta);
  } else if (method == "graph_factorization") {
    GfConfig gc;
    gc.lambda = cfg.number<double>("gf.lambda");
    gc.learning_rate = cfg.number<double>("gf.learning_rate");
    gc.epochs = cfg.number<int>("gf.epochs");
    gc.seed = cfg.number<std::uint64_t>("seed");
    emb = graph_factorization(g, d, gc);
  } else if (method == "deepwalk") {
    emb = deepwalk(g, d, walk_config(cfg), workers);
  } else if (method == "node2vec") {
    emb = node2vec(g, d, walk_config(cfg), workers);
  } else {
    throw ConfigError("unknown embedding method '" + method +
                      "' (expected laplacian_eigenmaps, lle, hope, graph_factorization, deepwalk or node2vec)");
  }
  if (!emb.all_finite()) throw DivergenceError(method + " produced non-finite values");
  write_embedding_csv(fs::path(a.output), emb.vectors);
  write_sidecar(a.output, "embed", cfg, {edges_path(a.input), nodes_path(a.input)});
  if (!emb.notes.empty()) {
    std::ofstream meta(sidecar_path(a.output), std::ios::app);
    for (const auto& [k, v] : emb.notes) meta << "note." << k << '=' << v << '\n';
  }
}

struct ClusterArgs {
  std::string input, output, graph;
};

void run_cluster(const ClusterArgs& a, const PipelineConfig& cfg) {
  const Eigen::MatrixXd X = load_matrix(a.input);
  const auto algorithm = cfg.get("cluster.algorithm");
  const int k = cfg.number<int>("cluster.k");
  const auto seed = cfg.number<std::uint64_t>("seed");
  std::vector<fs::path> inputs{a.input};
  const auto t0 = std::chrono::steady_clock::now();
  ClusterAssignment result;
  if (algorithm == "kmeans") {
    KMeansOptions opt;
    opt.n_init = cfg.number<int>("cluster.n_init");
    if (const int b = cfg.number<int>("cluster.batch_size"); b > 0) opt.batch_size = b;
    result = kmeans(X, k, seed, opt);
  } else if (algorithm == "agglomerative") {
    if (a.graph.empty()) throw ConfigError("agglomerative clustering needs --graph <prefix>");
    require_file(edges_path(a.graph));
    require_file(nodes_path(a.graph));
    result = agglomerative(X, import_graph(a.graph), k, parse_linkage(cfg.get("cluster.linkage")));
    inputs.push_back(edges_path(a.graph));
    inputs.push_back(nodes_path(a.graph));
  } else if (algorithm == "dbscan") {
    result = dbscan(X, cfg.number<double>("cluster.eps"), cfg.number<int>("cluster.min_pts"));
  } else if (algorithm == "gmm") {
    result = gaussian_mixture(X, k, seed);
  } else if (algorithm == "spectral") {
    std::optional<double> gamma;
    if (cfg.get("cluster.gamma") != "auto") gamma = cfg.number<double>("cluster.gamma");
    result = spectral_clustering(X, k, seed, gamma);
  } else {
    throw ConfigError("unknown clustering algorithm '" + algorithm +
                      "' (expected kmeans, agglomerative, dbscan, gmm or spectral)");
  }
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(a.output, [&](std::ostream& out) {
    out << "node_index,cluster\n";
    for (std::size_t i = 0; i < result.labels.size(); ++i) out << i << ',' << result.labels[i] << '\n';
  });
  write_sidecar(a.output, "cluster", cfg, inputs);
  write_file(companion(a.output, ".timings.csv"), [&](std::ostream& out) {
    out << "algorithm,runtime_sec\n" << algorithm << ',' << csv::format_double(runtime) << '\n';
  });
}

struct ElbowArgs {
  std::string input, output;
};

void run_elbow(const ElbowArgs& a, const PipelineConfig& cfg) {
  const Eigen::MatrixXd X = load_matrix(a.input);
  const auto curve = elbow_select_k(X, cfg.number<int>("elbow.k_min"), cfg.number<int>("elbow.k_max"),
                                    cfg.number<std::uint64_t>("seed"), cfg.number<int>("cluster.n_init"));
  write_file(a.output, [&](std::ostream& out) {
    out << "k,sse,chosen\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i)
      out << curve.ks[i] << ',' << csv::format_double(curve.sse[i]) << ',' << (curve.ks[i] == curve.chosen_k ? 1 : 0)
          << '\n';
  });
  write_sidecar(a.output, "elbow", cfg, {a.input});
  write_file(companion(a.output, ".timings.csv"), [&](std::ostream& out) {
    out << "k,runtime_sec\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i)
      out << curve.ks[i] << ',' << csv::format_double(curve.runtimes_sec[i]) << '\n';
  });
  std::cout << "chosen_k=" << curve.chosen_k << '\n';
}

struct ClassifyArgs {
  std::vector<std::string> inputs;
  std::string labels, output;
};

void run_classify(const ClassifyArgs& a, const PipelineConfig& cfg, unsigned workers) {
  if (a.labels.empty()) throw ConfigError("classify needs --labels");
  const auto il = read_id_labels(a.labels);
  for (std::size_t i = 0; i < il.labels.size(); ++i)
    if (il.labels[i].empty()) throw StratifyError("row " + std::to_string(i) + " of " + a.labels + " has no label");
  const auto y = encode_labels(il.labels);
  std::vector<std::pair<std::string, Eigen::MatrixXd>> embeddings;
  std::set<std::string> names;
  std::vector<fs::path> inputs;
  for (const auto& path : a.inputs) {
    const auto name = fs::path(path).stem().string();
    if (!names.insert(name).second) throw ConfigError("two embeddings share the name '" + name + "'");
    embeddings.emplace_back(name, load_matrix(path));
    inputs.emplace_back(path);
  }
  inputs.emplace_back(a.labels);
  ExperimentConfig ec;
  ec.classifiers = cfg.list("classify.classifiers");
  ec.seeds = cfg.number_list<std::uint64_t>("seeds");
  ec.test_fraction = cfg.number<double>("classify.test_fraction");
  ec.folds = cfg.number<int>("classify.folds");
  ec.workers = workers;
  const auto result = run_experiment(embeddings, y, ec);

  const fs::path prefix = a.output;
  const fs::path runs = prefix.string() + ".runs.csv", mean = prefix.string() + ".mean.csv",
                 sd = prefix.string() + ".std.csv", timings = prefix.string() + ".timings.csv";
  write_file(runs, [&](std::ostream& out) { write_runs_csv(out, result.runs); });
  write_file(mean, [&](std::ostream& out) { write_summary_csv(out, result.rows, false); });
  write_file(sd, [&](std::ostream& out) { write_summary_csv(out, result.rows, true); });
  write_file(timings, [&](std::ostream& out) { write_run_timings_csv(out, result.runs); });
  for (const auto& p : {runs, mean, sd}) write_sidecar(p, "classify", cfg, inputs);
}

inline constexpr std::string_view kQualityHeader =
    "Method,Algorithm,Silhouette Coefficient,Calinski Harabasz Score,Davies-Bouldin Score";

struct EvaluateArgs {
  std::string input, assignments, output, method, algorithm;
};

void run_evaluate(const EvaluateArgs& a, const PipelineConfig& cfg, unsigned workers) {
  const Eigen::MatrixXd X = load_matrix(a.input);
  const auto labels = read_assignments(a.assignments);
  if (labels.size() != static_cast<std::size_t>(X.rows()))
    throw SchemaError("assignments have " + std::to_string(labels.size()) + " rows for " + std::to_string(X.rows()) +
                      " embedding rows");
  const auto method = a.method.empty() ? fs::path(a.input).stem().string() : a.method;
  const auto algorithm = a.algorithm.empty() ? fs::path(a.assignments).stem().string() : a.algorithm;
  ClusterQualityReport q;
  q.silhouette = silhouette(X, labels, workers);
  q.calinski_harabasz = calinski_harabasz(X, labels);
  q.davies_bouldin = davies_bouldin(X, labels);
  write_file(a.output, [&](std::ostream& out) {
    out << kQualityHeader << '\n'
        << method << ',' << algorithm << ',' << csv::format_double(q.silhouette) << ','
        << csv::format_double(q.calinski_harabasz) << ',' << csv::format_double(q.davies_bouldin) << '\n';
  });
  write_sidecar(a.output, "evaluate", cfg, {a.input, a.assignments});
  const auto cluster_timings = companion(a.assignments, ".timings.csv");
  if (fs::exists(cluster_timings)) {
    auto in = csv::open_input(cluster_timings);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const auto f = csv::split(csv::strip_cr(row));
    if (f.size() != 2) throw SchemaError(cluster_timings.string() + ": expected algorithm,runtime_sec");
    write_file(companion(a.output, ".timings.csv"), [&](std::ostream& out) {
      out << "Method,Algorithm,Clustering Runtime (Sec.)\n" << method << ',' << algorithm << ',' << f[1] << '\n';
    });
  }
}

struct ReportArgs {
  std::vector<std::string> runs, quality, timings;
  std::string output;
  int digits = 3;
};

std::vector<std::string> read_lines_after_header(const fs::path& path, std::string_view expected_header) {
  require_file(path);
  auto in = csv::open_input(path);
  std::string line;
  if (!std::getline(in, line) || csv::strip_cr(line) != expected_header)
    throw SchemaError(path.string() + ": expected header '" + std::string(expected_header) + "'");
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    line = csv::strip_cr(line);
    if (!line.empty()) rows.push_back(line);
  }
  return rows;
}

void run_report(const ReportArgs& a, const PipelineConfig& cfg) {
  if (a.runs.empty() && a.quality.empty()) throw ConfigError("report needs --runs and/or --quality inputs");
  const fs::path prefix = a.output;
  std::vector<fs::path> inputs;
  if (!a.runs.empty()) {
    std::vector<RunRecord> runs;
    for (const auto& p : a.runs) {
      require_file(p);
      auto in = csv::open_input(p);
      auto part = read_runs_csv(in);
      runs.insert(runs.end(), part.begin(), part.end());
      inputs.emplace_back(p);
    }
    const auto rows = summarize(runs);
    const fs::path mean = prefix.string() + ".mean.csv", sd = prefix.string() + ".std.csv";
    write_file(mean, [&](std::ostream& out) { write_summary_csv(out, rows, false, a.digits); });
    write_file(sd, [&](std::ostream& out) { write_summary_csv(out, rows, true, a.digits); });
    write_sidecar(mean, "report", cfg, inputs);
    write_sidecar(sd, "report", cfg, inputs);
  }
  if (!a.quality.empty()) {
    std::vector<fs::path> qinputs;
    std::vector<std::string> rows;
    for (const auto& p : a.quality) {
      for (auto& r : read_lines_after_header(p, kQualityHeader)) rows.push_back(std::move(r));
      qinputs.emplace_back(p);
    }
    const fs::path table = prefix.string() + ".clustering.csv";
    write_file(table, [&](std::ostream& out) {
      out << kQualityHeader << '\n';
      for (const auto& r : rows) {
        const auto f = csv::split(r);
        if (f.size() != 5) throw SchemaError("quality row '" + r + "' does not have 5 fields");
        out << f[0] << ',' << f[1];
        for (std::size_t c = 2; c < 5; ++c)
          out << ',' << csv::format_fixed(csv::parse_number<double>(f[c], "quality row"), a.digits);
        out << '\n';
      }
    });
    write_sidecar(table, "report", cfg, qinputs);
  }
  if (!a.timings.empty()) {
    // Timing inputs are either per-run classifier timings or clustering runtimes.
    std::vector<RunRecord> train;
    std::vector<std::string> clustering;
    for (const auto& p : a.timings) {
      require_file(p);
      auto in = csv::open_input(p);
      std::string header, line;
      std::getline(in, header);
      header = csv::strip_cr(header);
      while (std::getline(in, line)) {
        line = csv::strip_cr(line);
        if (line.empty()) continue;
        const auto f = csv::split(line);
        if (header == "method,classifier,seed,train_time_sec" && f.size() == 4) {
          RunRecord r{std::string(f[0]), std::string(f[1]), csv::parse_number<std::uint64_t>(f[2], p)};
          r.train_time_sec = csv::parse_number<double>(f[3], p);
          train.push_back(std::move(r));
        } else if (header == "Method,Algorithm,Clustering Runtime (Sec.)" && f.size() == 3) {
          clustering.push_back(line);
        } else {
          throw SchemaError(p + ": unrecognized timing file layout");
        }
      }
    }
    if (!train.empty())
      write_file(prefix.string() + ".train_timings.csv",
                 [&](std::ostream& out) { write_summary_timings_csv(out, summarize(train)); });
    if (!clustering.empty())
      write_file(prefix.string() + ".clustering_timings.csv", [&](std::ostream& out) {
        out << "Method,Algorithm,Clustering Runtime (Sec.)\n";
        for (const auto& r : clustering) out << r << '\n';
      });
  }
}

struct Pca2dArgs {
  std::string input, output, labels;
};

void run_pca2d(const Pca2dArgs& a, const PipelineConfig& cfg) {
  const Eigen::MatrixXd X = load_matrix(a.input);
  const Eigen::MatrixXd P = pca_project(X, 2);
  std::vector<std::string> labels;
  std::vector<fs::path> inputs{a.input};
  if (!a.labels.empty()) {
    labels = read_id_labels(a.labels).labels;
    if (labels.size() != static_cast<std::size_t>(X.rows()))
      throw SchemaError("labels have " + std::to_string(labels.size()) + " rows for " + std::to_string(X.rows()));
    inputs.emplace_back(a.labels);
  }
  write_file(a.output, [&](std::ostream& out) {
    out << "node_index,pc1,pc2" << (labels.empty() ? "" : ",label") << '\n';
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      out << i << ',' << csv::format_double(P(i, 0)) << ',' << csv::format_double(P(i, 1));
      if (!labels.empty()) out << ',' << labels[static_cast<std::size_t>(i)];
      out << '\n';
    }
  });
  write_sidecar(a.output, "pca2d", cfg, inputs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence similarity network toolkit: featurize, graph, embed, cluster, classify"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common common;
  std::map<std::string, Bindings> bindings;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "INI config file (flags override it)");
    sub->add_option("--workers", common.workers, "worker threads (default: SSNKIT_WORKERS or all cores)");
    auto& b = bindings[sub->get_name()];
    b.add(sub, "--seed", "seed", "random seed");
    return &b;
  };

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "generate a labeled synthetic lineage dataset (FASTA)");
  s_synth->add_option("--output", synth.output, "output FASTA")->required();
  {
    auto* b = add_common(s_synth);
    b->add(s_synth, "--lineages", "synth.num_lineages", "number of lineages");
    b->add(s_synth, "--per-lineage", "synth.per_lineage", "sequences per lineage");
    b->add(s_synth, "--length", "synth.length", "sequence length");
    b->add(s_synth, "--within-rate", "synth.within_mut_rate", "per-site mutation rate within a lineage");
    b->add(s_synth, "--between-count", "synth.between_mut_count", "substitutions separating lineages");
  }

  FeaturizeArgs feat;
  auto* s_feat = app.add_subcommand("featurize", "k-mer frequency vectors (sparse triplets)");
  s_feat->add_option("--input", feat.input, "input FASTA")->required();
  s_feat->add_option("--output", feat.output, "output triplet CSV")->required();
  {
    auto* b = add_common(s_feat);
    b->add(s_feat, "--k", "k", "mer size");
    b->add_flag(s_feat, "--strict", "strict", "reject residues outside the 20-letter alphabet");
  }

  GraphArgs graph;
  auto* s_graph = app.add_subcommand("graph", "build the K-nearest-neighbor similarity network");
  s_graph->add_option("--input", graph.input, "triplet CSV from featurize")->required();
  s_graph->add_option("--output", graph.output, "output prefix (.edges.tsv, .nodes.csv)")->required();
  s_graph->add_option("--labels", graph.labels, "id,label CSV (default: the featurize companion file)");
  {
    auto* b = add_common(s_graph);
    b->add(s_graph, "--K", "K", "neighbors per node");
    b->add_flag(s_graph, "--mutual", "graph.mutual", "keep only mutual neighbor pairs");
  }

  EmbedArgs embed;
  auto* s_embed = app.add_subcommand("embed", "node embeddings of a graph");
  s_embed->add_option("--input", embed.input, "graph prefix")->required();
  s_embed->add_option("--output", embed.output, "output embedding CSV")->required();
  {
    auto* b = add_common(s_embed);
    b->add(s_embed, "--dim", "dim", "embedding dimension");
    b->add(s_embed, "--method", "method",
           "laplacian_eigenmaps, lle, hope, graph_factorization, deepwalk or node2vec");
    b->add(s_embed, "--p", "walk.p", "return parameter");
    b->add(s_embed, "--q", "walk.q", "in-out parameter");
    b->add_flag(s_embed, "--largest-component", "embed.largest_component",
                "spectral methods: embed the largest component of a disconnected graph");
  }

  ClusterArgs clus;
  auto* s_clus = app.add_subcommand("cluster", "cluster embedding rows");
  s_clus->add_option("--input", clus.input, "embedding CSV")->required();
  s_clus->add_option("--output", clus.output, "output assignments CSV")->required();
  s_clus->add_option("--graph", clus.graph, "graph prefix (agglomerative connectivity)");
  {
    auto* b = add_common(s_clus);
    b->add(s_clus, "--algorithm", "cluster.algorithm", "kmeans, agglomerative, dbscan, gmm or spectral");
    b->add(s_clus, "--clusters", "cluster.k", "number of clusters");
    b->add(s_clus, "--linkage", "cluster.linkage", "ward or average");
    b->add(s_clus, "--eps", "cluster.eps", "dbscan radius");
    b->add(s_clus, "--min-pts", "cluster.min_pts", "dbscan core threshold");
  }

  ElbowArgs elbow;
  auto* s_elbow = app.add_subcommand("elbow", "k-means SSE curve and knee choice");
  s_elbow->add_option("--input", elbow.input, "embedding CSV")->required();
  s_elbow->add_option("--output", elbow.output, "output curve CSV")->required();
  {
    auto* b = add_common(s_elbow);
    b->add(s_elbow, "--k-min", "elbow.k_min", "smallest cluster count");
    b->add(s_elbow, "--k-max", "elbow.k_max", "largest cluster count");
  }

  ClassifyArgs cls;
  auto* s_cls = app.add_subcommand("classify", "seeded classification benchmark over embeddings");
  s_cls->add_option("--input", cls.inputs, "embedding CSV(s); each file stem names a method")->required();
  s_cls->add_option("--labels", cls.labels, "CSV with id and label columns, row-aligned")->required();
  s_cls->add_option("--output", cls.output, "output prefix (.runs/.mean/.std/.timings.csv)")->required();
  {
    auto* b = add_common(s_cls);
    b->add(s_cls, "--seeds", "seeds", "comma-separated split seeds");
    b->add(s_cls, "--classifiers", "classify.classifiers", "comma-separated classifier names");
  }

  EvaluateArgs eval;
  auto* s_eval = app.add_subcommand("evaluate", "internal clustering quality of an assignment");
  s_eval->add_option("--input", eval.input, "embedding CSV")->required();
  s_eval->add_option("--assignments", eval.assignments, "assignments CSV from cluster")->required();
  s_eval->add_option("--output", eval.output, "output quality CSV")->required();
  s_eval->add_option("--name", eval.method, "method name (default: embedding file stem)");
  s_eval->add_option("--algorithm", eval.algorithm, "algorithm name (default: assignments file stem)");
  add_common(s_eval);

  ReportArgs rep;
  auto* s_rep = app.add_subcommand("report", "aggregate per-run CSVs into summary tables");
  s_rep->add_option("--runs,--input", rep.runs, "classify .runs.csv files");
  s_rep->add_option("--quality", rep.quality, "evaluate quality CSVs");
  s_rep->add_option("--timings", rep.timings, "timing CSVs from classify or evaluate");
  s_rep->add_option("--output", rep.output, "output prefix")->required();
  s_rep->add_option("--digits", rep.digits, "decimals in summary tables")->capture_default_str();
  add_common(s_rep);

  Pca2dArgs pca;
  auto* s_pca = app.add_subcommand("pca2d", "2-D principal component projection for plotting");
  s_pca->add_option("--input", pca.input, "embedding CSV")->required();
  s_pca->add_option("--output", pca.output, "output projection CSV")->required();
  s_pca->add_option("--labels", pca.labels, "optional CSV with id and label columns");
  add_common(s_pca);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", kUsage, e.what());
  }

  try {
    auto* sub = app.get_subcommands().front();
    const auto cfg = effective_config(common, bindings[sub->get_name()]);
    const unsigned workers = common.worker_count();
    const auto name = sub->get_name();
    if (name == "synth") run_synth(synth, cfg);
    else if (name == "featurize") run_featurize(feat, cfg, workers);
    else if (name == "graph") run_graph(graph, cfg, workers);
    else if (name == "embed") run_embed(embed, cfg, workers);
    else if (name == "cluster") run_cluster(clus, cfg);
    else if (name == "elbow") run_elbow(elbow, cfg);
    else if (name == "classify") run_classify(cls, cfg, workers);
    else if (name == "evaluate") run_evaluate(eval, cfg, workers);
    else if (name == "report") run_report(rep, cfg);
    else if (name == "pca2d") run_pca2d(pca, cfg);
  } catch (const Error& e) {
    return report_error(kind_name(e.kind()), exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report_error("InternalError", kUnknown, e.what());
  }
  return kOk;
}
