// stancegraph: command-line driver wiring the engine into reproducible
// experiments. Subcommands: synth, label, paths, train, eval, report.
//
// Exit codes: 0 success, 1 runtime/IO, 2 configuration, 3 compatibility.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stancegraph/jsonl.hpp"
#include "stancegraph/paths.hpp"
#include "stancegraph/stance.hpp"
#include "stancegraph/synthgen.hpp"
#include "stancegraph/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace stancegraph;

namespace {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("STANCEGRAPH_LOG");
    if (!env) return 0;
    std::string v = env;
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  out << content;
}

std::string file_digest(const std::string& path) {
  std::string bytes = read_file(path);
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx",
           static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

struct ManifestInfo {
  std::string command;
  json config;
  std::map<std::string, std::string> inputs;  // path -> content digest
  std::vector<std::string> outputs;
  uint64_t seed = 0;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

void write_manifest(const ManifestInfo& info, const std::string& dir) {
  ordered_json m;
  m["command"] = info.command;
  m["config"] = info.config;
  json inputs = json::object();
  for (const auto& [path, digest] : info.inputs) inputs[path] = digest;
  m["inputs"] = inputs;
  m["outputs"] = info.outputs;
  m["seed"] = info.seed;
  m["wall_clock_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - info.started)
                           .count();
  write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

// ---- training config resolution --------------------------------------------

struct TrainCliOptions {
  std::string config_path;
  std::vector<uint64_t> seeds;
  int jobs = 1;
  // overrides; only values the user passed are applied
  std::optional<double> lr;
  std::optional<int> epochs, patience, neg_ratio, batch_size;
  std::optional<int> bow_buckets, embed_dim, layers, mlp_hidden;
  std::optional<std::string> enabled_paths;
  std::optional<bool> stance_typed, count_mentions, paths_all_posts;
  std::optional<int64_t> co_engage_window;
  std::optional<double> holdout_frac;
};

std::vector<PathKind> parse_path_list(const std::string& csv) {
  std::vector<PathKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto kind = path_kind_from_string(item);
    if (!kind) throw Error(Errc::ConfigInvalid, "unknown path kind '" + item + "'");
    out.push_back(*kind);
  }
  if (out.empty()) throw Error(Errc::ConfigInvalid, "enabled_paths must not be empty");
  return out;
}

TrainConfig resolve_train_config(const TrainCliOptions& opts) {
  TrainConfig cfg;
  if (!opts.config_path.empty()) {
    json j;
    try {
      j = json::parse(read_file(opts.config_path));
    } catch (const json::exception& e) {
      throw Error(Errc::ConfigInvalid, std::string("train config: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key == "seed") cfg.seed = it.value().get<uint64_t>();
      else if (key == "lr") cfg.lr = it.value().get<double>();
      else if (key == "epochs") cfg.epochs = it.value().get<int>();
      else if (key == "patience") cfg.patience = it.value().get<int>();
      else if (key == "neg_ratio") cfg.neg_ratio = it.value().get<int>();
      else if (key == "batch_size") cfg.batch_size = it.value().get<int>();
      else if (key == "holdout_frac") cfg.holdout_frac = it.value().get<double>();
      else if (key == "count_mentions") cfg.count_mentions = it.value().get<bool>();
      else if (key == "bow_buckets") cfg.model.bow_buckets = it.value().get<int>();
      else if (key == "embed_dim") cfg.model.embed_dim = it.value().get<int>();
      else if (key == "layers") cfg.model.layers = it.value().get<int>();
      else if (key == "mlp_hidden") cfg.model.mlp_hidden = it.value().get<int>();
      else if (key == "stance_typed_relations")
        cfg.model.stance_typed_relations = it.value().get<bool>();
      else if (key == "enabled_paths") {
        cfg.model.enabled_paths.clear();
        for (const auto& name : it.value()) {
          auto kind = path_kind_from_string(name.get<std::string>());
          if (!kind) throw Error(Errc::ConfigInvalid, "unknown path kind in config");
          cfg.model.enabled_paths.push_back(*kind);
        }
      } else if (key == "paths_all_posts") cfg.paths.all_posts = it.value().get<bool>();
      else if (key == "co_engage_window_secs") {
        if (!it.value().is_null()) cfg.paths.co_engage_window_secs = it.value().get<int64_t>();
      } else {
        throw Error(Errc::ConfigInvalid, "unknown train config key '" + key + "'");
      }
    }
  }
  if (opts.lr) cfg.lr = *opts.lr;
  if (opts.epochs) cfg.epochs = *opts.epochs;
  if (opts.patience) cfg.patience = *opts.patience;
  if (opts.neg_ratio) cfg.neg_ratio = *opts.neg_ratio;
  if (opts.batch_size) cfg.batch_size = *opts.batch_size;
  if (opts.holdout_frac) cfg.holdout_frac = *opts.holdout_frac;
  if (opts.bow_buckets) cfg.model.bow_buckets = *opts.bow_buckets;
  if (opts.embed_dim) cfg.model.embed_dim = *opts.embed_dim;
  if (opts.layers) cfg.model.layers = *opts.layers;
  if (opts.mlp_hidden) cfg.model.mlp_hidden = *opts.mlp_hidden;
  if (opts.enabled_paths) cfg.model.enabled_paths = parse_path_list(*opts.enabled_paths);
  if (opts.stance_typed) cfg.model.stance_typed_relations = *opts.stance_typed;
  if (opts.count_mentions) cfg.count_mentions = *opts.count_mentions;
  if (opts.paths_all_posts) cfg.paths.all_posts = *opts.paths_all_posts;
  if (opts.co_engage_window) cfg.paths.co_engage_window_secs = *opts.co_engage_window;
  cfg.validate();
  return cfg;
}

json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["lr"] = cfg.lr;
  j["epochs"] = cfg.epochs;
  j["patience"] = cfg.patience;
  j["neg_ratio"] = cfg.neg_ratio;
  j["batch_size"] = cfg.batch_size;
  j["holdout_frac"] = cfg.holdout_frac;
  j["count_mentions"] = cfg.count_mentions;
  j["bow_buckets"] = cfg.model.bow_buckets;
  j["embed_dim"] = cfg.model.embed_dim;
  j["layers"] = cfg.model.layers;
  j["mlp_hidden"] = cfg.model.mlp_hidden;
  std::vector<std::string> paths;
  for (PathKind k : cfg.model.enabled_paths) paths.push_back(to_string(k));
  j["enabled_paths"] = paths;
  j["stance_typed_relations"] = cfg.model.stance_typed_relations;
  j["paths_all_posts"] = cfg.paths.all_posts;
  j["co_engage_window_secs"] =
      cfg.paths.co_engage_window_secs ? json(*cfg.paths.co_engage_window_secs) : json(nullptr);
  return j;
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) { return json(v).dump(); }

std::string trajectory_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "epoch,main,fsp,fop,esp,eop\n";
  for (size_t i = 0; i < report.attention_trajectory.size(); ++i) {
    out << i;
    for (double w : report.attention_trajectory[i]) out << "," << format_double(w);
    out << "\n";
  }
  return out.str();
}

// ---- subprocess stance provider ---------------------------------------------

// Runs an external command once; sends {"source","response"} JSON lines on its
// stdin and reads {"support","oppose","neutral"} JSON lines from its stdout.
// The command must flush after each line.
class ExecProvider final : public StanceProvider {
 public:
  explicit ExecProvider(const std::string& command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw Error(Errc::ProviderFailure, "pipe failed");
    }
    pid_ = fork();
    if (pid_ < 0) throw Error(Errc::ProviderFailure, "fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    to_child_ = fdopen(to_child[1], "w");
    from_child_ = fdopen(from_child[0], "r");
    if (!to_child_ || !from_child_) throw Error(Errc::ProviderFailure, "fdopen failed");
  }

  ~ExecProvider() override {
    if (to_child_) fclose(to_child_);
    if (from_child_) fclose(from_child_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

  StanceScore classify(const std::string& source_text,
                       const std::string& response_text) const override {
    json request = {{"source", source_text}, {"response", response_text}};
    std::string line = request.dump();
    fputs(line.c_str(), to_child_);
    fputc('\n', to_child_);
    fflush(to_child_);

    char buf[8192];
    if (!fgets(buf, sizeof(buf), from_child_)) {
      throw Error(Errc::ProviderFailure, "provider closed its output stream");
    }
    json reply;
    try {
      reply = json::parse(buf);
    } catch (const json::exception& e) {
      throw Error(Errc::ProviderFailure, std::string("bad provider reply: ") + e.what());
    }
    StanceScore score;
    score.support = reply.value("support", 0.0);
    score.oppose = reply.value("oppose", 0.0);
    score.neutral = reply.value("neutral", 0.0);
    if (std::abs(score.support + score.oppose + score.neutral - 1.0) > 1e-9) {
      throw Error(Errc::ProviderFailure, "provider scores do not sum to 1");
    }
    return score;
  }

 private:
  pid_t pid_ = -1;
  FILE* to_child_ = nullptr;
  FILE* from_child_ = nullptr;
};

// ---- subcommands --------------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& preset,
              std::optional<uint64_t> seed, const std::string& out_dir) {
  ManifestInfo manifest;
  manifest.command = "synth";
  SynthConfig cfg;
  if (!preset.empty()) {
    cfg = synth_config_from_json("{\"size_preset\": \"" + preset + "\"}");
  }
  if (!config_path.empty()) {
    cfg = synth_config_from_json(read_file(config_path));
    manifest.inputs[config_path] = file_digest(config_path);
  }
  if (seed) cfg.seed = *seed;
  cfg.validate();

  log_info("generating graph: " + std::to_string(cfg.n_users) + " users, " +
           std::to_string(cfg.n_posts) + " posts");
  auto [graph, gt] = generate(cfg);

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  save_jsonl(graph, (dir / "nodes.jsonl").string(), (dir / "edges.jsonl").string());
  save_ground_truth(gt, (dir / "ground_truth.jsonl").string());

  manifest.config = json::parse(synth_config_to_json(cfg));
  manifest.seed = cfg.seed;
  manifest.outputs = {"nodes.jsonl", "edges.jsonl", "ground_truth.jsonl"};
  write_manifest(manifest, out_dir);
  log_info("synth complete: " + std::to_string(graph.edge_count()) + " edges, " +
           std::to_string(gt.realized_count) + " future links");
  return 0;
}

int cmd_label(const std::string& nodes_path, const std::string& edges_path,
              const std::string& provider_spec, const std::string& out_path, bool lenient,
              const std::string& bare_reshare) {
  HeteroGraph g = load_jsonl(nodes_path, edges_path, !lenient);
  g.freeze();

  LabelConfig cfg;
  if (bare_reshare == "neutral") cfg.bare_reshare_stance = BareReshareStance::Neutral;
  else if (bare_reshare == "support") cfg.bare_reshare_stance = BareReshareStance::Support;
  else throw Error(Errc::ConfigInvalid, "bare-reshare-stance must be support or neutral");

  std::unique_ptr<StanceProvider> provider;
  if (provider_spec == "lexicon") {
    provider = std::make_unique<LexiconProvider>();
  } else if (provider_spec.rfind("exec:", 0) == 0) {
    provider = std::make_unique<ExecProvider>(provider_spec.substr(5));
  } else {
    throw Error(Errc::ConfigInvalid, "provider must be 'lexicon' or 'exec:<command>'");
  }

  HeteroGraph labeled = label_graph_stances(g, *provider, cfg);
  save_edges_jsonl(labeled, out_path);
  log_info("labeled edges written to " + out_path);
  return 0;
}

int cmd_paths(const std::string& nodes_path, const std::string& edges_path,
              const std::string& out_path, bool lenient, bool all_posts,
              std::optional<int64_t> window) {
  HeteroGraph g = load_jsonl(nodes_path, edges_path, !lenient);
  g.freeze();
  PathConfig cfg;
  cfg.all_posts = all_posts;
  cfg.co_engage_window_secs = window;
  PathGraphs pg = materialize(g, cfg);
  save_paths_jsonl(pg, out_path);
  size_t total = 0;
  for (const auto& [kind, edges] : pg.derived) total += edges.size();
  log_info("wrote " + std::to_string(total) + " derived path edges");
  return 0;
}

int run_single_train(const HeteroGraph& g, TrainConfig cfg, const std::string& out_dir,
                     ManifestInfo manifest) {
  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  if (log_level() >= 1) {
    cfg.progress = [](int epoch, double loss, double val_auc) {
      std::ostringstream ss;
      ss << "epoch " << epoch << " loss " << loss << " holdout auc " << val_auc;
      log_info(ss.str());
    };
  }
  auto [model, report] = train(g, cfg);

  write_file((dir / "checkpoint.json").string(),
             model.store.to_checkpoint_json(config_hash_hex(model.cfg)) + "\n");
  write_file((dir / "metrics.json").string(), report.to_json());
  write_file((dir / "attention_trajectory.csv").string(), trajectory_csv(report));

  manifest.config = train_config_to_json(cfg);
  manifest.seed = cfg.seed;
  manifest.outputs = {"checkpoint.json", "metrics.json", "attention_trajectory.csv"};
  write_manifest(manifest, out_dir);

  std::ostringstream summary;
  summary << "val_auc " << report.val_auc << " test_auc " << report.test_auc;
  log_info(summary.str());
  return 0;
}

int cmd_train(const std::string& nodes_path, const std::string& edges_path,
              const TrainCliOptions& opts, const std::string& out_dir) {
  ManifestInfo manifest;
  manifest.command = "train";
  manifest.inputs[nodes_path] = file_digest(nodes_path);
  manifest.inputs[edges_path] = file_digest(edges_path);
  if (!opts.config_path.empty()) {
    manifest.inputs[opts.config_path] = file_digest(opts.config_path);
  }

  HeteroGraph g = load_jsonl(nodes_path, edges_path);
  g.freeze();
  TrainConfig cfg = resolve_train_config(opts);

  if (opts.seeds.size() <= 1) {
    if (opts.seeds.size() == 1) cfg.seed = opts.seeds[0];
    return run_single_train(g, cfg, out_dir, manifest);
  }

  // multi-seed sweep: independent child processes, at most --jobs at a time
  int jobs = std::max(1, opts.jobs);
  std::vector<pid_t> running;
  int failures = 0;
  auto reap_one = [&]() {
    int status = 0;
    pid_t done = wait(&status);
    if (done > 0 && (!WIFEXITED(status) || WEXITSTATUS(status) != 0)) ++failures;
    running.erase(std::remove(running.begin(), running.end(), done), running.end());
  };
  for (uint64_t seed : opts.seeds) {
    while (static_cast<int>(running.size()) >= jobs) reap_one();
    pid_t pid = fork();
    if (pid < 0) throw Error(Errc::IoError, "fork failed");
    if (pid == 0) {
      TrainConfig child_cfg = cfg;
      child_cfg.seed = seed;
      std::string child_dir = (fs::path(out_dir) / ("seed_" + std::to_string(seed))).string();
      int rc = 1;
      try {
        rc = run_single_train(g, child_cfg, child_dir, manifest);
      } catch (const std::exception& e) {
        std::cerr << "seed " << seed << ": " << e.what() << "\n";
      }
      _exit(rc);
    }
    running.push_back(pid);
  }
  while (!running.empty()) reap_one();
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& nodes_path,
             const std::string& edges_path, const std::string& window_name,
             const TrainCliOptions& opts) {
  std::string stored_hash;
  ParamStore store = ParamStore::from_checkpoint_json(read_file(checkpoint_path), &stored_hash);
  TrainConfig cfg = resolve_train_config(opts);
  if (!opts.seeds.empty()) cfg.seed = opts.seeds[0];
  if (config_hash_hex(cfg.model) != stored_hash) {
    throw Error(Errc::HashMismatch, "checkpoint was trained under config hash " + stored_hash +
                                        ", current config hashes to " +
                                        config_hash_hex(cfg.model));
  }
  HeteroGraph g = load_jsonl(nodes_path, edges_path);
  g.freeze();

  Window window;
  if (window_name == "test") window = Window::Test;
  else if (window_name == "val") window = Window::Val;
  else throw Error(Errc::ConfigInvalid, "window must be 'test' or 'val'");

  StanceGnnModel model;
  model.cfg = cfg.model;
  model.store = std::move(store);
  SplitSpec spec = temporal_split(g);
  double auc = evaluate(model, g, spec, window, cfg);

  ordered_json out;
  out["window"] = window_name;
  out["auc"] = auc;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_path) {
  std::ostringstream csv;
  csv << "run,enabled_paths,seed,val_auc,test_auc,w_main,w_fsp,w_fop,w_esp,w_eop\n";
  for (const std::string& dir : run_dirs) {
    fs::path metrics_path = fs::path(dir) / "metrics.json";
    if (!fs::exists(metrics_path)) {
      throw Error(Errc::IoError, "no metrics.json under '" + dir + "'");
    }
    json metrics = json::parse(read_file(metrics_path.string()));
    std::string paths = "?";
    fs::path manifest_path = fs::path(dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
      json manifest = json::parse(read_file(manifest_path.string()));
      if (manifest.contains("config") && manifest["config"].contains("enabled_paths")) {
        paths.clear();
        for (const auto& p : manifest["config"]["enabled_paths"]) {
          if (!paths.empty()) paths += "|";
          paths += p.get<std::string>();
        }
      }
    }
    csv << fs::path(dir).filename().string() << "," << paths << ","
        << metrics.value("seed", uint64_t{0});
    for (const char* key : {"val_auc", "test_auc"}) {
      csv << "," << format_double(metrics.value(key, 0.0));
    }
    auto attention = metrics.value("final_attention", std::vector<double>(5, 0.0));
    attention.resize(5, 0.0);
    for (double w : attention) csv << "," << format_double(w);
    csv << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::ConfigInvalid:
    case Errc::EmptyTopic:
      return 2;
    case Errc::HashMismatch:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stance-aware graph diffusion engine"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled graph");
  std::string synth_config, synth_preset, synth_out;
  std::optional<uint64_t> synth_seed;
  synth->add_option("--config", synth_config, "synth config json");
  synth->add_option("--preset", synth_preset, "size preset: small|medium|large");
  synth->add_option("--seed", synth_seed, "seed override");
  synth->add_option("--out", synth_out, "output directory")->required();

  auto* label = app.add_subcommand("label", "assign stances to interaction edges");
  std::string label_nodes, label_edges, label_provider = "lexicon", label_out;
  std::string label_bare = "support";
  bool label_lenient = false;
  label->add_option("--nodes", label_nodes)->required();
  label->add_option("--edges", label_edges)->required();
  label->add_option("--provider", label_provider, "lexicon or exec:<command>");
  label->add_option("--out", label_out, "labeled edges output")->required();
  label->add_option("--bare-reshare-stance", label_bare, "support|neutral");
  label->add_flag("--lenient", label_lenient, "accept unknown json keys");

  auto* paths_cmd = app.add_subcommand("paths", "export derived information passing paths");
  std::string paths_nodes, paths_edges, paths_out;
  bool paths_lenient = false, paths_all = false;
  std::optional<int64_t> paths_window;
  paths_cmd->add_option("--nodes", paths_nodes)->required();
  paths_cmd->add_option("--edges", paths_edges)->required();
  paths_cmd->add_option("--out", paths_out)->required();
  paths_cmd->add_flag("--lenient", paths_lenient);
  paths_cmd->add_flag("--all-posts", paths_all, "derive paths for all posts");
  paths_cmd->add_option("--co-engage-window", paths_window, "seconds of engagement history");

  auto* train_cmd = app.add_subcommand("train", "train the link predictor");
  std::string train_nodes, train_edges, train_out;
  TrainCliOptions train_opts;
  train_cmd->add_option("--nodes", train_nodes)->required();
  train_cmd->add_option("--edges", train_edges)->required();
  train_cmd->add_option("--out", train_out, "run output directory")->required();
  train_cmd->add_option("--config", train_opts.config_path, "train config json");
  train_cmd->add_option("--seeds", train_opts.seeds, "seeds (one run each)")->delimiter(',');
  train_cmd->add_option("--jobs", train_opts.jobs, "parallel sweep processes");
  train_cmd->add_option("--lr", train_opts.lr);
  train_cmd->add_option("--epochs", train_opts.epochs);
  train_cmd->add_option("--patience", train_opts.patience);
  train_cmd->add_option("--neg-ratio", train_opts.neg_ratio);
  train_cmd->add_option("--batch-size", train_opts.batch_size);
  train_cmd->add_option("--holdout-frac", train_opts.holdout_frac);
  train_cmd->add_option("--bow-buckets", train_opts.bow_buckets);
  train_cmd->add_option("--embed-dim", train_opts.embed_dim);
  train_cmd->add_option("--layers", train_opts.layers);
  train_cmd->add_option("--mlp-hidden", train_opts.mlp_hidden);
  train_cmd->add_option("--enabled-paths", train_opts.enabled_paths, "comma list: main,fsp,...");
  train_cmd->add_option("--stance-typed-relations", train_opts.stance_typed);
  train_cmd->add_option("--count-mentions", train_opts.count_mentions);
  train_cmd->add_option("--paths-all-posts", train_opts.paths_all_posts);
  train_cmd->add_option("--co-engage-window", train_opts.co_engage_window);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string eval_checkpoint, eval_nodes, eval_edges, eval_window = "test";
  TrainCliOptions eval_opts;
  eval_cmd->add_option("--checkpoint", eval_checkpoint)->required();
  eval_cmd->add_option("--nodes", eval_nodes)->required();
  eval_cmd->add_option("--edges", eval_edges)->required();
  eval_cmd->add_option("--window", eval_window, "test|val");
  eval_cmd->add_option("--config", eval_opts.config_path, "train config json");
  eval_cmd->add_option("--seed", eval_opts.seeds, "negative-sampling seed")->delimiter(',');
  eval_cmd->add_option("--bow-buckets", eval_opts.bow_buckets);
  eval_cmd->add_option("--embed-dim", eval_opts.embed_dim);
  eval_cmd->add_option("--layers", eval_opts.layers);
  eval_cmd->add_option("--mlp-hidden", eval_opts.mlp_hidden);
  eval_cmd->add_option("--enabled-paths", eval_opts.enabled_paths);
  eval_cmd->add_option("--stance-typed-relations", eval_opts.stance_typed);

  auto* report_cmd = app.add_subcommand("report", "tabulate run metrics as csv");
  std::vector<std::string> report_runs;
  std::string report_out;
  report_cmd->add_option("--runs", report_runs, "run directories")->required()->expected(-1);
  report_cmd->add_option("--out", report_out, "csv output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_config, synth_preset, synth_seed, synth_out);
    if (label->parsed()) {
      return cmd_label(label_nodes, label_edges, label_provider, label_out, label_lenient,
                       label_bare);
    }
    if (paths_cmd->parsed()) {
      return cmd_paths(paths_nodes, paths_edges, paths_out, paths_lenient, paths_all,
                       paths_window);
    }
    if (train_cmd->parsed()) return cmd_train(train_nodes, train_edges, train_opts, train_out);
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_checkpoint, eval_nodes, eval_edges, eval_window, eval_opts);
    }
    if (report_cmd->parsed()) return cmd_report(report_runs, report_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
