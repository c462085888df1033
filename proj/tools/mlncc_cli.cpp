// mlncc: command-line driver for the decoupled closeness-hub pipeline.
//
//   generate      synthetic two-layer network from a JSON generator spec
//   analyze       per-layer summaries (run once per layer)
//   compose       estimate AND-graph hubs from summaries only
//   ground-truth  exact hubs of the AND-aggregated layers
//   evaluate      accuracy of a composition result against ground truth
//   bench         seed sweep: generate, analyze, compose, compare
//
// Exit codes: 0 success, 2 usage or validation error, 1 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "mlncc/composition.hpp"
#include "mlncc/eval.hpp"
#include "mlncc/graph.hpp"
#include "mlncc/layer_analysis.hpp"
#include "mlncc/parallel.hpp"
#include "mlncc/summary.hpp"
#include "mlncc/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace mlncc::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  unsigned threads = 0;  // 0: MLN_CC_THREADS or hardware concurrency
  std::string output = "json";
  bool quiet = false;

  unsigned resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("MLN_CC_THREADS")) {
      try {
        int v = std::stoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
      } catch (const std::exception&) {
      }
      throw UsageError(std::string("MLN_CC_THREADS must be a positive integer, got '") + env + "'");
    }
    return default_thread_count();
  }
};

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": invalid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw Error("failed to write '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

UndirectedGraph read_layer(const std::string& path, std::optional<vertex_t> n_hint = std::nullopt) {
  if (fs::exists(path) && fs::is_regular_file(path) && fs::file_size(path) == 0) {
    throw UsageError("'" + path + "' is empty");
  }
  auto in = open_in(path);
  try {
    auto parsed = parse_edge_list(in, n_hint);
    if (parsed.stats.dropped() > 0) {
      std::cerr << "warning: " << path << ": dropped " << parsed.stats.self_loops << " self-loop(s) and "
                << parsed.stats.duplicates << " duplicate edge(s)\n";
    }
    return std::move(parsed.graph);
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Layers of one network must share a vertex set; smaller ones are padded.
std::vector<UndirectedGraph> read_layers(const std::vector<std::string>& paths) {
  std::vector<UndirectedGraph> layers;
  vertex_t n = 0;
  for (const auto& p : paths) {
    layers.push_back(read_layer(p));
    n = std::max(n, layers.back().num_vertices());
  }
  for (auto& g : layers) {
    if (g.num_vertices() < n) g = g.with_vertex_count(n);
  }
  return layers;
}

LayerSummary read_summary(const std::string& path) {
  auto in = open_in(path);
  try {
    return load_summary(in);
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

Selection make_selection(const std::string& selection, vertex_t k) {
  if (selection == "above-average") return Selection::above_average();
  if (selection == "top-k") {
    if (k < 1) throw UsageError("--selection top-k requires --k >= 1");
    return Selection::top_k(k);
  }
  throw UsageError("unknown selection '" + selection + "'");
}

std::string stem_of(const std::string& path) {
  auto stem = fs::path(path).filename().string();
  if (auto dot = stem.find('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return stem;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string spec;
  std::string out_dir;
};

int cmd_generate(const GenerateArgs& a, const GlobalOptions& g) {
  GenSpec spec = genspec_from_json(read_json(a.spec));
  HoMln mln = gen_mln(spec);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  json manifest;
  manifest["n"] = mln.num_vertices();
  manifest["layers"] = json::array();
  json edges = json::array();
  for (std::size_t i = 0; i < mln.num_layers(); ++i) {
    const std::string name = mln.labels()[i] + ".edges";
    std::ostringstream text;
    write_edge_list(mln.layer(i), text);
    write_text(dir / name, text.str());
    manifest["layers"].push_back(name);
    edges.push_back(mln.layer(i).num_edges());
  }
  manifest["edges"] = edges;
  manifest["and_edges"] = and_aggregate(mln.layer(0), mln.layer(1)).num_edges();
  manifest["seed"] = spec.seed;
  manifest["spec"] = to_json(spec);
  write_json(dir / "manifest.json", manifest);
  if (!g.quiet) {
    std::cerr << "generated n=" << mln.num_vertices() << " |E_L1|=" << edges[0] << " |E_L2|=" << edges[1]
              << " |E_AND|=" << manifest["and_edges"] << '\n';
  }
  std::cout << (dir / "manifest.json").string() << '\n';
  return 0;
}

struct AnalyzeArgs {
  std::vector<std::string> layers;
  std::string out_dir;
};

int cmd_analyze(const AnalyzeArgs& a, const GlobalOptions& g) {
  auto layers = read_layers(a.layers);
  const unsigned threads = g.resolved_threads();
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  json timing;
  timing["threads"] = threads;
  timing["layers"] = json::array();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Stopwatch clock;
    auto summary = analyze_layer(layers[i], threads);
    const double elapsed = clock.seconds();
    const fs::path out = dir / (stem_of(a.layers[i]) + ".summary.json");
    std::ostringstream text;
    save_summary(summary, text);
    write_text(out, text.str());
    timing["layers"].push_back(
        {{"input", a.layers[i]}, {"summary", out.string()}, {"n", summary.n}, {"t_psi", elapsed}});
    if (!g.quiet) {
      std::cerr << a.layers[i] << ": n=" << summary.n << " cc_nodes=" << summary.cc_nodes.size()
                << " t_psi=" << elapsed << "s\n";
    }
    std::cout << out.string() << '\n';
  }
  write_json(dir / "timing.json", timing);
  return 0;
}

struct ComposeArgs {
  std::vector<std::string> summaries;
  std::string method = "cc2";
  std::string selection = "above-average";
  vertex_t k = 0;
  std::string out;
};

int cmd_compose(const ComposeArgs& a, const GlobalOptions& g) {
  if (a.summaries.size() < 2) throw UsageError("compose needs at least two summaries");
  const Method method = parse_method(a.method);
  const Selection sel = make_selection(a.selection, a.k);
  std::vector<LayerSummary> summaries;
  for (const auto& p : a.summaries) summaries.push_back(read_summary(p));
  auto result = compose_multi(summaries, method, sel);
  write_json(a.out, to_json(result));
  if (!g.quiet) {
    std::cerr << to_string(method) << ": " << result.est_cc_nodes.size() << " estimated CC nodes, elapsed "
              << result.elapsed << "s\n";
  }
  std::cout << a.out << '\n';
  return 0;
}

struct GroundTruthArgs {
  std::vector<std::string> layers;
  std::string out;
};

int cmd_ground_truth(const GroundTruthArgs& a, const GlobalOptions& g) {
  if (a.layers.size() < 2) throw UsageError("ground-truth needs at least two layers");
  HoMln mln(read_layers(a.layers));
  std::vector<std::size_t> idx(mln.num_layers());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto gt = ground_truth(mln, idx, g.resolved_threads());
  json doc;
  doc["n"] = mln.num_vertices();
  doc["layers"] = a.layers;
  doc["aggregate_edges"] = gt.aggregate_edges;
  doc["cc_nodes"] = gt.cc_nodes;
  doc["timing"] = {{"t_gt_aggregate", gt.t_aggregate}, {"t_gt_cc", gt.t_cc}, {"t_gt", gt.t_aggregate + gt.t_cc}};
  write_json(a.out, doc);
  if (!g.quiet) {
    std::cerr << "ground truth: " << gt.cc_nodes.size() << " CC nodes, |E_AND|=" << gt.aggregate_edges
              << ", t_gt=" << gt.t_aggregate + gt.t_cc << "s\n";
  }
  std::cout << a.out << '\n';
  return 0;
}

struct EvaluateArgs {
  std::string result;
  std::string gt;
  std::string timing;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a, const GlobalOptions& g) {
  auto result = composition_from_json(read_json(a.result));
  auto gt_doc = read_json(a.gt);
  if (!gt_doc.is_object() || !gt_doc.contains("cc_nodes")) throw LoadError(a.gt + ": missing cc_nodes");
  const auto gt_n = static_cast<vertex_t>(detail::json_uint(detail::json_field(gt_doc, "n"), "n"));
  if (gt_n != result.n) throw DimensionError("result and ground truth disagree on n");
  auto gt_nodes = detail::json_vertex_set(gt_doc["cc_nodes"], "cc_nodes", gt_n);

  TimingBreakdown timing;
  timing.t_theta = result.elapsed;
  if (gt_doc.contains("timing")) {
    const auto& t = gt_doc["timing"];
    timing.t_gt_aggregate = detail::json_real(detail::json_field(t, "t_gt_aggregate"), "t_gt_aggregate");
    timing.t_gt_cc = detail::json_real(detail::json_field(t, "t_gt_cc"), "t_gt_cc");
  }
  if (!a.timing.empty()) {
    auto t = read_json(a.timing);
    for (const auto& layer : detail::json_field(t, "layers")) {
      timing.t_psi.push_back(detail::json_real(detail::json_field(layer, "t_psi"), "t_psi"));
    }
  }
  auto report = evaluate(result.method, result.est_cc_nodes, gt_nodes, std::move(timing));

  std::string text;
  if (g.output == "csv") {
    std::ostringstream csv;
    csv << kReportCsvHeader << '\n';
    write_csv_row(csv, stem_of(a.result), report);
    text = csv.str();
  } else {
    text = to_json(report).dump(2) + "\n";
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
    std::cout << a.out << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string spec;
  unsigned seeds = 20;
  std::vector<std::string> methods{"naive", "cc1", "cc2"};
  std::string selection = "above-average";
  vertex_t k = 0;
  std::string out_dir = "bench";
};

int cmd_bench(const BenchArgs& a, const GlobalOptions& g) {
  if (a.seeds < 1) throw UsageError("--seeds must be at least 1");
  GenSpec base = genspec_from_json(read_json(a.spec));
  ExperimentOptions opt;
  opt.methods.clear();
  for (const auto& m : a.methods) opt.methods.push_back(parse_method(m));
  opt.selection = make_selection(a.selection, a.k);
  opt.threads = 1;

  // One network per worker; each slot is written by exactly one worker.
  std::vector<std::vector<EvalReport>> reports(a.seeds);
  parallel_for(a.seeds, g.resolved_threads(), 1, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      GenSpec spec = base;
      spec.seed = base.seed + i;
      reports[i] = run_experiment(gen_mln(spec), opt).reports;
    }
  });

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::ostringstream runs;
  runs << kReportCsvHeader << '\n';
  json runs_json = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& r : reports[i]) {
      write_csv_row(runs, "seed" + std::to_string(base.seed + i), r);
      auto j = to_json(r);
      j["seed"] = base.seed + i;
      runs_json.push_back(std::move(j));
    }
  }
  write_text(dir / "bench_runs.csv", runs.str());
  write_json(dir / "bench_runs.json", runs_json);

  std::ostringstream summary;
  summary.precision(17);
  summary << "method,instances,mean_jaccard,mean_precision,mean_recall,mean_f1,"
             "mean_t_psi_min,mean_t_psi_max,mean_t_theta,mean_t_decoupled,mean_t_gt,mean_theta_to_min_psi\n";
  json summary_json = json::array();
  for (std::size_t m = 0; m < opt.methods.size(); ++m) {
    std::vector<double> cols(10, 0.0);
    for (const auto& per_seed : reports) {
      const auto& r = per_seed[m];
      const double vals[] = {r.jaccard,           r.precision,           r.recall,
                             r.f1,                r.timing.min_psi(),    r.timing.max_psi(),
                             r.timing.t_theta,    r.timing.t_decoupled(), r.timing.t_gt(),
                             r.timing.theta_to_min_psi()};
      for (std::size_t c = 0; c < cols.size(); ++c) cols[c] += vals[c];
    }
    for (auto& c : cols) c /= static_cast<double>(reports.size());
    summary << to_string(opt.methods[m]) << ',' << reports.size();
    for (double c : cols) summary << ',' << c;
    summary << '\n';
    summary_json.push_back({{"method", std::string(to_string(opt.methods[m]))},
                            {"instances", reports.size()},
                            {"mean_jaccard", cols[0]},
                            {"mean_precision", cols[1]},
                            {"mean_recall", cols[2]},
                            {"mean_f1", cols[3]},
                            {"mean_t_psi_min", cols[4]},
                            {"mean_t_psi_max", cols[5]},
                            {"mean_t_theta", cols[6]},
                            {"mean_t_decoupled", cols[7]},
                            {"mean_t_gt", cols[8]},
                            {"mean_theta_to_min_psi", cols[9]}});
  }
  write_text(dir / "bench_summary.csv", summary.str());
  write_json(dir / "bench_summary.json", summary_json);
  if (g.output == "csv") {
    std::cout << summary.str();
  } else {
    std::cout << summary_json.dump(2) << '\n';
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Closeness-centrality hubs of AND-aggregated multilayer networks"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--threads", global.threads, "Worker threads (default: MLN_CC_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", global.output, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", global.quiet, "Suppress progress messages");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic two-layer network");
  generate->add_option("spec", gen.spec, "Generator spec (JSON)")->required();
  generate->add_option("out_dir", gen.out_dir, "Output directory")->required();

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "Analyze layers into summaries");
  analyze->add_option("layers", ana.layers, "Layer edge-list files")->required();
  analyze->add_option("-o,--out", ana.out_dir, "Output directory")->required();

  ComposeArgs comp;
  auto* compose = app.add_subcommand("compose", "Estimate AND-graph CC nodes from summaries");
  compose->add_option("summaries", comp.summaries, "Layer summary files")->required();
  compose->add_option("--method", comp.method)->check(CLI::IsMember({"naive", "cc1", "cc2"}));
  compose->add_option("--selection", comp.selection)->check(CLI::IsMember({"above-average", "top-k"}));
  compose->add_option("--k", comp.k, "Hub count for top-k selection");
  compose->add_option("-o,--out", comp.out, "Result file")->required();

  GroundTruthArgs gta;
  auto* gtcmd = app.add_subcommand("ground-truth", "Exact CC nodes of the AND-aggregated layers");
  gtcmd->add_option("layers", gta.layers, "Layer edge-list files")->required();
  gtcmd->add_option("-o,--out", gta.out, "Ground-truth file")->required();

  EvaluateArgs eva;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a composition result against ground truth");
  evaluate_cmd->add_option("result", eva.result, "Composition result file")->required();
  evaluate_cmd->add_option("gt", eva.gt, "Ground-truth file")->required();
  evaluate_cmd->add_option("--timing", eva.timing, "timing.json written by analyze");
  evaluate_cmd->add_option("-o,--out", eva.out, "Report file (default: stdout)");

  BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "Seed sweep over a generator spec");
  bench->add_option("spec", ben.spec, "Generator spec (JSON)")->required();
  bench->add_option("--seeds", ben.seeds, "Number of seeds (spec seed, +1, ...)");
  bench->add_option("--methods", ben.methods, "Methods to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"naive", "cc1", "cc2"}));
  bench->add_option("--selection", ben.selection)->check(CLI::IsMember({"above-average", "top-k"}));
  bench->add_option("--k", ben.k, "Hub count for top-k selection");
  bench->add_option("-o,--out", ben.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*generate) return cmd_generate(gen, global);
  if (*analyze) return cmd_analyze(ana, global);
  if (*compose) return cmd_compose(comp, global);
  if (*gtcmd) return cmd_ground_truth(gta, global);
  if (*evaluate_cmd) return cmd_evaluate(eva, global);
  return cmd_bench(ben, global);
}

}  // namespace
}  // namespace mlncc::cli

int main(int argc, char** argv) {
  try {
    return mlncc::cli::run(argc, argv);
  } catch (const mlncc::UnsupportedError& e) {
    std::cerr << "error: unsupported: " << e.what() << '\n';
    return 2;
  } catch (const mlncc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
