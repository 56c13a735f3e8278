#include "xtrapulp/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "xtrapulp/baselines.hpp"
#include "xtrapulp/gen.hpp"
#include "xtrapulp/io.hpp"
#include "xtrapulp/metrics.hpp"
#include "xtrapulp/partition.hpp"

namespace xtrapulp {

namespace {

using nlohmann::json;

struct PartitionArgs {
  std::string input;
  part_t parts = 2;
  int tasks = 0;  // 0: hardware concurrency
  double vert_imb = 0.10;
  double edge_imb = 0.10;
  double x = 1.0;
  double y = 0.25;
  std::string iters = "3,5,10";
  std::uint64_t seed = 0;
  std::string method = "xtrapulp";
  std::string init = "bfs-lp";
  std::string dist = "block";
  bool dedup = false;
  bool strict = false;
  bool sequential = false;
  std::string output;
  std::string report;
  std::string mapping;
  std::string trace;
  std::string manifest;
};

struct GenerateArgs {
  std::string kind;
  int scale = -1;
  vid_t n = 0;
  std::uint64_t d_avg = 16;
  std::uint64_t seed = 0;
  double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
  unsigned workers = 1;
  std::string output;
};

struct EvaluateArgs {
  std::string input;
  std::vector<std::string> partitions;
  std::vector<std::string> names;
  part_t parts = 0;
  bool dedup = false;
  std::string metric = "edge_cut";
  std::string report = "-";
  std::string csv;
};

std::string env_name(const std::string& flag) {
  std::string name = "XPULP_";
  for (char ch : flag) name += ch == '-' ? '_' : static_cast<char>(std::toupper(ch));
  return name;
}

// Opens `path` for writing; "-" means `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void parse_iters(const std::string& text, Config& config) {
  std::array<int, 3> values{};
  std::istringstream in(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(in, item, ',')) {
    if (i == values.size()) throw ConfigError("--iters takes exactly three values");
    try {
      std::size_t used = 0;
      values[i++] = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("--iters: '" + item + "' is not an integer");
    }
  }
  if (i != values.size()) throw ConfigError("--iters takes exactly three values (outer,bal,ref)");
  config.outer_iters = values[0];
  config.balance_iters = values[1];
  config.refine_iters = values[2];
}

InitMode parse_init(const std::string& s) {
  if (s == "bfs-lp") return InitMode::BfsLp;
  if (s == "random") return InitMode::Random;
  if (s == "block") return InitMode::Block;
  throw ConfigError("unknown init mode '" + s + "'");
}

json config_json(const Config& c) {
  return {{"parts", c.parts},
          {"tasks", c.tasks},
          {"vert_imbalance", c.vert_imbalance},
          {"edge_imbalance", c.edge_imbalance},
          {"x", c.x},
          {"y", c.y},
          {"outer_iters", c.outer_iters},
          {"balance_iters", c.balance_iters},
          {"refine_iters", c.refine_iters},
          {"seed", c.seed},
          {"distribution", c.distribution == DistKind::Block ? "block" : "random"},
          {"sequential", c.sequential}};
}

// Resolved flags that reproduce a run when passed back to `partition`.
std::vector<std::string> resolved_args(const PartitionArgs& a, const Config& c) {
  std::vector<std::string> out = {"partition",
                                  "--input", a.input,
                                  "--parts", std::to_string(c.parts),
                                  "--tasks", std::to_string(c.tasks),
                                  "--vert-imb", json(c.vert_imbalance).dump(),
                                  "--edge-imb", json(c.edge_imbalance).dump(),
                                  "-X", json(c.x).dump(),
                                  "-Y", json(c.y).dump(),
                                  "--iters", std::to_string(c.outer_iters) + "," +
                                                 std::to_string(c.balance_iters) + "," +
                                                 std::to_string(c.refine_iters),
                                  "--seed", std::to_string(c.seed),
                                  "--method", a.method,
                                  "--init", a.init,
                                  "--dist", a.dist};
  if (a.dedup) out.push_back("--dedup");
  if (a.strict) out.push_back("--strict");
  if (c.sequential) out.push_back("--sequential");
  for (const auto& [flag, value] : {std::pair{"--output", &a.output}, {"--report", &a.report},
                                    {"--mapping", &a.mapping}, {"--trace", &a.trace}}) {
    if (!value->empty()) {
      out.push_back(flag);
      out.push_back(*value);
    }
  }
  return out;
}

int cmd_partition(const PartitionArgs& a, std::ostream& out, std::ostream& err) {
  Config config;
  config.parts = a.parts;
  config.tasks = a.tasks > 0 ? a.tasks : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  config.vert_imbalance = a.vert_imb;
  config.edge_imbalance = a.edge_imb;
  config.x = a.x;
  config.y = a.y;
  parse_iters(a.iters, config);
  config.seed = a.seed;
  config.init = parse_init(a.init);
  if (a.dist == "block") {
    config.distribution = DistKind::Block;
  } else if (a.dist == "random") {
    config.distribution = DistKind::RandomHash;
  } else {
    throw ConfigError("unknown distribution '" + a.dist + "'");
  }
  config.sequential = a.sequential;
  config.validate();

  const auto loaded = read_edge_list_file(a.input);
  const GlobalGraph g = build_csr(loaded.edges, loaded.num_vertices, a.dedup);
  if (static_cast<vid_t>(config.parts) > g.num_vertices()) {
    throw ConfigError("part count " + std::to_string(config.parts) + " exceeds vertex count " +
                      std::to_string(g.num_vertices()));
  }

  json run = json::object();
  std::vector<part_t> parts;
  const auto start = std::chrono::steady_clock::now();
  if (a.method == "xtrapulp") {
    if (static_cast<vid_t>(config.tasks) > g.num_vertices()) {
      throw ConfigError("task count exceeds vertex count");
    }
    const auto dist = config.distribution == DistKind::Block
                          ? Distribution::block(g.num_vertices(), config.tasks)
                          : Distribution::random_hash(g.num_vertices(), config.tasks, config.seed);
    const auto graphs = distribute(g, dist);
    Partitioner partitioner(graphs, config);
    std::unique_ptr<std::ofstream> trace;
    if (!a.trace.empty()) {
      trace = std::make_unique<std::ofstream>(a.trace);
      if (!*trace) throw InputError("cannot open '" + a.trace + "' for writing");
      partitioner.runtime().set_trace(trace.get());
    }
    partitioner.run();
    parts = partitioner.gather();
    run["supersteps"] = partitioner.runtime().supersteps();
    run["moves"] = partitioner.total_moves();
  } else if (a.method == "random") {
    parts = random_partition(g.num_vertices(), config.parts, config.seed);
  } else if (a.method == "vblock") {
    parts = vertex_block_partition(g.num_vertices(), config.parts);
  } else if (a.method == "eblock") {
    parts = edge_block_partition(g, config.parts);
  } else {
    throw ConfigError("unknown method '" + a.method + "'");
  }
  run["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  QualityReport q = evaluate(g, parts, config.parts);
  q.metadata = {{"graph", a.input},
                {"method", a.method},
                {"init", a.init},
                {"multigraph", !a.dedup},
                {"config", config_json(config)}};

  const json manifest = {{"tool", "xpulp"},
                         {"version", kToolVersion},
                         {"timestamp", timestamp_utc()},
                         {"command", "partition"},
                         {"input", a.input},
                         {"method", a.method},
                         {"config", config_json(config)},
                         {"outputs", {{"partition", a.output}, {"report", a.report},
                                      {"mapping", a.mapping}}},
                         {"args", resolved_args(a, config)}};

  if (!a.output.empty()) {
    Sink sink(a.output, out);
    write_partition(*sink, parts);
  }
  if (!a.mapping.empty()) {
    Sink sink(a.mapping, out);
    for (vid_t v = 0; v < loaded.original_ids.size(); ++v) {
      *sink << v << ' ' << loaded.original_ids[v] << '\n';
    }
  }
  if (!a.manifest.empty()) {
    Sink sink(a.manifest, out);
    *sink << manifest.dump(2) << '\n';
  }
  const json report = {{"schema_version", kReportSchemaVersion},
                       {"quality", to_json(q)},
                       {"run", run},
                       {"manifest", manifest}};
  if (!a.report.empty()) {
    Sink sink(a.report, out);
    *sink << report.dump(2) << '\n';
  } else {
    out << "edge_cut " << q.edge_cut << " cut_ratio " << q.cut_ratio << " vertex_imbalance "
        << q.vertex_imbalance << " edge_imbalance " << q.edge_imbalance << '\n';
  }

  if (a.strict) {
    constexpr double eps = 1e-12;
    const bool bad_v = q.vertex_imbalance > 1.0 + config.vert_imbalance + eps;
    const bool bad_e = q.edge_imbalance > 1.0 + config.edge_imbalance + eps;
    if (bad_v || bad_e) {
      err << "constraint violated: vertex_imbalance " << q.vertex_imbalance << " (limit "
          << 1.0 + config.vert_imbalance << "), edge_imbalance " << q.edge_imbalance << " (limit "
          << 1.0 + config.edge_imbalance << ")\n";
      return kExitStrict;
    }
  }
  return kExitOk;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GenSpec spec;
  spec.kind = parse_gen_kind(a.kind);
  if (a.scale >= 0 && a.n != 0) throw ConfigError("give either --scale or --n, not both");
  if (a.scale >= 0) {
    if (a.scale > 40) throw ConfigError("--scale too large");
    spec.n = vid_t{1} << a.scale;
  } else if (a.n != 0) {
    spec.n = a.n;
  } else {
    throw ConfigError("one of --scale or --n is required");
  }
  spec.d_avg = a.d_avg;
  spec.seed = a.seed;
  spec.a = a.a;
  spec.b = a.b;
  spec.c = a.c;
  spec.d = a.d;
  const EdgeList edges = generate(spec, a.workers);
  Sink sink(a.output.empty() ? "-" : a.output, out);
  write_edge_list(*sink, edges);
  return kExitOk;
}

double metric_value(const QualityReport& q, const std::string& metric) {
  if (metric == "edge_cut") return static_cast<double>(q.edge_cut);
  if (metric == "cut_ratio") return q.cut_ratio;
  if (metric == "max_part_cut") return static_cast<double>(q.max_part_cut);
  if (metric == "scaled_max_cut") return q.scaled_max_cut;
  throw ConfigError("unknown metric '" + metric + "'");
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.names.empty() && a.names.size() != a.partitions.size()) {
    throw ConfigError("--names needs one entry per --parts file");
  }
  const auto loaded = read_edge_list_file(a.input);
  const GlobalGraph g = build_csr(loaded.edges, loaded.num_vertices, a.dedup);

  ComparisonTable table;
  table.graphs = {a.input};
  table.values.resize(1);
  json entries = json::array();
  for (std::size_t i = 0; i < a.partitions.size(); ++i) {
    const auto parts = read_partition_file(a.partitions[i]);
    if (parts.size() != g.num_vertices()) {
      throw InputError("'" + a.partitions[i] + "' has " + std::to_string(parts.size()) +
                       " lines, graph has " + std::to_string(g.num_vertices()) + " vertices");
    }
    part_t p = a.parts;
    if (p == 0) p = parts.empty() ? 1 : *std::max_element(parts.begin(), parts.end()) + 1;
    QualityReport q = evaluate(g, parts, p);
    q.metadata = {{"graph", a.input}, {"partition", a.partitions[i]}, {"multigraph", !a.dedup}};
    const std::string name = a.names.empty() ? a.partitions[i] : a.names[i];
    table.methods.push_back(name);
    table.values[0].push_back(metric_value(q, a.metric));
    entries.push_back({{"name", name}, {"quality", to_json(q)}});
  }

  const auto ratios = performance_ratio(table);
  for (const auto& w : ratios.warnings) err << "warning: " << w << '\n';
  json ratio_json = json::object();
  for (std::size_t i = 0; i < table.methods.size(); ++i) {
    ratio_json[table.methods[i]] = ratios.ratio[i];
  }
  const json report = {{"schema_version", kReportSchemaVersion},
                       {"metric", a.metric},
                       {"partitions", entries},
                       {"performance_ratio", ratio_json}};
  if (!a.report.empty()) {
    Sink sink(a.report, out);
    *sink << report.dump(2) << '\n';
  }
  if (!a.csv.empty()) {
    Sink sink(a.csv, out);
    write_comparison_csv(*sink, table, ratios);
  }
  return kExitOk;
}

int cmd_rerun(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  const json& manifest = doc.contains("manifest") ? doc["manifest"] : doc;
  if (!manifest.contains("args") || !manifest["args"].is_array()) {
    throw InputError(path + ": no manifest args");
  }
  const auto args = manifest["args"].get<std::vector<std::string>>();
  if (args.empty() || args.front() == "rerun") throw InputError(path + ": bad manifest args");
  return run_cli(args, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Label-propagation graph partitioner", "xpulp"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  PartitionArgs pa;
  auto* part = app.add_subcommand("partition", "Partition a graph");
  const auto env = [](CLI::Option* opt, const std::string& flag) { opt->envname(env_name(flag)); };
  env(part->add_option("-i,--input", pa.input, "Edge list file")->required(), "input");
  env(part->add_option("-p,--parts", pa.parts, "Number of parts")->capture_default_str(), "parts");
  env(part->add_option("-T,--tasks", pa.tasks, "Simulated tasks (default: hardware threads)"),
      "tasks");
  env(part->add_option("--vert-imb", pa.vert_imb, "Vertex imbalance ratio")->capture_default_str(),
      "vert-imb");
  env(part->add_option("--edge-imb", pa.edge_imb, "Edge imbalance ratio")->capture_default_str(),
      "edge-imb");
  env(part->add_option("-X", pa.x, "Multiplier end point")->capture_default_str(), "x");
  env(part->add_option("-Y", pa.y, "Multiplier start point")->capture_default_str(), "y");
  env(part->add_option("--iters", pa.iters, "outer,bal,ref")->capture_default_str(), "iters");
  env(part->add_option("--seed", pa.seed, "Random seed")->capture_default_str(), "seed");
  env(part->add_option("--method", pa.method)
          ->check(CLI::IsMember({"xtrapulp", "random", "vblock", "eblock"}))
          ->capture_default_str(),
      "method");
  env(part->add_option("--init", pa.init)
          ->check(CLI::IsMember({"bfs-lp", "random", "block"}))
          ->capture_default_str(),
      "init");
  env(part->add_option("--dist", pa.dist)
          ->check(CLI::IsMember({"block", "random"}))
          ->capture_default_str(),
      "dist");
  env(part->add_flag("--dedup", pa.dedup, "Drop duplicate edges"), "dedup");
  env(part->add_flag("--strict", pa.strict, "Exit 3 when a balance constraint is exceeded"),
      "strict");
  env(part->add_flag("--sequential", pa.sequential, "Run tasks round-robin on one thread"),
      "sequential");
  env(part->add_option("-o,--output", pa.output, "Partition file ('-' for stdout)"), "output");
  env(part->add_option("--report", pa.report, "JSON report ('-' for stdout)"), "report");
  part->add_option("--mapping", pa.mapping, "Write 'dense original' ID pairs");
  part->add_option("--trace", pa.trace, "Write exchange trace as JSON lines");
  part->add_option("--manifest", pa.manifest, "Write the run manifest");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic edge list");
  gen->add_option("kind", ga.kind, "rmat | er | randhd")
      ->required()
      ->check(CLI::IsMember({"rmat", "er", "randhd"}));
  env(gen->add_option("--scale", ga.scale, "log2 of the vertex count"), "scale");
  env(gen->add_option("--n", ga.n, "Vertex count"), "n");
  env(gen->add_option("--davg", ga.d_avg, "Average degree")->capture_default_str(), "davg");
  env(gen->add_option("--seed", ga.seed)->capture_default_str(), "seed");
  gen->add_option("--a", ga.a)->capture_default_str();
  gen->add_option("--b", ga.b)->capture_default_str();
  gen->add_option("--c", ga.c)->capture_default_str();
  gen->add_option("--d", ga.d)->capture_default_str();
  gen->add_option("--workers", ga.workers, "Generator threads")->capture_default_str();
  env(gen->add_option("-o,--output", ga.output, "Output file (default stdout)"), "output");

  EvaluateArgs ea;
  auto* eval = app.add_subcommand("evaluate", "Score one or more partitions of a graph");
  eval->add_option("-i,--input", ea.input, "Edge list file")->required();
  eval->add_option("--parts", ea.partitions, "Partition file (repeatable)")->required();
  eval->add_option("--names", ea.names, "Method name per partition file");
  eval->add_option("-p,--num-parts", ea.parts, "Part count (default: max label + 1)");
  eval->add_flag("--dedup", ea.dedup, "Drop duplicate edges");
  eval->add_option("--metric", ea.metric, "Metric for performance ratios")
      ->check(CLI::IsMember({"edge_cut", "cut_ratio", "max_part_cut", "scaled_max_cut"}))
      ->capture_default_str();
  eval->add_option("--report", ea.report, "JSON report ('-' for stdout)")->capture_default_str();
  eval->add_option("--csv", ea.csv, "Comparison table as CSV");

  std::string rerun_path;
  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest or report");
  rerun->add_option("manifest", rerun_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (part->parsed()) return cmd_partition(pa, out, err);
    if (gen->parsed()) return cmd_generate(ga, out);
    if (eval->parsed()) return cmd_evaluate(ea, out, err);
    if (rerun->parsed()) return cmd_rerun(rerun_path, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace xtrapulp
