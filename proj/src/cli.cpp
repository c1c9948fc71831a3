#include "wshift/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "wshift/bench.hpp"
#include "wshift/clustering.hpp"
#include "wshift/datagen.hpp"
#include "wshift/evaluation.hpp"
#include "wshift/io.hpp"

namespace wshift::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ExitCode exit_code_for(Errc code) noexcept {
  switch (code) {
  case Errc::ParseError: return ExitCode::ParseError;
  case Errc::InvalidConfig:
  case Errc::KTooLarge: return ExitCode::InvalidConfig;
  case Errc::MissingParameter: return ExitCode::MissingParameter;
  case Errc::IoError: return ExitCode::IoError;
  case Errc::LengthMismatch:
  case Errc::TooFewPoints: return ExitCode::LengthMismatch;
  default: return ExitCode::EngineFailure;
  }
}

namespace {

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  std::optional<fs::path> out_dir;
};

json interval_json(const Interval& r) { return json::array({r.lo, r.hi}); }

json synth_json(const SynthConfig& c) {
  return json{{"per_class", c.per_class},
              {"samples_per_histogram", c.samples_per_histogram},
              {"bins", c.bins},
              {"bin_range", interval_json(c.bin_range)},
              {"class1_mean_range", interval_json(c.class1_mean_range)},
              {"class2_secondary_mean_range", interval_json(c.class2_secondary_mean_range)},
              {"mixture_weights", json::array({c.primary_weight, c.secondary_weight})},
              {"sigma", c.sigma},
              {"rng_seed", c.rng_seed},
              {"generator", "std::mt19937_64"}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(Errc::IoError, "cannot create directory " + dir.string());
}

template <typename T>
const T& require(const std::optional<T>& value, const char* flag) {
  if (!value)
    throw Error(Errc::MissingParameter, std::string(flag) + " is required");
  return *value;
}

Interval to_interval(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2)
    throw Error(Errc::InvalidConfig, std::string(flag) + " expects two values");
  return Interval{v[0], v[1]};
}

class ManifestWriter {
public:
  ManifestWriter(const Context& ctx, std::string command)
      : start_(std::chrono::steady_clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["args"] = ctx.args;
    manifest_["tool_version"] = kToolVersion;
  }

  json& operator[](const char* key) { return manifest_[key]; }

  void write(const fs::path& dir) {
    manifest_["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_text(dir / "manifest.json", manifest_.dump(2) + "\n");
  }

private:
  std::chrono::steady_clock::time_point start_;
  json manifest_;
};

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::size_t per_class = 50;
  std::size_t samples = 100;
  std::size_t bins = 100;
  std::vector<double> range{0.0, 1.0};
  std::vector<double> class1_mean_range{0.47, 0.53};
  std::vector<double> class2_mean_range{0.17, 0.23};
  std::vector<double> weights{0.8, 0.2};
  double sigma = 0.02;
  std::uint64_t seed = 42;
  std::optional<std::string> out;
};

void cmd_generate(Context& ctx, const GenerateArgs& a) {
  const fs::path dir = require(a.out, "--out");
  ctx.out_dir = dir;
  ManifestWriter manifest(ctx, "generate");
  SynthConfig c;
  c.per_class = a.per_class;
  c.samples_per_histogram = a.samples;
  c.bins = a.bins;
  c.bin_range = to_interval(a.range, "--range");
  c.class1_mean_range = to_interval(a.class1_mean_range, "--class1-mean-range");
  c.class2_secondary_mean_range = to_interval(a.class2_mean_range, "--class2-mean-range");
  const Interval w = to_interval(a.weights, "--weights");
  c.primary_weight = w.lo;
  c.secondary_weight = w.hi;
  c.sigma = a.sigma;
  c.rng_seed = a.seed;
  c.validate();

  const LabeledDataset data = gen_synthetic(c);
  ensure_dir(dir);
  io::write_matrix_csv(dir / "histograms.csv", data.cloud.points());
  io::write_labels_csv(dir / "labels.csv", data.labels);
  manifest["config"] = synth_json(c);
  manifest["seeds"] = json{{"rng_seed", c.rng_seed}};
  manifest["outputs"] = json::array({(dir / "histograms.csv").string(),
                                     (dir / "labels.csv").string()});
  manifest.write(dir);
  ctx.out << "wrote " << data.cloud.size() << " histograms x " << c.bins << " bins to "
          << dir.string() << '\n';
}

// --- ingest ------------------------------------------------------------------

struct IngestArgs {
  std::optional<std::string> in;
  std::optional<std::string> out;
  std::size_t bins = 100;
  std::vector<double> range;
};

void cmd_ingest(Context& ctx, const IngestArgs& a) {
  const fs::path dir = require(a.out, "--out");
  ctx.out_dir = dir;
  const fs::path src = require(a.in, "--in");
  ManifestWriter manifest(ctx, "ingest");
  if (a.bins < 1)
    throw Error(Errc::InvalidConfig, "--bins must be positive");

  std::error_code ec;
  if (!fs::is_directory(src, ec))
    throw Error(Errc::IoError, src.string() + " is not a directory");
  Interval range;
  if (!a.range.empty()) {
    range = to_interval(a.range, "--range");
  } else {
    // Shared support spanning every series so all histograms use one grid.
    bool any = false;
    for (const auto& entry : fs::directory_iterator(src)) {
      if (!entry.is_regular_file())
        continue;
      for (double v : read_series_file(entry.path())) {
        range.lo = any ? std::min(range.lo, v) : v;
        range.hi = any ? std::max(range.hi, v) : v;
        any = true;
      }
    }
    if (!any)
      throw Error(Errc::EmptySeries, "no values found under " + src.string());
  }
  if (!(range.lo < range.hi))
    throw Error(Errc::EmptyRange, "histogram range is empty");

  const IngestedSeries series = ingest_directory(src, a.bins, range);
  ensure_dir(dir);
  std::vector<Vector> rows;
  for (const auto& h : series.histograms)
    rows.push_back(h.vector());
  io::write_matrix_csv(dir / "histograms.csv", rows);
  std::string sources = "file\n";
  for (const auto& s : series.sources)
    sources += s + '\n';
  io::write_text(dir / "sources.csv", sources);
  manifest["config"] = json{{"bins", a.bins}, {"range", interval_json(range)}};
  manifest["inputs"] = json::array({src.string()});
  manifest["outputs"] = json::array({(dir / "histograms.csv").string(),
                                     (dir / "sources.csv").string()});
  manifest.write(dir);
  ctx.out << "ingested " << rows.size() << " series from " << src.string() << '\n';
}

// --- cluster -----------------------------------------------------------------

struct ClusterArgs {
  std::optional<std::string> algo;
  std::optional<std::string> in;
  std::optional<std::string> out;
  std::optional<double> h;
  std::optional<std::size_t> k;
  std::optional<double> eps;
  std::optional<std::size_t> min_pts;
  std::optional<double> merge_radius;
  std::optional<double> bin_width;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iter;
  std::size_t threads = 1;
};

json engine_json(const EngineConfig& e) {
  return json{{"bandwidth", e.kernel.bandwidth},
              {"profile", "triangular"},
              {"max_iterations", e.max_iterations},
              {"mean_shift_epsilon", e.mean_shift_epsilon},
              {"bin_width", e.bin_width}};
}

void cmd_cluster(Context& ctx, const ClusterArgs& a) {
  const fs::path dir = require(a.out, "--out");
  ctx.out_dir = dir;
  const std::string& algo = require(a.algo, "--algo");
  const fs::path input = require(a.in, "--in");
  ManifestWriter manifest(ctx, "cluster");

  const io::Matrix m = io::read_matrix_csv(input);
  if (m.rows.empty())
    throw Error(Errc::ParseError, input.string() + ": no data rows");
  const PointCloud cloud(m.rows);
  const double width = a.bin_width.value_or(1.0 / static_cast<double>(cloud.dimension()));
  json config{{"algorithm", algo}, {"threads", a.threads}};

  auto mode_seeking = [&](Algorithm engine, DistanceKind kind) {
    const double h = require(a.h, "--h");
    EngineConfig e;
    e.kernel = KernelSpec(h);
    e.distance = kind;
    e.bin_width = width;
    if (a.max_iter)
      e.max_iterations = *a.max_iter;
    const MergePolicy policy{a.merge_radius.value_or(h / 2.0)};
    config["engine"] = engine_json(e);
    config["merge_radius"] = policy.merge_radius;
    return cluster_dataset(cloud, engine, e, policy, ClusterOptions{a.threads, false});
  };

  ClusterResult result;
  if (algo == "wms") {
    result = mode_seeking(Algorithm::WMS, DistanceKind::Wasserstein1);
  } else if (algo == "median-shift") {
    result = mode_seeking(Algorithm::MedianShift, DistanceKind::L1);
  } else if (algo == "mean-shift") {
    result = mode_seeking(Algorithm::MeanShift, DistanceKind::SquaredEuclidean);
  } else if (algo == "kmws") {
    const std::size_t k = require(a.k, "--k");
    const std::size_t iters = a.max_iter.value_or(100);
    config.update(json{{"k", k}, {"seed", a.seed}, {"max_iterations", iters}, {"bin_width", width}});
    result = kmeans_wasserstein(cloud, k, a.seed, iters, width);
  } else if (algo == "dbscan-ws") {
    const double eps = require(a.eps, "--eps");
    const std::size_t min_pts = require(a.min_pts, "--min-pts");
    config.update(json{{"eps", eps}, {"min_pts", min_pts}, {"bin_width", width}});
    result = dbscan_wasserstein(cloud, eps, min_pts, width);
  } else {
    throw Error(Errc::InvalidConfig, "unknown algorithm '" + algo + "'");
  }

  ensure_dir(dir);
  io::write_labels_csv(dir / "labels.csv", result.labels);
  io::write_matrix_csv(dir / "modes.csv", result.modes);
  manifest["config"] = config;
  manifest["inputs"] = json::array({input.string()});
  manifest["outputs"] = json::array({(dir / "labels.csv").string(), (dir / "modes.csv").string()});
  manifest["seeds"] = json{{"rng_seed", a.seed}};
  manifest["diagnostics"] = json{{"clusters", result.cluster_count()},
                                 {"failed_seeds", result.diagnostics.failed_seeds},
                                 {"max_iteration_hits", result.diagnostics.max_iteration_hits},
                                 {"iterations", result.diagnostics.iterations},
                                 {"noise_points", result.diagnostics.noise_points},
                                 {"objective_history", result.diagnostics.objective_history}};
  manifest.write(dir);
  ctx.out << algo << ": " << result.cluster_count() << " clusters over " << cloud.size()
          << " points\n";
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::optional<std::string> pred;
  std::optional<std::string> truth;
  std::optional<std::string> out;
};

void cmd_eval(Context& ctx, const EvalArgs& a) {
  const fs::path pred_path = require(a.pred, "--pred");
  const fs::path truth_path = require(a.truth, "--truth");
  const fs::path out_path = a.out ? fs::path(*a.out) : pred_path.parent_path() / "eval.json";
  const auto pred = io::read_labels_csv(pred_path);
  const auto truth = io::read_labels_csv(truth_path);
  const double ari = adjusted_rand_index(pred, truth).value;

  char line[64];
  std::snprintf(line, sizeof line, "ari=%.6f\n", ari);
  ctx.out << line;
  const json summary{{"ari", ari},
                     {"n", pred.size()},
                     {"clusters_pred", count_clusters(pred)},
                     {"clusters_true", count_clusters(truth)}};
  io::write_text(out_path, summary.dump(2) + "\n");
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

void cmd_bench(Context& ctx, const BenchArgs& a) {
  const fs::path dir = require(a.out, "--out");
  ctx.out_dir = dir;
  ManifestWriter manifest(ctx, "bench");
  BenchConfig config = a.config ? parse_bench_config(io::read_text(*a.config)) : BenchConfig{};
  if (a.seed)
    config.dataset.rng_seed = *a.seed;
  config.validate();

  const LabeledDataset data = gen_synthetic(config.dataset);
  const BenchReport report = run_bench(config, data, a.threads);
  ensure_dir(dir);
  io::write_matrix_csv(dir / "histograms.csv", data.cloud.points());
  io::write_labels_csv(dir / "labels.csv", data.labels);
  io::write_text(dir / "bench_config.txt", render_bench_config(config));
  io::write_text(dir / "report.csv", report_csv(report));
  const std::string table = render_table(report);
  io::write_text(dir / "report.txt", table);

  manifest["config"] = json{{"dataset", synth_json(config.dataset)},
                            {"bench_config", render_bench_config(config)},
                            {"threads", a.threads}};
  if (a.config)
    manifest["inputs"] = json::array({*a.config});
  manifest["seeds"] = json{{"dataset", config.dataset.rng_seed}, {"kmws", config.kmws_seed}};
  manifest["outputs"] = json::array({(dir / "report.csv").string(), (dir / "report.txt").string(),
                                     (dir / "histograms.csv").string(),
                                     (dir / "labels.csv").string()});
  manifest.write(dir);
  ctx.out << table;
}

// --- replay ------------------------------------------------------------------

std::vector<std::string> replay_args(const fs::path& manifest_path) {
  json m;
  try {
    m = json::parse(io::read_text(manifest_path));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, manifest_path.string() + ": " + e.what());
  }
  if (!m.contains("args") || !m["args"].is_array())
    throw Error(Errc::ParseError, manifest_path.string() + ": no recorded args");
  auto args = m["args"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay")
    throw Error(Errc::InvalidConfig, "refusing to replay a replay");
  return args;
}

void report_error(Context& ctx, const std::string& name, const std::string& message,
                  ExitCode code) {
  const json e{{"error", name}, {"message", message}, {"exit_code", static_cast<int>(code)}};
  ctx.err << e.dump() << '\n';
  if (ctx.out_dir) {
    std::error_code ec;
    if (fs::is_directory(*ctx.out_dir, ec)) {
      try {
        io::write_text(*ctx.out_dir / "error.json", e.dump(2) + "\n");
      } catch (const Error&) {
      }
    }
  }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{args, out, err, std::nullopt};
  CLI::App app{"Mode-seeking clustering of histograms under the Wasserstein-1 distance", "wshift"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate the two-class synthetic histogram dataset");
  g->add_option("--per-class", gen.per_class, "Histograms per class");
  g->add_option("--samples", gen.samples, "Samples drawn per histogram");
  g->add_option("--bins", gen.bins, "Bins per histogram");
  g->add_option("--range", gen.range, "Histogram support: lo hi")->expected(2);
  g->add_option("--class1-mean-range", gen.class1_mean_range, "Class 1 mean range: lo hi")->expected(2);
  g->add_option("--class2-mean-range", gen.class2_mean_range, "Class 2 secondary mean range: lo hi")
      ->expected(2);
  g->add_option("--weights", gen.weights, "Class 2 mixture weights")->expected(2);
  g->add_option("--sigma", gen.sigma, "Standard deviation of every Gaussian");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--out", gen.out, "Output directory");

  IngestArgs ing;
  auto* i = app.add_subcommand("ingest", "Convert a directory of time series into histograms");
  i->add_option("--in", ing.in, "Directory with one series per file");
  i->add_option("--out", ing.out, "Output directory");
  i->add_option("--bins", ing.bins, "Bins per histogram");
  i->add_option("--range", ing.range, "Histogram support: lo hi (default: data extent)")->expected(2);

  ClusterArgs cl;
  auto* c = app.add_subcommand("cluster", "Cluster a histogram CSV");
  c->set_help_flag("--help", "Print this help message and exit");
  c->add_option("--algo", cl.algo, "wms | median-shift | mean-shift | kmws | dbscan-ws");
  c->add_option("--in", cl.in, "Input CSV with a header row");
  c->add_option("--out", cl.out, "Output directory");
  c->add_option("--h", cl.h, "Bandwidth (shift family)");
  c->add_option("--k", cl.k, "Number of clusters (kmws)");
  c->add_option("--eps", cl.eps, "Neighborhood radius (dbscan-ws)");
  c->add_option("--min-pts", cl.min_pts, "Core point threshold (dbscan-ws)");
  c->add_option("--merge-radius", cl.merge_radius, "Mode merge radius (default h/2)");
  c->add_option("--bin-width", cl.bin_width, "Bin spacing for W1 (default 1/bins)");
  c->add_option("--seed", cl.seed, "Initialization seed (kmws)");
  c->add_option("--max-iter", cl.max_iter, "Iteration cap");
  c->add_option("--threads", cl.threads, "Worker threads for per-seed runs (0 = all cores)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score predicted labels against ground truth (ARI)");
  e->add_option("--pred", ev.pred, "Predicted labels CSV");
  e->add_option("--truth", ev.truth, "True labels CSV");
  e->add_option("--out", ev.out, "Summary JSON path (default: eval.json next to --pred)");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Run the synthetic benchmark over parameter grids");
  b->add_option("--config", be.config, "Benchmark config file (key = value lines)");
  b->add_option("--out", be.out, "Output directory");
  b->add_option("--seed", be.seed, "Override dataset.seed");
  b->add_option("--threads", be.threads, "Worker threads for per-seed runs (0 = all cores)");

  std::optional<std::string> manifest_path;
  auto* r = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  r->add_option("--manifest", manifest_path, "manifest.json written by a previous run");

  std::vector<std::string> argv_store{"wshift"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store)
    argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (g->parsed()) cmd_generate(ctx, gen);
    else if (i->parsed()) cmd_ingest(ctx, ing);
    else if (c->parsed()) cmd_cluster(ctx, cl);
    else if (e->parsed()) cmd_eval(ctx, ev);
    else if (b->parsed()) cmd_bench(ctx, be);
    else if (r->parsed()) return run(replay_args(require(manifest_path, "--manifest")), out, err);
  } catch (const Error& ex) {
    const ExitCode code = exit_code_for(ex.code());
    report_error(ctx, std::string(errc_name(ex.code())), ex.what(), code);
    return static_cast<int>(code);
  } catch (const std::exception& ex) {
    report_error(ctx, "InternalError", ex.what(), ExitCode::EngineFailure);
    return static_cast<int>(ExitCode::EngineFailure);
  }
  return static_cast<int>(ExitCode::Ok);
}

} // namespace wshift::cli
