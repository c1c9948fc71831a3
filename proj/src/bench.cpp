#include "wshift/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "wshift/clustering.hpp"
#include "wshift/evaluation.hpp"
#include "wshift/io.hpp"

namespace wshift {

namespace {

const std::vector<std::string> kKnownAlgorithms{"wms", "median-shift-cumulative", "mean-shift",
                                                "kmws", "dbscan-ws"};

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string t; in >> t;)
    out.push_back(t);
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& token) {
  T v{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw Error(Errc::InvalidConfig, key + ": cannot parse '" + token + "'");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::vector<std::string>& values) {
  if (values.empty())
    throw Error(Errc::InvalidConfig, key + ": needs at least one value");
  std::vector<T> out;
  for (const auto& t : values)
    out.push_back(parse_number<T>(key, t));
  return out;
}

template <typename T>
T parse_one(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1)
    throw Error(Errc::InvalidConfig, key + ": expects exactly one value");
  return parse_number<T>(key, values.front());
}

Interval parse_interval(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 2)
    throw Error(Errc::InvalidConfig, key + ": expects two values");
  return Interval{parse_number<double>(key, values[0]), parse_number<double>(key, values[1])};
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (const auto& v : values) {
    if (!s.empty())
      s += ' ';
    if constexpr (std::is_same_v<T, double>)
      s += shortest(v);
    else if constexpr (std::is_same_v<T, std::string>)
      s += v;
    else
      s += std::to_string(v);
  }
  return s;
}

std::vector<Vector> scaled_cumulatives(const PointCloud& cloud, double width) {
  std::vector<Vector> out;
  for (const auto& p : cloud.points()) {
    Vector z = cumul(Histogram::from_bins(p)).vector();
    for (auto& v : z)
      v *= width;
    out.push_back(std::move(z));
  }
  return out;
}

BenchRow timed(std::string algorithm, std::string params,
               const std::function<void(BenchRow&)>& body) {
  BenchRow row;
  row.algorithm = std::move(algorithm);
  row.params = std::move(params);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(row);
  } catch (const std::exception& e) {
    row.ari.reset();
    row.error = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

} // namespace

void BenchConfig::validate() const {
  dataset.validate();
  for (const auto& a : algorithms)
    if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(), a) == kKnownAlgorithms.end())
      throw Error(Errc::InvalidConfig, "unknown algorithm '" + a + "'");
  for (const auto* grid : {&wms_h, &median_shift_cumulative_h, &mean_shift_h, &dbscan_eps})
    for (double v : *grid)
      if (!(v > 0.0))
        throw Error(Errc::InvalidConfig, "bandwidths and eps must be positive");
  for (auto k : kmws_k)
    if (k < 1)
      throw Error(Errc::InvalidConfig, "kmws.k must be positive");
  for (auto m : dbscan_min_pts)
    if (m < 1)
      throw Error(Errc::InvalidConfig, "dbscan_ws.min_pts must be positive");
  if (kmws_restarts < 1 || kmws_max_iterations < 1 || max_iterations < 1)
    throw Error(Errc::InvalidConfig, "restart and iteration counts must be positive");
  if (!(merge_ratio > 0.0))
    throw Error(Errc::InvalidConfig, "merge_ratio must be positive");
}

BenchConfig parse_bench_config(std::string_view text) {
  BenchConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    const auto key_tokens = tokens(line.substr(0, eq));
    if (key_tokens.size() != 1)
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": bad key");
    const std::string& key = key_tokens.front();
    const auto values = tokens(line.substr(eq + 1));

    if (key == "dataset.seed") c.dataset.rng_seed = parse_one<std::uint64_t>(key, values);
    else if (key == "dataset.per_class") c.dataset.per_class = parse_one<std::size_t>(key, values);
    else if (key == "dataset.samples_per_histogram")
      c.dataset.samples_per_histogram = parse_one<std::size_t>(key, values);
    else if (key == "dataset.bins") c.dataset.bins = parse_one<std::size_t>(key, values);
    else if (key == "dataset.range") c.dataset.bin_range = parse_interval(key, values);
    else if (key == "dataset.class1_mean_range")
      c.dataset.class1_mean_range = parse_interval(key, values);
    else if (key == "dataset.class2_secondary_mean_range")
      c.dataset.class2_secondary_mean_range = parse_interval(key, values);
    else if (key == "dataset.mixture_weights") {
      const auto w = parse_interval(key, values);
      c.dataset.primary_weight = w.lo;
      c.dataset.secondary_weight = w.hi;
    } else if (key == "dataset.sigma") c.dataset.sigma = parse_one<double>(key, values);
    else if (key == "algorithms") {
      if (values.empty())
        throw Error(Errc::InvalidConfig, "algorithms: needs at least one value");
      c.algorithms = values;
    } else if (key == "wms.h") c.wms_h = parse_list<double>(key, values);
    else if (key == "median_shift_cumulative.h")
      c.median_shift_cumulative_h = parse_list<double>(key, values);
    else if (key == "mean_shift.h") c.mean_shift_h = parse_list<double>(key, values);
    else if (key == "kmws.k") c.kmws_k = parse_list<std::size_t>(key, values);
    else if (key == "kmws.restarts") c.kmws_restarts = parse_one<std::size_t>(key, values);
    else if (key == "kmws.seed") c.kmws_seed = parse_one<std::uint64_t>(key, values);
    else if (key == "kmws.max_iterations")
      c.kmws_max_iterations = parse_one<std::size_t>(key, values);
    else if (key == "dbscan_ws.eps") c.dbscan_eps = parse_list<double>(key, values);
    else if (key == "dbscan_ws.min_pts") c.dbscan_min_pts = parse_list<std::size_t>(key, values);
    else if (key == "merge_ratio") c.merge_ratio = parse_one<double>(key, values);
    else if (key == "max_iterations") c.max_iterations = parse_one<std::size_t>(key, values);
    else
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

std::string render_bench_config(const BenchConfig& c) {
  const auto& d = c.dataset;
  std::ostringstream s;
  s << "# dataset\n"
    << "dataset.seed = " << d.rng_seed << '\n'
    << "dataset.per_class = " << d.per_class << '\n'
    << "dataset.samples_per_histogram = " << d.samples_per_histogram << '\n'
    << "dataset.bins = " << d.bins << '\n'
    << "dataset.range = " << shortest(d.bin_range.lo) << ' ' << shortest(d.bin_range.hi) << '\n'
    << "dataset.class1_mean_range = " << shortest(d.class1_mean_range.lo) << ' '
    << shortest(d.class1_mean_range.hi) << '\n'
    << "dataset.class2_secondary_mean_range = " << shortest(d.class2_secondary_mean_range.lo)
    << ' ' << shortest(d.class2_secondary_mean_range.hi) << '\n'
    << "dataset.mixture_weights = " << shortest(d.primary_weight) << ' '
    << shortest(d.secondary_weight) << '\n'
    << "dataset.sigma = " << shortest(d.sigma) << '\n'
    << "\n# algorithms and grids\n"
    << "algorithms = " << join(c.algorithms) << '\n'
    << "wms.h = " << join(c.wms_h) << '\n'
    << "median_shift_cumulative.h = " << join(c.median_shift_cumulative_h) << '\n'
    << "mean_shift.h = " << join(c.mean_shift_h) << '\n'
    << "kmws.k = " << join(c.kmws_k) << '\n'
    << "kmws.restarts = " << c.kmws_restarts << '\n'
    << "kmws.seed = " << c.kmws_seed << '\n'
    << "kmws.max_iterations = " << c.kmws_max_iterations << '\n'
    << "dbscan_ws.eps = " << join(c.dbscan_eps) << '\n'
    << "dbscan_ws.min_pts = " << join(c.dbscan_min_pts) << '\n'
    << "merge_ratio = " << shortest(c.merge_ratio) << '\n'
    << "max_iterations = " << c.max_iterations << '\n';
  return s.str();
}

std::optional<double> BenchReport::best_ari(std::string_view algorithm) const {
  std::optional<double> best;
  for (const auto& r : rows)
    if (r.algorithm == algorithm && r.ari && (!best || *r.ari > *best))
      best = r.ari;
  return best;
}

BenchReport run_bench(const BenchConfig& config, const LabeledDataset& data,
                      std::size_t threads) {
  config.validate();
  BenchReport report;
  report.dataset = data.provenance;
  const double width = data.provenance.bin_width();
  const auto& truth = data.labels;
  const ClusterOptions options{threads, false};

  auto score = [&truth](BenchRow& row, const std::vector<int>& labels) {
    row.ari = adjusted_rand_index(labels, truth).value;
    row.clusters = count_clusters(labels);
  };
  auto engine = [&](DistanceKind kind, double h) {
    EngineConfig e;
    e.kernel = KernelSpec(h);
    e.distance = kind;
    e.max_iterations = config.max_iterations;
    e.bin_width = width;
    return e;
  };

  for (const auto& algo : config.algorithms) {
    if (algo == "wms") {
      for (double h : config.wms_h)
        report.rows.push_back(timed(algo, "h=" + shortest(h), [&](BenchRow& row) {
          const auto r = cluster_dataset(data.cloud, Algorithm::WMS,
                                         engine(DistanceKind::Wasserstein1, h),
                                         MergePolicy{h * config.merge_ratio}, options);
          score(row, r.labels);
        }));
    } else if (algo == "median-shift-cumulative") {
      const PointCloud cumulated(scaled_cumulatives(data.cloud, width));
      for (double h : config.median_shift_cumulative_h)
        report.rows.push_back(timed(algo, "h=" + shortest(h), [&](BenchRow& row) {
          const auto r = cluster_dataset(cumulated, Algorithm::MedianShift,
                                         engine(DistanceKind::L1, h),
                                         MergePolicy{h * config.merge_ratio}, options);
          score(row, r.labels);
        }));
    } else if (algo == "mean-shift") {
      for (double h : config.mean_shift_h)
        report.rows.push_back(timed(algo, "h=" + shortest(h), [&](BenchRow& row) {
          const auto r = cluster_dataset(data.cloud, Algorithm::MeanShift,
                                         engine(DistanceKind::SquaredEuclidean, h),
                                         MergePolicy{h * config.merge_ratio}, options);
          score(row, r.labels);
        }));
    } else if (algo == "kmws") {
      for (auto k : config.kmws_k)
        report.rows.push_back(timed(
            algo, "k=" + std::to_string(k) + ";restarts=" + std::to_string(config.kmws_restarts),
            [&](BenchRow& row) {
              std::vector<double> scores;
              for (std::size_t r = 0; r < config.kmws_restarts; ++r) {
                const auto res = kmeans_wasserstein(data.cloud, k, config.kmws_seed + r,
                                                    config.kmws_max_iterations, width);
                scores.push_back(adjusted_rand_index(res.labels, truth).value);
                row.clusters = std::max(row.clusters, count_clusters(res.labels));
              }
              double mean = 0.0;
              for (double s : scores)
                mean += s;
              mean /= static_cast<double>(scores.size());
              double var = 0.0;
              for (double s : scores)
                var += (s - mean) * (s - mean);
              row.ari = mean;
              row.ari_std = std::sqrt(var / static_cast<double>(scores.size()));
            }));
    } else if (algo == "dbscan-ws") {
      for (double eps : config.dbscan_eps)
        for (auto m : config.dbscan_min_pts)
          report.rows.push_back(
              timed(algo, "eps=" + shortest(eps) + ";min_pts=" + std::to_string(m),
                    [&](BenchRow& row) {
                      score(row, dbscan_wasserstein(data.cloud, eps, m, width).labels);
                    }));
    }
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::string s = "algorithm,params,ari,seconds\n";
  for (const auto& r : report.rows) {
    s += r.algorithm + ',' + r.params + ',';
    if (r.ari)
      s += io::format_double(*r.ari);
    s += ',' + io::format_double(r.seconds) + '\n';
  }
  return s;
}

std::string render_table(const BenchReport& report) {
  std::string s;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-26s %-16s %8s %9s\n", "algorithm", "params", "ari",
                "clusters", "seconds");
  s += line;
  s += std::string(87, '-') + '\n';
  for (const auto& r : report.rows) {
    char ari[48];
    if (!r.ari)
      std::snprintf(ari, sizeof ari, "error");
    else if (r.ari_std > 0.0)
      std::snprintf(ari, sizeof ari, "%.3f +- %.3f", *r.ari, r.ari_std);
    else
      std::snprintf(ari, sizeof ari, "%.3f", *r.ari);
    std::snprintf(line, sizeof line, "%-24s %-26s %-16s %8zu %9.3f\n", r.algorithm.c_str(),
                  r.params.c_str(), ari, r.clusters, r.seconds);
    s += line;
    if (!r.ari)
      s += "    " + r.error + '\n';
  }
  return s;
}

} // namespace wshift
