#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wshift/datagen.hpp"

namespace wshift {

/// Declarative benchmark: a synthetic dataset plus one parameter grid per algorithm.
///
/// Text format, one `key = value...` per line, `#` starts a comment:
///
///     dataset.seed = 42
///     dataset.per_class = 50
///     dataset.samples_per_histogram = 100
///     dataset.bins = 100
///     dataset.range = 0 1
///     dataset.class1_mean_range = 0.47 0.53
///     dataset.class2_secondary_mean_range = 0.17 0.23
///     dataset.mixture_weights = 0.8 0.2
///     dataset.sigma = 0.02
///     algorithms = wms median-shift-cumulative mean-shift kmws dbscan-ws
///     wms.h = 0.02 0.05 0.1 0.2
///     ...
///
/// Wasserstein bandwidths and eps are in data units (bin spacing is
/// range width / bins). Mean-shift bandwidths bound the squared Euclidean
/// distance between raw histogram vectors.
struct BenchConfig {
  SynthConfig dataset{};
  std::vector<std::string> algorithms{"wms", "median-shift-cumulative", "mean-shift", "kmws",
                                      "dbscan-ws"};
  std::vector<double> wms_h{0.02, 0.05, 0.1, 0.2};
  std::vector<double> median_shift_cumulative_h{0.02, 0.05, 0.1, 0.2};
  std::vector<double> mean_shift_h{0.02, 0.05, 0.1, 0.2};
  std::vector<std::size_t> kmws_k{2};
  std::size_t kmws_restarts = 100;
  std::uint64_t kmws_seed = 0;
  std::size_t kmws_max_iterations = 100;
  std::vector<double> dbscan_eps{0.01, 0.02, 0.03, 0.04, 0.05};
  std::vector<std::size_t> dbscan_min_pts{3, 5, 10};
  /// Mode merge radius as a fraction of the bandwidth.
  double merge_ratio = 0.5;
  std::size_t max_iterations = 1000;

  void validate() const;
};

BenchConfig parse_bench_config(std::string_view text);
/// The defaults rendered in the text format above.
std::string render_bench_config(const BenchConfig& config);

struct BenchRow {
  std::string algorithm;
  std::string params;
  /// Empty when the run failed; `error` then holds the message.
  std::optional<double> ari;
  /// Spread over restarts (KMWS), 0 otherwise.
  double ari_std = 0.0;
  std::size_t clusters = 0;
  double seconds = 0.0;
  std::string error;
};

struct BenchReport {
  SynthConfig dataset;
  std::vector<BenchRow> rows;

  /// Highest ARI among the rows of `algorithm`, if any succeeded.
  std::optional<double> best_ari(std::string_view algorithm) const;
};

BenchReport run_bench(const BenchConfig& config, const LabeledDataset& data,
                      std::size_t threads = 1);

/// Columns algorithm,params,ari,seconds.
std::string report_csv(const BenchReport& report);
std::string render_table(const BenchReport& report);

} // namespace wshift
