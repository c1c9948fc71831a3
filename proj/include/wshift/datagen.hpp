#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wshift/core.hpp"

namespace wshift {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  bool contains(const Interval& other) const noexcept {
    return other.lo >= lo && other.hi <= hi;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Two classes of empirical histograms: Class 1 draws from one Gaussian,
/// Class 2 from a two-component mixture whose first component matches Class 1.
struct SynthConfig {
  std::size_t per_class = 50;
  std::size_t samples_per_histogram = 100;
  std::size_t bins = 100;
  Interval bin_range{0.0, 1.0};
  Interval class1_mean_range{0.47, 0.53};
  Interval class2_secondary_mean_range{0.17, 0.23};
  double primary_weight = 0.8;
  double secondary_weight = 0.2;
  double sigma = 0.02;
  std::uint64_t rng_seed = 42;

  void validate() const;
  /// Spacing between adjacent bins in data units.
  double bin_width() const noexcept { return bin_range.width() / static_cast<double>(bins); }
  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

struct LabeledDataset {
  PointCloud cloud;
  /// 0 = Class 1, 1 = Class 2.
  std::vector<int> labels;
  SynthConfig provenance;
};

/// Fully determined by config.rng_seed (std::mt19937_64 stream). Class 1
/// histograms come first, then Class 2.
LabeledDataset gen_synthetic(const SynthConfig& config);

/// Bin index of `value` on a uniform grid over `range`. Bins are half-open
/// except the last; values outside the range clamp to the end bins.
std::size_t bin_index(double value, std::size_t bins, const Interval& range);

Histogram series_to_histogram(std::span<const double> series, std::size_t bins,
                              const Interval& range);

/// Reads one real per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_series_file(const std::filesystem::path& path);

struct IngestedSeries {
  std::vector<std::string> sources;
  std::vector<Histogram> histograms;
};

/// Maps every regular file of `directory` (sorted by file name) to one histogram.
IngestedSeries ingest_directory(const std::filesystem::path& directory, std::size_t bins,
                                const Interval& range);

} // namespace wshift
