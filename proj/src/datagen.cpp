#include "wshift/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>

namespace wshift {

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
  if (per_class < 1)
    fail("per_class must be positive");
  if (samples_per_histogram < 1)
    fail("samples_per_histogram must be positive");
  if (bins < 1)
    fail("bins must be positive");
  if (!(bin_range.lo < bin_range.hi))
    fail("bin_range must be a nonempty interval");
  for (const auto* r : {&class1_mean_range, &class2_secondary_mean_range}) {
    if (!(r->lo <= r->hi))
      fail("mean ranges must be nonempty");
    if (!bin_range.contains(*r))
      fail("mean ranges must lie inside bin_range");
  }
  if (!(primary_weight > 0.0) || !(secondary_weight > 0.0) ||
      std::abs(primary_weight + secondary_weight - 1.0) > 1e-12)
    fail("mixture weights must be positive and sum to 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail("sigma must be positive");
}

std::size_t bin_index(double value, std::size_t bins, const Interval& range) {
  const double scaled = (value - range.lo) / range.width() * static_cast<double>(bins);
  if (!(scaled >= 0.0))
    return 0;
  if (scaled >= static_cast<double>(bins))
    return bins - 1;
  return static_cast<std::size_t>(scaled);
}

namespace {

double uniform_in(std::mt19937_64& rng, const Interval& r) {
  if (r.lo == r.hi)
    return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

Histogram counts_to_histogram(const std::vector<std::size_t>& counts, std::size_t total) {
  Vector bins(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    bins[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  return Histogram::from_bins(std::move(bins));
}

} // namespace

LabeledDataset gen_synthetic(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  std::vector<Histogram> histograms;
  std::vector<int> labels;
  histograms.reserve(2 * config.per_class);

  for (int cls = 0; cls < 2; ++cls) {
    for (std::size_t h = 0; h < config.per_class; ++h) {
      const double primary = uniform_in(rng, config.class1_mean_range);
      const double secondary = cls == 1 ? uniform_in(rng, config.class2_secondary_mean_range) : 0.0;
      std::normal_distribution<double> first(primary, config.sigma);
      std::normal_distribution<double> second(secondary, config.sigma);
      std::bernoulli_distribution pick_secondary(config.secondary_weight);
      std::vector<std::size_t> counts(config.bins, 0);
      for (std::size_t s = 0; s < config.samples_per_histogram; ++s) {
        const double v = (cls == 1 && pick_secondary(rng)) ? second(rng) : first(rng);
        ++counts[bin_index(v, config.bins, config.bin_range)];
      }
      histograms.push_back(counts_to_histogram(counts, config.samples_per_histogram));
      labels.push_back(cls);
    }
  }
  return LabeledDataset{PointCloud::from_histograms(histograms, labels), labels, config};
}

Histogram series_to_histogram(std::span<const double> series, std::size_t bins,
                              const Interval& range) {
  if (series.empty())
    throw Error(Errc::EmptySeries, "series has no values");
  if (!(range.lo < range.hi))
    throw Error(Errc::EmptyRange, "histogram range is empty");
  if (bins < 1)
    throw Error(Errc::InvalidConfig, "bins must be positive");
  std::vector<std::size_t> counts(bins, 0);
  for (double v : series)
    ++counts[bin_index(v, bins, range)];
  return counts_to_histogram(counts, series.size());
}

std::vector<double> read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t\r");
    double v = 0.0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
      throw Error(Errc::ParseError, path.string() + ":" + std::to_string(lineno) +
                                        ": not a real number");
    values.push_back(v);
  }
  return values;
}

IngestedSeries ingest_directory(const std::filesystem::path& directory, std::size_t bins,
                                const Interval& range) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec))
    throw Error(Errc::IoError, directory.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory))
    if (entry.is_regular_file())
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error(Errc::EmptyInput, "no series files in " + directory.string());

  IngestedSeries out;
  for (const auto& f : files) {
    const auto series = read_series_file(f);
    if (series.empty())
      throw Error(Errc::EmptySeries, f.string() + " has no values");
    out.sources.push_back(f.filename().string());
    out.histograms.push_back(series_to_histogram(series, bins, range));
  }
  return out;
}

} // namespace wshift
