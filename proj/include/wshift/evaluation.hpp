#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wshift {

/// counts[u][v]: points with predicted label u and true label v. Labels are
/// mapped to dense ids in first-occurrence order; -1 is an ordinary label.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> column_sums;
  std::int64_t total = 0;

  std::size_t rows() const noexcept { return counts.size(); }
  std::size_t columns() const noexcept { return column_sums.size(); }
};

struct AriScore {
  double value = 0.0;
};

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth);

/// Hubert-Arabie adjusted Rand index. Returns 0 when the adjustment's
/// denominator vanishes (both partitions trivial).
AriScore adjusted_rand_index(std::span<const int> pred, std::span<const int> truth);

/// Number of distinct labels.
std::size_t count_clusters(std::span<const int> labels);

} // namespace wshift
