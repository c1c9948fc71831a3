#include "wshift/evaluation.hpp"

#include <unordered_map>
#include <unordered_set>

#include "wshift/error.hpp"

namespace wshift {

namespace {

std::vector<std::size_t> dense_ids(std::span<const int> labels, std::size_t& count) {
  std::unordered_map<int, std::size_t> ids;
  std::vector<std::size_t> dense;
  dense.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.try_emplace(l, ids.size());
    dense.push_back(it->second);
  }
  count = ids.size();
  return dense;
}

double pairs(std::int64_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

} // namespace

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size())
    throw Error(Errc::LengthMismatch, "prediction has " + std::to_string(pred.size()) +
                                          " labels, truth has " + std::to_string(truth.size()));
  if (pred.size() < 2)
    throw Error(Errc::TooFewPoints, "need at least two labeled points");

  std::size_t rows = 0, cols = 0;
  const auto u = dense_ids(pred, rows);
  const auto v = dense_ids(truth, cols);
  ContingencyTable t;
  t.counts.assign(rows, std::vector<std::int64_t>(cols, 0));
  t.row_sums.assign(rows, 0);
  t.column_sums.assign(cols, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    ++t.counts[u[i]][v[i]];
    ++t.row_sums[u[i]];
    ++t.column_sums[v[i]];
  }
  t.total = static_cast<std::int64_t>(pred.size());
  return t;
}

AriScore adjusted_rand_index(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  double index = 0.0;
  for (const auto& row : t.counts)
    for (auto n : row)
      index += pairs(n);
  double sum_a = 0.0, sum_b = 0.0;
  for (auto a : t.row_sums)
    sum_a += pairs(a);
  for (auto b : t.column_sums)
    sum_b += pairs(b);
  const double expected = sum_a * sum_b / pairs(t.total);
  const double denominator = 0.5 * (sum_a + sum_b) - expected;
  if (denominator == 0.0)
    return AriScore{0.0};
  return AriScore{(index - expected) / denominator};
}

std::size_t count_clusters(std::span<const int> labels) {
  return std::unordered_set<int>(labels.begin(), labels.end()).size();
}

} // namespace wshift
