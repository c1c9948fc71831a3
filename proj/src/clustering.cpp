#include "wshift/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

namespace wshift {

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
  case Algorithm::WMS: return "wms";
  case Algorithm::MedianShift: return "median-shift";
  case Algorithm::MeanShift: return "mean-shift";
  case Algorithm::KMWS: return "kmws";
  case Algorithm::DBSCAN_WS: return "dbscan-ws";
  }
  return "unknown";
}

void MergePolicy::validate() const {
  if (!(merge_radius > 0.0) || !std::isfinite(merge_radius))
    throw Error(Errc::InvalidConfig, "merge_radius must be positive");
}

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

std::vector<Vector> cumulatives_of(const PointCloud& cloud) {
  std::vector<Vector> zs;
  zs.reserve(cloud.size());
  for (const auto& p : cloud.points()) {
    if (!is_histogram(p))
      throw Error(Errc::InvalidHistogram, "cloud point is not a normalized histogram");
    zs.push_back(cumul(Histogram::from_bins(p)).vector());
  }
  return zs;
}

Vector representative(std::span<const Vector> points, std::span<const std::size_t> members,
                      DistanceKind kind) {
  if (kind == DistanceKind::Wasserstein1)
    return wasserstein_median(points, members);
  return coordinate_median(points, members);
}

std::vector<std::vector<std::size_t>> members_by_label(std::span<const int> labels,
                                                       std::size_t clusters) {
  std::vector<std::vector<std::size_t>> members(clusters);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0)
      members[static_cast<std::size_t>(labels[i])].push_back(i);
  return members;
}

} // namespace

Vector wasserstein_median(std::span<const Vector> histograms,
                          std::span<const std::size_t> indices) {
  std::vector<Vector> zs;
  zs.reserve(indices.size());
  for (auto i : indices)
    zs.push_back(cumul(Histogram::from_bins(histograms[i])).vector());
  return diff(coordinate_median(zs)).vector();
}

MergeResult merge_modes(std::span<const Vector> modes, DistanceKind kind,
                        const MergePolicy& policy, double bin_width) {
  policy.validate();
  MergeResult result;
  if (modes.empty())
    return result;
  const std::size_t n = modes.size();
  DisjointSets sets(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (distance(kind, modes[a], modes[b], bin_width) < policy.merge_radius)
        sets.unite(a, b);

  // Roots are the smallest member, so first-seen order equals smallest-index order.
  std::vector<int> group_of_root(n, -1);
  result.group_of.resize(n);
  int next = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t root = sets.find(a);
    if (group_of_root[root] < 0)
      group_of_root[root] = next++;
    result.group_of[a] = group_of_root[root];
  }
  for (const auto& members : members_by_label(result.group_of, static_cast<std::size_t>(next)))
    result.representatives.push_back(representative(modes, members, kind));
  return result;
}

ClusterResult cluster_dataset(const PointCloud& cloud, Algorithm engine,
                              const EngineConfig& config, const MergePolicy& policy,
                              const ClusterOptions& options) {
  if (cloud.empty())
    throw Error(Errc::EmptyInput, "cannot cluster an empty cloud");
  config.validate();
  policy.validate();

  DistanceKind expected;
  switch (engine) {
  case Algorithm::WMS: expected = DistanceKind::Wasserstein1; break;
  case Algorithm::MedianShift: expected = DistanceKind::L1; break;
  case Algorithm::MeanShift: expected = DistanceKind::SquaredEuclidean; break;
  default:
    throw Error(Errc::InvalidConfig, "cluster_dataset drives mode-seeking engines only");
  }
  if (config.distance != expected)
    throw Error(Errc::InvalidConfig, std::string(algorithm_name(engine)) +
                                         " is incompatible with the configured distance");

  std::vector<Vector> cumulatives;
  if (engine == Algorithm::WMS)
    cumulatives = cumulatives_of(cloud);

  const std::size_t n = cloud.size();
  std::vector<std::optional<ModeTrajectory>> runs(n);
  std::vector<std::exception_ptr> failures(n);
  auto run_seed = [&](std::size_t j) {
    try {
      switch (engine) {
      case Algorithm::WMS: runs[j] = run_wms_cumulative(cumulatives[j], cumulatives, config); break;
      case Algorithm::MedianShift: runs[j] = run_median_shift(cloud[j], cloud, config); break;
      default: runs[j] = run_mean_shift(cloud[j], cloud, config); break;
      }
    } catch (...) {
      failures[j] = std::current_exception();
    }
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, n);
  if (threads == 1) {
    for (std::size_t j = 0; j < n; ++j)
      run_seed(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w)
      workers.emplace_back([&] {
        for (std::size_t j = next++; j < n; j = next++)
          run_seed(j);
      });
  }

  ClusterResult result;
  result.algorithm = engine;
  result.parameters.engine = config;
  result.parameters.merge = policy;
  result.parameters.bin_width = config.bin_width;

  std::vector<std::size_t> succeeded;
  std::vector<Vector> endpoints;
  for (std::size_t j = 0; j < n; ++j) {
    if (!runs[j]) {
      ++result.diagnostics.failed_seeds;
      continue;
    }
    if (runs[j]->terminated == Termination::MaxIterations)
      ++result.diagnostics.max_iteration_hits;
    result.diagnostics.iterations = std::max(result.diagnostics.iterations, runs[j]->steps());
    succeeded.push_back(j);
    endpoints.push_back(runs[j]->mode());
  }
  if (succeeded.empty())
    std::rethrow_exception(failures.front());

  const MergeResult merged = merge_modes(endpoints, config.distance, policy, config.bin_width);
  result.modes = merged.representatives;
  result.labels.assign(n, 0);
  result.endpoints.assign(n, Vector{});
  for (std::size_t s = 0; s < succeeded.size(); ++s) {
    result.labels[succeeded[s]] = merged.group_of[s];
    result.endpoints[succeeded[s]] = endpoints[s];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (runs[j])
      continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < result.modes.size(); ++g) {
      const double d = distance(config.distance, cloud[j], result.modes[g], config.bin_width);
      if (d < best) {
        best = d;
        result.labels[j] = static_cast<int>(g);
      }
    }
  }
  if (options.keep_trajectories) {
    result.per_seed_trajectories.reserve(n);
    for (auto& r : runs)
      result.per_seed_trajectories.push_back(r ? std::move(*r) : ModeTrajectory{});
  }
  return result;
}

ClusterResult kmeans_wasserstein(const PointCloud& cloud, std::size_t k, std::uint64_t rng_seed,
                                 std::size_t max_iterations, double bin_width) {
  if (k == 0)
    throw Error(Errc::InvalidConfig, "k must be positive");
  if (max_iterations == 0)
    throw Error(Errc::InvalidConfig, "max_iterations must be positive");
  if (k > cloud.size())
    throw Error(Errc::KTooLarge, "k = " + std::to_string(k) + " exceeds N = " +
                                     std::to_string(cloud.size()));
  const std::vector<Vector> zs = cumulatives_of(cloud);
  const std::size_t n = zs.size();

  std::mt19937_64 rng(rng_seed);
  std::vector<Vector> centroids;
  constexpr int kInitDraws = 10;
  for (int draw = 0; draw < kInitDraws && centroids.empty(); ++draw) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    std::vector<Vector> candidate;
    for (std::size_t i = 0; i < k; ++i)
      candidate.push_back(zs[order[i]]);
    bool distinct = true;
    for (std::size_t a = 0; a < k && distinct; ++a)
      for (std::size_t b = a + 1; b < k && distinct; ++b)
        distinct = candidate[a] != candidate[b];
    if (distinct)
      centroids = std::move(candidate);
  }
  if (centroids.empty())
    throw Error(Errc::DegenerateInit, "no draw of k distinct histograms in 10 attempts");

  ClusterResult result;
  result.algorithm = Algorithm::KMWS;
  result.parameters.k = k;
  result.parameters.rng_seed = rng_seed;
  result.parameters.max_iterations = max_iterations;
  result.parameters.bin_width = bin_width;

  std::vector<int> assignment;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::vector<int> next(n);
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = l1_distance(zs[i], centroids[c]) * bin_width;
        if (d < best) {
          best = d;
          next[i] = static_cast<int>(c);
        }
      }
      objective += best;
    }
    result.diagnostics.objective_history.push_back(objective);
    result.diagnostics.iterations = it + 1;
    if (next == assignment)
      break;
    assignment = std::move(next);
    const auto members = members_by_label(assignment, k);
    for (std::size_t c = 0; c < k; ++c)
      if (!members[c].empty())
        centroids[c] = coordinate_median(zs, members[c]);
  }

  result.labels = assignment;
  for (const auto& z : centroids)
    result.modes.push_back(diff(z).vector());
  return result;
}

ClusterResult dbscan_wasserstein(const PointCloud& cloud, double eps, std::size_t min_pts,
                                 double bin_width) {
  if (!(eps > 0.0))
    throw Error(Errc::InvalidConfig, "eps must be positive");
  if (min_pts < 1)
    throw Error(Errc::InvalidConfig, "min_pts must be at least 1");
  const std::vector<Vector> zs = cumulatives_of(cloud);
  const std::size_t n = zs.size();

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (l1_distance(zs[i], zs[j]) * bin_width <= eps)
        neighbors[i].push_back(j);

  constexpr int kUnvisited = -2;
  std::vector<int> labels(n, kUnvisited);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited)
      continue;
    if (neighbors[i].size() < min_pts) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::deque<std::size_t> frontier(neighbors[i].begin(), neighbors[i].end());
    while (!frontier.empty()) {
      const std::size_t j = frontier.front();
      frontier.pop_front();
      if (labels[j] == kNoise)
        labels[j] = cluster; // border point
      if (labels[j] != kUnvisited)
        continue;
      labels[j] = cluster;
      if (neighbors[j].size() >= min_pts)
        frontier.insert(frontier.end(), neighbors[j].begin(), neighbors[j].end());
    }
    ++cluster;
  }

  ClusterResult result;
  result.algorithm = Algorithm::DBSCAN_WS;
  result.parameters.eps = eps;
  result.parameters.min_pts = min_pts;
  result.parameters.bin_width = bin_width;
  result.labels = std::move(labels);
  result.diagnostics.noise_points =
      static_cast<std::size_t>(std::count(result.labels.begin(), result.labels.end(), kNoise));
  for (const auto& members : members_by_label(result.labels, static_cast<std::size_t>(cluster)))
    result.modes.push_back(wasserstein_median(cloud.points(), members));
  return result;
}

} // namespace wshift
