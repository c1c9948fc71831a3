#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wshift/core.hpp"
#include "wshift/modeseek.hpp"

namespace wshift {

enum class Algorithm { WMS, MedianShift, MeanShift, KMWS, DBSCAN_WS };

std::string_view algorithm_name(Algorithm a) noexcept;

inline constexpr int kNoise = -1;

struct MergePolicy {
  double merge_radius = 0.5;

  /// Default policy for bandwidth h: merge radius h / 2.
  static MergePolicy for_bandwidth(double h) { return MergePolicy{h / 2.0}; }
  void validate() const;
};

/// Parameters the result was produced with. Unused fields keep their defaults.
struct RunParameters {
  std::optional<EngineConfig> engine;
  std::optional<MergePolicy> merge;
  std::size_t k = 0;
  std::uint64_t rng_seed = 0;
  std::size_t max_iterations = 0;
  double eps = 0.0;
  std::size_t min_pts = 0;
  double bin_width = 1.0;
};

struct ClusterDiagnostics {
  std::size_t failed_seeds = 0;
  std::size_t max_iteration_hits = 0;
  std::size_t iterations = 0;
  /// KMWS: sum of W1 distances to the assigned centroid after each assignment.
  std::vector<double> objective_history;
  std::size_t noise_points = 0;
};

struct ClusterResult {
  Algorithm algorithm = Algorithm::WMS;
  /// One label per point; kNoise only for DBSCAN_WS.
  std::vector<int> labels;
  /// One representative per cluster id.
  std::vector<Vector> modes;
  /// Mode-seeking engines: the stationary endpoint of each seed's run.
  std::vector<Vector> endpoints;
  std::vector<ModeTrajectory> per_seed_trajectories;
  RunParameters parameters;
  ClusterDiagnostics diagnostics;

  std::size_t cluster_count() const noexcept { return modes.size(); }
};

struct MergeResult {
  /// Group id of every input mode.
  std::vector<int> group_of;
  std::vector<Vector> representatives;
};

/// Single-link grouping of modes under d < merge_radius. Groups are numbered
/// by their smallest member index; each representative is the (cumulated)
/// lower median of the group.
MergeResult merge_modes(std::span<const Vector> modes, DistanceKind kind,
                        const MergePolicy& policy, double bin_width = 1.0);

struct ClusterOptions {
  /// Worker threads for per-seed runs; 0 uses hardware concurrency.
  std::size_t threads = 1;
  bool keep_trajectories = false;
};

/// Seeds the engine at every data point, merges the endpoints and labels each
/// point with its endpoint's merge class. Only WMS, MedianShift and MeanShift.
ClusterResult cluster_dataset(const PointCloud& cloud, Algorithm engine,
                              const EngineConfig& config, const MergePolicy& policy,
                              const ClusterOptions& options = {});

/// Lloyd iteration under W1 with lower-median barycenters of cumulative histograms.
ClusterResult kmeans_wasserstein(const PointCloud& cloud, std::size_t k, std::uint64_t rng_seed,
                                 std::size_t max_iterations = 100, double bin_width = 1.0);

/// DBSCAN with the inclusive neighborhood W1(x_i, x_j) <= eps.
ClusterResult dbscan_wasserstein(const PointCloud& cloud, double eps, std::size_t min_pts,
                                 double bin_width = 1.0);

/// W1 barycenter of the selected histograms: diff of the lower median of their
/// cumulative histograms.
Vector wasserstein_median(std::span<const Vector> histograms,
                          std::span<const std::size_t> indices);

} // namespace wshift
