#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "wshift/core.hpp"

namespace wshift {

/// Sorted, duplicate-free indices of the points strictly within bandwidth.
using ActiveSet = std::vector<std::size_t>;

enum class Termination { Stationary, MaxIterations, EmptyActiveSet, ToleranceReached };

std::string_view termination_name(Termination t) noexcept;

struct EngineConfig {
  KernelSpec kernel{};
  DistanceKind distance = DistanceKind::L1;
  std::size_t max_iterations = 1000;
  /// Euclidean step length below which classical mean shift stops.
  double mean_shift_epsilon = 1e-8;
  /// Spacing between adjacent histogram bins for Wasserstein1.
  double bin_width = 1.0;

  void validate() const;
};

/// Iterates x_0..x_T of one seeded run, with the active set and density at each.
/// For the Wasserstein engine `cumulative_iterates` holds the z_n the run
/// actually iterated on; it is empty for the other engines.
struct ModeTrajectory {
  std::vector<Vector> iterates;
  std::vector<ActiveSet> active_sets;
  std::vector<double> densities;
  std::vector<Vector> cumulative_iterates;
  Termination terminated = Termination::MaxIterations;

  const Vector& mode() const { return iterates.back(); }
  std::size_t steps() const noexcept { return iterates.empty() ? 0 : iterates.size() - 1; }
};

ActiveSet active_set(std::span<const double> x, const PointCloud& cloud,
                     const EngineConfig& config);

/// One flat-weight step: the choice-function minimizer over the active set.
/// L1 and Wasserstein1 use the (cumulated) lower median, SquaredEuclidean the mean.
Vector flat_step(std::span<const double> x, const PointCloud& cloud, const EngineConfig& config);

ModeTrajectory run_median_shift(std::span<const double> seed, const PointCloud& cloud,
                                const EngineConfig& config);

ModeTrajectory run_wms(const Histogram& seed, const PointCloud& cloud,
                       const EngineConfig& config);

ModeTrajectory run_mean_shift(std::span<const double> seed, const PointCloud& cloud,
                              const EngineConfig& config);

/// Wasserstein median shift on precomputed cumulative histograms. `cumulatives`
/// must all be valid cumulative histograms; `seed` is a cumulative histogram too.
ModeTrajectory run_wms_cumulative(std::span<const double> seed,
                                  std::span<const Vector> cumulatives,
                                  const EngineConfig& config);

} // namespace wshift
