#include "wshift/modeseek.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace wshift {

std::string_view termination_name(Termination t) noexcept {
  switch (t) {
  case Termination::Stationary: return "Stationary";
  case Termination::MaxIterations: return "MaxIterations";
  case Termination::EmptyActiveSet: return "EmptyActiveSet";
  case Termination::ToleranceReached: return "ToleranceReached";
  }
  return "Unknown";
}

void EngineConfig::validate() const {
  if (!(kernel.bandwidth > 0.0) || !std::isfinite(kernel.bandwidth))
    throw Error(Errc::InvalidConfig, "bandwidth must be positive");
  if (max_iterations < 1)
    throw Error(Errc::InvalidConfig, "max_iterations must be at least 1");
  if (!(mean_shift_epsilon > 0.0))
    throw Error(Errc::InvalidConfig, "mean_shift_epsilon must be positive");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw Error(Errc::InvalidConfig, "bin_width must be positive");
}

namespace {

using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;
using StepFn = std::function<Vector(const ActiveSet&)>;

struct Neighborhood {
  ActiveSet active;
  double density = 0.0;
};

// One pass over the points yields both C(x) and f(x).
Neighborhood scan(std::span<const double> x, std::span<const Vector> points,
                  const DistanceFn& dist, const KernelSpec& kernel) {
  Neighborhood n;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = dist(x, points[i]) / kernel.bandwidth;
    if (u < 1.0) {
      n.active.push_back(i);
      n.density += kernel.profile_value(u);
    }
  }
  return n;
}

Vector mean_of(std::span<const Vector> points, const ActiveSet& active) {
  if (active.empty())
    throw Error(Errc::EmptySet, "mean of an empty set");
  Vector m(points[active.front()].size(), 0.0);
  for (auto i : active)
    for (std::size_t k = 0; k < m.size(); ++k)
      m[k] += points[i][k];
  for (auto& v : m)
    v /= static_cast<double>(active.size());
  return m;
}

double euclidean_step(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean_distance(a, b));
}

// Shared driver for the seeded iterations. `use_tolerance` enables the
// step-length stop of classical mean shift.
ModeTrajectory iterate(std::span<const double> seed, std::span<const Vector> points,
                       const EngineConfig& config, const DistanceFn& dist, const StepFn& step,
                       bool use_tolerance) {
  config.validate();
  ModeTrajectory t;
  Vector x(seed.begin(), seed.end());
  Neighborhood n = scan(x, points, dist, config.kernel);
  if (n.active.empty())
    throw Error(Errc::EmptyActiveSet, "no data point within bandwidth of the seed");
  t.iterates.push_back(x);
  t.active_sets.push_back(n.active);
  t.densities.push_back(n.density);

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    if (t.active_sets.back().empty()) {
      t.terminated = Termination::EmptyActiveSet;
      return t;
    }
    Vector next = step(t.active_sets.back());
    n = scan(next, points, dist, config.kernel);
    const bool same = next == t.iterates.back();
    const bool small = use_tolerance && euclidean_step(next, t.iterates.back()) <
                                            config.mean_shift_epsilon;
    t.iterates.push_back(std::move(next));
    t.active_sets.push_back(std::move(n.active));
    t.densities.push_back(n.density);
    if (same) {
      t.terminated = Termination::Stationary;
      return t;
    }
    if (small) {
      t.terminated = Termination::ToleranceReached;
      return t;
    }
  }
  t.terminated = Termination::MaxIterations;
  return t;
}

void require_kind(const EngineConfig& config, DistanceKind kind, const char* engine) {
  if (config.distance != kind)
    throw Error(Errc::InvalidConfig, std::string(engine) + " requires a different distance kind");
}

void require_dimension(std::span<const double> x, const PointCloud& cloud) {
  if (!cloud.empty() && x.size() != cloud.dimension())
    throw Error(Errc::DimensionMismatch, "seed dimension does not match the cloud");
}

std::vector<Vector> cumulate_all(const PointCloud& cloud) {
  std::vector<Vector> zs;
  zs.reserve(cloud.size());
  for (const auto& p : cloud.points()) {
    if (!is_histogram(p))
      throw Error(Errc::InvalidHistogram, "cloud point is not a normalized histogram");
    zs.push_back(cumul(Histogram::from_bins(p)).vector());
  }
  return zs;
}

} // namespace

ActiveSet active_set(std::span<const double> x, const PointCloud& cloud,
                     const EngineConfig& config) {
  require_dimension(x, cloud);
  ActiveSet result;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (distance(config.distance, x, cloud[i], config.bin_width) / config.kernel.bandwidth < 1.0)
      result.push_back(i);
  return result;
}

Vector flat_step(std::span<const double> x, const PointCloud& cloud, const EngineConfig& config) {
  const ActiveSet active = active_set(x, cloud, config);
  if (active.empty())
    throw Error(Errc::EmptyActiveSet, "no data point within bandwidth");
  switch (config.distance) {
  case DistanceKind::L1:
    return coordinate_median(cloud.points(), active);
  case DistanceKind::SquaredEuclidean:
    return mean_of(cloud.points(), active);
  case DistanceKind::Wasserstein1: {
    std::vector<Vector> zs;
    zs.reserve(active.size());
    for (auto i : active)
      zs.push_back(cumul(Histogram::from_bins(cloud[i])).vector());
    return diff(coordinate_median(zs)).vector();
  }
  }
  throw Error(Errc::InvalidConfig, "unknown distance kind");
}

ModeTrajectory run_median_shift(std::span<const double> seed, const PointCloud& cloud,
                                const EngineConfig& config) {
  require_kind(config, DistanceKind::L1, "median shift");
  require_dimension(seed, cloud);
  const auto& points = cloud.points();
  return iterate(
      seed, points, config,
      [](std::span<const double> a, std::span<const double> b) { return l1_distance(a, b); },
      [&points](const ActiveSet& c) { return coordinate_median(points, c); }, false);
}

ModeTrajectory run_wms_cumulative(std::span<const double> seed,
                                  std::span<const Vector> cumulatives,
                                  const EngineConfig& config) {
  require_kind(config, DistanceKind::Wasserstein1, "Wasserstein median shift");
  for (const auto& z : cumulatives)
    if (z.size() != seed.size())
      throw Error(Errc::DimensionMismatch, "seed dimension does not match the cloud");
  const double width = config.bin_width;
  ModeTrajectory t = iterate(
      seed, cumulatives, config,
      [width](std::span<const double> a, std::span<const double> b) {
        return l1_distance(a, b) * width;
      },
      [cumulatives](const ActiveSet& c) { return coordinate_median(cumulatives, c); }, false);
  t.cumulative_iterates = std::move(t.iterates);
  t.iterates.clear();
  t.iterates.reserve(t.cumulative_iterates.size());
  for (const auto& z : t.cumulative_iterates)
    t.iterates.push_back(diff(z).vector());
  return t;
}

ModeTrajectory run_wms(const Histogram& seed, const PointCloud& cloud,
                       const EngineConfig& config) {
  require_kind(config, DistanceKind::Wasserstein1, "Wasserstein median shift");
  require_dimension(seed.bins(), cloud);
  const std::vector<Vector> zs = cumulate_all(cloud);
  return run_wms_cumulative(cumul(seed).vector(), zs, config);
}

ModeTrajectory run_mean_shift(std::span<const double> seed, const PointCloud& cloud,
                              const EngineConfig& config) {
  require_kind(config, DistanceKind::SquaredEuclidean, "mean shift");
  require_dimension(seed, cloud);
  const auto& points = cloud.points();
  return iterate(
      seed, points, config,
      [](std::span<const double> a, std::span<const double> b) {
        return squared_euclidean_distance(a, b);
      },
      [&points](const ActiveSet& c) { return mean_of(points, c); }, true);
}

} // namespace wshift
