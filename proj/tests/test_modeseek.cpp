#include <doctest.h>

#include "test_support.hpp"
#include "wshift/modeseek.hpp"

using namespace wshift;
using testing::code_of;

namespace {

EngineConfig config_for(DistanceKind kind, double h) {
  EngineConfig c;
  c.kernel = KernelSpec(h);
  c.distance = kind;
  return c;
}

const PointCloud kLine({{0.0}, {0.4}, {0.5}, {0.6}, {2.0}});

void check_flat_trajectory(const ModeTrajectory& t) {
  REQUIRE(t.iterates.size() == t.densities.size());
  REQUIRE(t.iterates.size() == t.active_sets.size());
  for (std::size_t n = 0; n + 1 < t.densities.size(); ++n) {
    CHECK(t.densities[n + 1] >= t.densities[n] - 1e-10);
    if (t.densities[n + 1] <= t.densities[n] + 1e-10)
      CHECK(testing::is_subset(t.active_sets[n + 1], t.active_sets[n]));
  }
}

} // namespace

TEST_CASE("active_set") {
  const auto c = config_for(DistanceKind::L1, 1.0);
  CHECK(active_set(Vector{0.0}, kLine, c) == ActiveSet{0, 1, 2, 3});
  CHECK(active_set(Vector{0.5}, kLine, c) == ActiveSet{0, 1, 2, 3});
  CHECK(active_set(Vector{10.0}, kLine, c).empty());
  // d == h is outside.
  CHECK(active_set(Vector{1.0}, PointCloud(std::vector<Vector>{{0.0}}), c).empty());
  CHECK(code_of([&] { active_set(Vector{0.0, 1.0}, kLine, c); }) == Errc::DimensionMismatch);
}

TEST_CASE("flat_step") {
  const auto c = config_for(DistanceKind::L1, 1.0);
  CHECK(flat_step(Vector{0.0}, kLine, c) == Vector{0.4});
  CHECK(flat_step(Vector{2.0}, kLine, c) == Vector{2.0});
  CHECK(flat_step(Vector{0.0}, kLine, c) == flat_step(Vector{0.1}, kLine, c));
  CHECK(code_of([&] { flat_step(Vector{7.0}, kLine, c); }) == Errc::EmptyActiveSet);

  const PointCloud toy({{1, 0}, {0.9, 0.1}, {0, 1}});
  const auto w = flat_step(Vector{1, 0}, toy, config_for(DistanceKind::Wasserstein1, 0.5));
  CHECK(w[0] == doctest::Approx(0.9));
  CHECK(w[1] == doctest::Approx(0.1));

  CHECK(flat_step(Vector{0.0}, PointCloud({{0.0}, {1.0}, {10.0}}),
                  config_for(DistanceKind::SquaredEuclidean, 4.0)) == Vector{0.5});
}

TEST_CASE("median shift") {
  const auto c = config_for(DistanceKind::L1, 1.0);

  SUBCASE("hand-traced line") {
    const auto t = run_median_shift(Vector{0.0}, kLine, c);
    CHECK(t.iterates == std::vector<Vector>{{0.0}, {0.4}, {0.4}});
    CHECK(t.terminated == Termination::Stationary);
    CHECK(t.active_sets.back() == ActiveSet{0, 1, 2, 3});
  }

  SUBCASE("isolated seed is immediately stationary") {
    const auto t = run_median_shift(Vector{2.0}, kLine, c);
    CHECK(t.iterates == std::vector<Vector>{{2.0}, {2.0}});
    CHECK(t.terminated == Termination::Stationary);
  }

  SUBCASE("errors") {
    CHECK(code_of([&] { run_median_shift(Vector{9.0}, kLine, c); }) == Errc::EmptyActiveSet);
    CHECK(code_of([&] { run_median_shift(Vector{0.0}, kLine, config_for(DistanceKind::SquaredEuclidean, 1.0)); }) ==
          Errc::InvalidConfig);
    CHECK(code_of([&] { run_median_shift(Vector{0.0, 0.0}, kLine, c); }) == Errc::DimensionMismatch);
  }

  SUBCASE("max_iterations is a flag, not an error") {
    auto capped = c;
    capped.max_iterations = 1;
    const auto t = run_median_shift(Vector{0.0}, kLine, capped);
    CHECK(t.terminated == Termination::MaxIterations);
    CHECK(t.iterates.size() == 2);
  }

  SUBCASE("random clouds reach a fixed point with monotone density") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 50, q = 1 + trial % 4;
      const auto cloud = testing::random_unit_cloud(rng, n, q);
      const auto cfg = config_for(DistanceKind::L1, trial % 2 ? 0.6 : 0.3);
      const auto t = run_median_shift(cloud[trial % n], cloud, cfg);
      CHECK(t.terminated == Termination::Stationary);
      CHECK(t.iterates[t.iterates.size() - 1] == t.iterates[t.iterates.size() - 2]);
      check_flat_trajectory(t);

      const auto again = run_median_shift(t.mode(), cloud, cfg);
      CHECK(again.steps() == 1);
      CHECK(again.mode() == t.mode());
      CHECK(run_median_shift(cloud[trial % n], cloud, cfg).iterates == t.iterates);
    }
  }
}

TEST_CASE("Wasserstein median shift") {
  const PointCloud toy({{1, 0}, {0.9, 0.1}, {0, 1}});
  const auto c = config_for(DistanceKind::Wasserstein1, 0.5);

  SUBCASE("toy cloud") {
    const auto t = run_wms(Histogram::from_bins({1, 0}), toy, c);
    CHECK(t.terminated == Termination::Stationary);
    CHECK(t.steps() <= 2);
    CHECK(t.mode()[0] == doctest::Approx(0.9));
    CHECK(t.mode()[1] == doctest::Approx(0.1));
    CHECK(t.cumulative_iterates.back() == Vector{0.9, 1.0});
  }

  SUBCASE("singleton active set") {
    const auto t = run_wms(Histogram::from_bins({0, 1}), toy, c);
    CHECK(t.terminated == Termination::Stationary);
    CHECK(t.mode() == Vector{0, 1});
  }

  SUBCASE("invalid input") {
    CHECK(code_of([&] { run_wms(Histogram::from_bins({1, 0}), PointCloud({{0.7, 0.7}}), c); }) ==
          Errc::InvalidHistogram);
    CHECK(code_of([&] { run_wms(Histogram::from_bins({1, 0}), PointCloud({{0, 1}}), c); }) ==
          Errc::EmptyActiveSet);
  }

  SUBCASE("active sets never cross a gap wider than 2h") {
    const Vector a{0.5, 0.5, 0, 0, 0, 0};
    const Vector b{0, 0, 0, 0, 0.5, 0.5};
    std::vector<Vector> pts(20, a);
    pts.insert(pts.end(), 20, b);
    const PointCloud cloud(pts);
    const auto cfg = config_for(DistanceKind::Wasserstein1, 1.5);
    REQUIRE(wasserstein1_distance(a, b) > 2 * 1.5);
    for (std::size_t j = 0; j < pts.size(); j += 7) {
      const auto t = run_wms(Histogram::from_bins(pts[j]), cloud, cfg);
      CHECK(t.mode() == pts[j]);
    }
  }

  SUBCASE("closure, monotonicity and equivalence with median shift on cumulatives") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + trial % 30, q = 1 + trial % 16;
      const auto cloud = testing::random_histogram_cloud(rng, n, q);
      const auto cfg = config_for(DistanceKind::Wasserstein1, 0.3 + 0.1 * (trial % 10));
      const auto seed = Histogram::from_bins(cloud[trial % n]);
      const auto t = run_wms(seed, cloud, cfg);
      CHECK(t.terminated == Termination::Stationary);
      check_flat_trajectory(t);
      for (const auto& z : t.cumulative_iterates)
        CHECK(is_cumulative_histogram(z));
      for (const auto& x : t.iterates)
        CHECK(is_histogram(x));

      std::vector<Vector> zs;
      for (const auto& p : cloud.points())
        zs.push_back(cumul(Histogram::from_bins(p)).vector());
      const auto ms = run_median_shift(cumul(seed).vector(), PointCloud(zs),
                                       config_for(DistanceKind::L1, cfg.kernel.bandwidth));
      CHECK(ms.iterates == t.cumulative_iterates);
      CHECK(ms.active_sets == t.active_sets);
    }
  }

  SUBCASE("bin width rescales the bandwidth") {
    auto narrow = c;
    narrow.bin_width = 0.1;
    narrow.kernel = KernelSpec(0.05);
    const auto t1 = run_wms(Histogram::from_bins({1, 0}), toy, c);
    const auto t2 = run_wms(Histogram::from_bins({1, 0}), toy, narrow);
    CHECK(t1.cumulative_iterates == t2.cumulative_iterates);
  }
}

TEST_CASE("classical mean shift") {
  SUBCASE("hand-traced line") {
    const auto t = run_mean_shift(Vector{0.0}, PointCloud({{0.0}, {1.0}, {10.0}}),
                                  config_for(DistanceKind::SquaredEuclidean, 4.0));
    CHECK(t.iterates == std::vector<Vector>{{0.0}, {0.5}, {0.5}});
    CHECK(t.terminated == Termination::Stationary);
  }

  SUBCASE("single point") {
    const auto t = run_mean_shift(Vector{3.0, 1.0}, PointCloud({{3.0, 1.0}}),
                                  config_for(DistanceKind::SquaredEuclidean, 1.0));
    CHECK(t.terminated == Termination::Stationary);
    CHECK(t.mode() == Vector{3.0, 1.0});
  }

  SUBCASE("densities never decrease") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 100; ++trial) {
      const auto cloud = testing::random_unit_cloud(rng, 5 + trial % 40, 1 + trial % 3);
      const auto t = run_mean_shift(cloud[0], cloud,
                                    config_for(DistanceKind::SquaredEuclidean, 0.05 + 0.01 * (trial % 10)));
      CHECK(t.terminated != Termination::MaxIterations);
      check_flat_trajectory(t);
    }
  }

  SUBCASE("tolerance stop") {
    auto cfg = config_for(DistanceKind::SquaredEuclidean, 4.0);
    cfg.mean_shift_epsilon = 1.0;
    const auto t = run_mean_shift(Vector{0.0}, PointCloud({{0.0}, {1.0}, {10.0}}), cfg);
    CHECK(t.terminated == Termination::ToleranceReached);
    CHECK(t.iterates.size() == 2);
  }
}

TEST_CASE("engine config validation") {
  EngineConfig c;
  c.max_iterations = 0;
  CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
  c = EngineConfig{};
  c.mean_shift_epsilon = 0;
  CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
}
