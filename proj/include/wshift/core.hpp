#pragma once

// Histogram arithmetic, distances, the triangular kernel and the density /
// bound functions that the flat-weight iterations climb.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wshift/error.hpp"

namespace wshift {

using Vector = std::vector<double>;

inline constexpr double kNormalizationTolerance = 1e-9;
inline constexpr double kRoundTripTolerance = 1e-12;
inline constexpr double kNegativeClamp = 1e-12;

/// Normalized q-bin mass vector. Bins are nonnegative and sum to one.
class Histogram {
public:
  /// Validates `bins` against the histogram invariants without renormalizing.
  /// Entries in (-1e-12, 0) are clamped to zero.
  static Histogram from_bins(Vector bins);

  std::span<const double> bins() const noexcept { return bins_; }
  const Vector& vector() const noexcept { return bins_; }
  std::size_t size() const noexcept { return bins_.size(); }
  double operator[](std::size_t k) const { return bins_[k]; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

private:
  explicit Histogram(Vector bins) : bins_(std::move(bins)) {}
  Vector bins_;
};

/// Prefix sums of a histogram: nondecreasing, nonnegative, ending at one.
class CumulativeHistogram {
public:
  static CumulativeHistogram from_values(Vector values);

  std::span<const double> values() const noexcept { return values_; }
  const Vector& vector() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  friend bool operator==(const CumulativeHistogram&, const CumulativeHistogram&) = default;

private:
  explicit CumulativeHistogram(Vector values) : values_(std::move(values)) {}
  Vector values_;
};

/// True when `values` satisfies the cumulative-histogram invariants.
bool is_cumulative_histogram(std::span<const double> values,
                             double tolerance = kNormalizationTolerance) noexcept;

/// True when `bins` is a normalized histogram (nonnegative up to the clamp, sums to one).
bool is_histogram(std::span<const double> bins,
                  double tolerance = kNormalizationTolerance) noexcept;

/// N points in R^q, optionally labeled.
class PointCloud {
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vector> points,
                      std::optional<std::vector<int>> labels = std::nullopt);

  static PointCloud from_histograms(const std::vector<Histogram>& histograms,
                                    std::optional<std::vector<int>> labels = std::nullopt);

  const std::vector<Vector>& points() const noexcept { return points_; }
  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  bool empty() const noexcept { return points_.empty(); }

private:
  std::vector<Vector> points_;
  std::optional<std::vector<int>> labels_;
  std::size_t dimension_ = 0;
};

enum class Profile { Triangular };

struct KernelSpec {
  Profile profile = Profile::Triangular;
  double bandwidth = 1.0;

  KernelSpec() = default;
  explicit KernelSpec(double h, Profile p = Profile::Triangular);

  /// k(u) = 1 - u on [0, 1), 0 beyond.
  double profile_value(double u) const noexcept { return u < 1.0 ? 1.0 - u : 0.0; }
  /// g(u) = 1 on [0, 1), 0 beyond. Flat weight of the triangular profile.
  double weight(double u) const noexcept { return u < 1.0 ? 1.0 : 0.0; }
};

/// Wasserstein1 treats vectors as histograms on a uniform grid; `bin_width`
/// is the spacing between adjacent bin centers (1 unless stated otherwise).
enum class DistanceKind { L1, SquaredEuclidean, Wasserstein1 };

Histogram make_histogram(std::span<const double> raw, bool renormalize);

CumulativeHistogram cumul(const Histogram& m);
Histogram diff(const CumulativeHistogram& z);
/// diff() on an unvalidated vector; throws NonMonotone on a decreasing prefix.
Histogram diff(std::span<const double> z);

double l1_distance(std::span<const double> a, std::span<const double> b);
double squared_euclidean_distance(std::span<const double> a, std::span<const double> b);
/// W1 between two histograms, computed as the L1 distance of their prefix sums.
double wasserstein1_distance(std::span<const double> a, std::span<const double> b,
                             double bin_width = 1.0);

double distance(DistanceKind kind, std::span<const double> a, std::span<const double> b,
                double bin_width = 1.0);

/// Per-coordinate lower median (order statistic floor((P-1)/2)).
Vector coordinate_median(std::span<const Vector> points);
/// Same, over the subset of `points` selected by `indices`.
Vector coordinate_median(std::span<const Vector> points, std::span<const std::size_t> indices);

/// Sum over the cloud of k(d(x, x_i) / h), without the normalizing factor.
double density_at(std::span<const double> x, const PointCloud& cloud, DistanceKind kind,
                  const KernelSpec& kernel, double bin_width = 1.0);

/// Minorizer of the density touching it at `anchor`.
double bound_at(std::span<const double> x, std::span<const double> anchor,
                const PointCloud& cloud, DistanceKind kind, const KernelSpec& kernel,
                double bin_width = 1.0);

} // namespace wshift
