#include "wshift/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wshift {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
  case Errc::EmptyInput: return "EmptyInput";
  case Errc::NegativeMass: return "NegativeMass";
  case Errc::NotNormalized: return "NotNormalized";
  case Errc::ZeroTotal: return "ZeroTotal";
  case Errc::NonMonotone: return "NonMonotone";
  case Errc::DimensionMismatch: return "DimensionMismatch";
  case Errc::InvalidHistogram: return "InvalidHistogram";
  case Errc::EmptySet: return "EmptySet";
  case Errc::EmptyActiveSet: return "EmptyActiveSet";
  case Errc::KTooLarge: return "KTooLarge";
  case Errc::DegenerateInit: return "DegenerateInit";
  case Errc::LengthMismatch: return "LengthMismatch";
  case Errc::TooFewPoints: return "TooFewPoints";
  case Errc::InvalidConfig: return "InvalidConfig";
  case Errc::EmptySeries: return "EmptySeries";
  case Errc::EmptyRange: return "EmptyRange";
  case Errc::ParseError: return "ParseError";
  case Errc::MissingParameter: return "MissingParameter";
  case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_same_dimension(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::DimensionMismatch,
                "dimensions " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

} // namespace

// --- Histogram ---------------------------------------------------------------

Histogram Histogram::from_bins(Vector bins) {
  if (bins.empty())
    throw Error(Errc::EmptyInput, "histogram needs at least one bin");
  double total = 0.0;
  for (auto& b : bins) {
    if (!std::isfinite(b))
      throw Error(Errc::InvalidHistogram, "non-finite bin");
    if (b < -kNegativeClamp)
      throw Error(Errc::NegativeMass, "bin mass " + std::to_string(b));
    if (b < 0.0)
      b = 0.0;
    total += b;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    throw Error(Errc::NotNormalized, "bins sum to " + std::to_string(total));
  return Histogram(std::move(bins));
}

Histogram make_histogram(std::span<const double> raw, bool renormalize) {
  if (raw.empty())
    throw Error(Errc::EmptyInput, "histogram needs at least one bin");
  Vector bins(raw.begin(), raw.end());
  if (!renormalize)
    return Histogram::from_bins(std::move(bins));

  double total = 0.0;
  for (auto& b : bins) {
    if (!std::isfinite(b))
      throw Error(Errc::InvalidHistogram, "non-finite bin");
    if (b < -kNegativeClamp)
      throw Error(Errc::NegativeMass, "bin mass " + std::to_string(b));
    if (b < 0.0)
      b = 0.0;
    total += b;
  }
  if (total == 0.0)
    throw Error(Errc::ZeroTotal, "cannot renormalize an all-zero histogram");
  for (auto& b : bins)
    b /= total;
  return Histogram::from_bins(std::move(bins));
}

bool is_histogram(std::span<const double> bins, double tolerance) noexcept {
  if (bins.empty())
    return false;
  double total = 0.0;
  for (double b : bins) {
    if (!std::isfinite(b) || b < -kNegativeClamp)
      return false;
    total += b;
  }
  return std::abs(total - 1.0) <= tolerance;
}

// --- CumulativeHistogram -----------------------------------------------------

bool is_cumulative_histogram(std::span<const double> values, double tolerance) noexcept {
  if (values.empty() || !(values[0] >= 0.0))
    return false;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] >= values[k - 1]))
      return false;
  return std::abs(values.back() - 1.0) <= tolerance;
}

CumulativeHistogram CumulativeHistogram::from_values(Vector values) {
  if (values.empty())
    throw Error(Errc::EmptyInput, "cumulative histogram needs at least one value");
  if (!is_cumulative_histogram(values))
    throw Error(Errc::InvalidHistogram, "values are not a cumulative histogram");
  return CumulativeHistogram(std::move(values));
}

CumulativeHistogram cumul(const Histogram& m) {
  Vector z(m.size());
  std::partial_sum(m.bins().begin(), m.bins().end(), z.begin());
  return CumulativeHistogram::from_values(std::move(z));
}

Histogram diff(std::span<const double> z) {
  if (z.empty())
    throw Error(Errc::EmptyInput, "cumulative histogram needs at least one value");
  Vector m(z.size());
  double previous = 0.0; // z_{-1}
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double step = z[k] - previous;
    if (step < -kRoundTripTolerance)
      throw Error(Errc::NonMonotone, "decrease at index " + std::to_string(k));
    m[k] = std::max(step, 0.0);
    previous = z[k];
  }
  return Histogram::from_bins(std::move(m));
}

Histogram diff(const CumulativeHistogram& z) { return diff(z.values()); }

// --- PointCloud --------------------------------------------------------------

PointCloud::PointCloud(std::vector<Vector> points, std::optional<std::vector<int>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (!points_.empty()) {
    dimension_ = points_.front().size();
    for (const auto& p : points_)
      if (p.size() != dimension_)
        throw Error(Errc::DimensionMismatch, "all points must share one dimension");
  }
  if (labels_ && labels_->size() != points_.size())
    throw Error(Errc::LengthMismatch, "labels must match the number of points");
}

PointCloud PointCloud::from_histograms(const std::vector<Histogram>& histograms,
                                       std::optional<std::vector<int>> labels) {
  std::vector<Vector> points;
  points.reserve(histograms.size());
  for (const auto& h : histograms)
    points.push_back(h.vector());
  return PointCloud(std::move(points), std::move(labels));
}

KernelSpec::KernelSpec(double h, Profile p) : profile(p), bandwidth(h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(Errc::InvalidConfig, "bandwidth must be positive");
}

// --- distances ---------------------------------------------------------------

double l1_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += std::abs(a[k] - b[k]);
  return s;
}

double squared_euclidean_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double wasserstein1_distance(std::span<const double> a, std::span<const double> b,
                             double bin_width) {
  require_same_dimension(a, b);
  if (!is_histogram(a) || !is_histogram(b))
    throw Error(Errc::InvalidHistogram, "Wasserstein1 needs normalized histograms");
  // L1 distance between running prefix sums.
  double za = 0.0, zb = 0.0, s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    za += a[k];
    zb += b[k];
    s += std::abs(za - zb);
  }
  return s * bin_width;
}

double distance(DistanceKind kind, std::span<const double> a, std::span<const double> b,
                double bin_width) {
  switch (kind) {
  case DistanceKind::L1: return l1_distance(a, b);
  case DistanceKind::SquaredEuclidean: return squared_euclidean_distance(a, b);
  case DistanceKind::Wasserstein1: return wasserstein1_distance(a, b, bin_width);
  }
  throw Error(Errc::InvalidConfig, "unknown distance kind");
}

// --- median ------------------------------------------------------------------

Vector coordinate_median(std::span<const Vector> points, std::span<const std::size_t> indices) {
  if (indices.empty())
    throw Error(Errc::EmptySet, "median of an empty set");
  const std::size_t q = points[indices.front()].size();
  const std::size_t mid = (indices.size() - 1) / 2;
  Vector result(q);
  Vector column(indices.size());
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const auto& p = points[indices[j]];
      if (p.size() != q)
        throw Error(Errc::DimensionMismatch, "median over points of differing dimension");
      column[j] = p[k];
    }
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid),
                     column.end());
    result[k] = column[mid];
  }
  return result;
}

Vector coordinate_median(std::span<const Vector> points) {
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return coordinate_median(points, all);
}

// --- density -----------------------------------------------------------------

double density_at(std::span<const double> x, const PointCloud& cloud, DistanceKind kind,
                  const KernelSpec& kernel, double bin_width) {
  double f = 0.0;
  for (const auto& xi : cloud.points())
    f += kernel.profile_value(distance(kind, x, xi, bin_width) / kernel.bandwidth);
  return f;
}

double bound_at(std::span<const double> x, std::span<const double> anchor,
                const PointCloud& cloud, DistanceKind kind, const KernelSpec& kernel,
                double bin_width) {
  const double h = kernel.bandwidth;
  double f_anchor = 0.0;
  double shift = 0.0;
  for (const auto& xi : cloud.points()) {
    const double ua = distance(kind, anchor, xi, bin_width) / h;
    const double ux = distance(kind, x, xi, bin_width) / h;
    f_anchor += kernel.profile_value(ua);
    shift += kernel.weight(ua) * (ux - ua);
  }
  return f_anchor - shift;
}

} // namespace wshift
