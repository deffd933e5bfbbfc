#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace servant::clustering {

using Point = std::vector<double>;

struct KMeansParams {
  int k = 1;
  int max_iters = 300;
  /// Convergence threshold on the largest per-coordinate centroid shift.
  double tol = 1e-6;
  std::uint64_t seed = 0;
  /// Divisor of the confidence metric.
  double scale = 10000.0;
  /// Independent k-means++ restarts; the lowest-inertia run is kept.
  int n_init = 20;

  /// Throws ZeroK for k < 1 and InvalidParams for the other fields.
  void validate() const;
};

struct KMeansModel {
  std::vector<Point> centroids;
  std::size_t dim = 0;
  KMeansParams params;
  /// Within-cluster sum of squared distances under nearest-centroid assignment.
  double inertia = 0.0;
  /// Inertia after each Lloyd iteration of the winning restart.
  std::vector<double> inertia_trace;

  int k() const { return static_cast<int>(centroids.size()); }
};

struct ClusterAssignment {
  int label = 0;
  double distance = 0.0;
};

/// Lloyd iterations from a single seeded k-means++ start.
struct LloydRun {
  std::vector<Point> centroids;
  double inertia = 0.0;
  std::vector<double> inertia_trace;
  int iterations = 0;
};

struct FitReport {
  KMeansModel model;
  std::vector<LloydRun> runs;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Seeded k-means++ seeding: first centre uniform, the rest drawn with
/// probability proportional to squared distance from the chosen set.
std::vector<Point> kmeans_plus_plus(std::span<const Point> points, int k, std::uint64_t seed);

/// Lloyd's algorithm from the given initial centroids. Empty clusters take
/// the point farthest from its own centroid. On convergence, single-point
/// transfers between clusters are tried; if any lowers the inertia, Lloyd
/// resumes from the improved partition.
LloydRun lloyd(std::span<const Point> points, std::vector<Point> centroids,
               const KMeansParams& params);

/// Throws TooFewPoints, DimensionMismatch or ZeroK.
KMeansModel fit(std::span<const Point> points, const KMeansParams& params);

/// fit() that also returns every restart, for diagnostics and tests.
FitReport fit_detailed(std::span<const Point> points, const KMeansParams& params);

/// Nearest centroid; ties go to the lowest index.
ClusterAssignment predict(const KMeansModel& model, std::span<const double> point);

/// Scaled-distance confidence, 100 - distance / scale, clamped to [0, 100].
double confidence(double distance, double scale = 10000.0);

}  // namespace servant::clustering
