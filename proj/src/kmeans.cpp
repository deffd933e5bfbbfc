#include "servant/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "servant/error.hpp"
#include "servant/random.hpp"

namespace servant::clustering {

void KMeansParams::validate() const {
  if (k < 1) throw Error(ErrorCode::ZeroK, "k must be at least 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidParams, "max_iters must be at least 1");
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be non-negative");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParams, "scale must be positive");
  if (n_init < 1) throw Error(ErrorCode::InvalidParams, "n_init must be at least 1");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

namespace {

struct Nearest {
  int label;
  double sq_dist;
};

Nearest nearest(std::span<const Point> centroids, std::span<const double> p) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best.sq_dist) best = {static_cast<int>(c), d};
  }
  return best;
}

void check_points(std::span<const Point> points, int k) {
  if (k < 1) throw Error(ErrorCode::ZeroK, "k must be at least 1");
  if (points.size() < static_cast<std::size_t>(k))
    throw Error(ErrorCode::TooFewPoints, std::to_string(points.size()) + " points for k=" +
                                             std::to_string(k));
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "points must have dimension >= 1");
  for (const auto& p : points) {
    if (p.size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "points have inconsistent dimensions (" +
                                                    std::to_string(dim) + " vs " +
                                                    std::to_string(p.size()) + ")");
  }
}

double assignment_inertia(std::span<const Point> points, std::span<const Point> centroids,
                          std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    total += squared_distance(points[i], centroids[static_cast<std::size_t>(labels[i])]);
  return total;
}

// Single-point transfers: moves any point whose relocation to another
// cluster lowers the total within-cluster SSE, updating both means in place.
// Stops when a full sweep moves nothing. Returns whether anything moved.
bool transfer_refine(std::span<const Point> points, std::vector<Point>& centroids) {
  const std::size_t n = points.size();
  const std::size_t k = centroids.size();
  const std::size_t dim = points.front().size();
  std::vector<int> labels(n);
  std::vector<double> counts(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = nearest(centroids, points[i]).label;
    counts[static_cast<std::size_t>(labels[i])] += 1.0;
  }

  bool any = false;
  for (std::size_t sweep = 0; sweep < n * k + 1; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(labels[i]);
      if (counts[a] < 2.0) continue;
      const double leave = counts[a] / (counts[a] - 1.0) * squared_distance(points[i], centroids[a]);
      std::size_t to = a;
      double gain = 1e-12 * leave;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double join = counts[b] / (counts[b] + 1.0) * squared_distance(points[i], centroids[b]);
        if (leave - join > gain) {
          gain = leave - join;
          to = b;
        }
      }
      if (to == a) continue;
      for (std::size_t d = 0; d < dim; ++d) {
        centroids[a][d] = (centroids[a][d] * counts[a] - points[i][d]) / (counts[a] - 1.0);
        centroids[to][d] = (centroids[to][d] * counts[to] + points[i][d]) / (counts[to] + 1.0);
      }
      counts[a] -= 1.0;
      counts[to] += 1.0;
      labels[i] = static_cast<int>(to);
      moved = true;
    }
    if (!moved) break;
    any = true;
  }
  if (!any) return false;

  // Rebuild the means the way a Lloyd update would, shedding drift from the
  // incremental updates.
  for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d) centroids[static_cast<std::size_t>(labels[i])][d] += points[i][d];
  for (std::size_t c = 0; c < k; ++c) {
    const double inv = 1.0 / counts[c];
    for (double& v : centroids[c]) v *= inv;
  }
  return true;
}

}  // namespace

std::vector<Point> kmeans_plus_plus(std::span<const Point> points, int k, std::uint64_t seed) {
  check_points(points, k);
  Rng rng(seed);
  std::vector<Point> centres;
  centres.reserve(static_cast<std::size_t>(k));
  centres.push_back(points[rng.below(points.size())]);

  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centres[0]);

  while (centres.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double d : d2) total += d;

    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      // Guard against rounding landing the walk on an already chosen point.
      while (d2[pick] == 0.0 && pick > 0) --pick;
    } else {
      // Every point coincides with a centre; duplicates are unavoidable.
      pick = rng.below(points.size());
    }

    centres.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i)
      d2[i] = std::min(d2[i], squared_distance(points[i], centres.back()));
  }
  return centres;
}

LloydRun lloyd(std::span<const Point> points, std::vector<Point> centroids,
               const KMeansParams& params) {
  params.validate();
  check_points(points, static_cast<int>(centroids.size()));
  const std::size_t k = centroids.size();
  const std::size_t dim = points.front().size();
  const std::size_t n = points.size();

  LloydRun run;
  std::vector<int> labels(n, 0);
  std::vector<std::size_t> counts(k);
  std::vector<Point> sums(k, Point(dim));

  // One assignment + update pass; returns the largest centroid shift.
  auto step = [&] {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = nearest(centroids, points[i]).label;
      ++counts[static_cast<std::size_t>(labels[i])];
    }

    // Empty cluster: seize the point farthest from its centroid, taken only
    // from clusters that keep at least one member.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        if (counts[own] < 2) continue;
        const double d = squared_distance(points[i], centroids[own]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;  // unreachable while n >= k
      --counts[static_cast<std::size_t>(labels[far])];
      labels[far] = static_cast<int>(c);
      counts[c] = 1;
    }

    for (auto& s : sums) std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[static_cast<std::size_t>(labels[i])];
      for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t d = 0; d < dim; ++d) {
        const double updated = sums[c][d] * inv;
        shift = std::max(shift, std::abs(updated - centroids[c][d]));
        centroids[c][d] = updated;
      }
    }
    run.inertia_trace.push_back(assignment_inertia(points, centroids, labels));
    return shift;
  };

  auto nearest_inertia = [&](std::span<const Point> cs) {
    double total = 0.0;
    for (const auto& p : points) total += nearest(cs, p).sq_dist;
    return total;
  };

  while (run.iterations < params.max_iters) {
    ++run.iterations;
    if (step() > params.tol) continue;

    // Lloyd has converged. Single-point transfers can still escape the
    // local minimum; resume Lloyd from there if they help.
    std::vector<Point> refined = centroids;
    if (!transfer_refine(points, refined)) break;
    if (!(nearest_inertia(refined) < nearest_inertia(centroids))) break;
    centroids = std::move(refined);
  }

  run.inertia = nearest_inertia(centroids);
  run.centroids = std::move(centroids);
  return run;
}

FitReport fit_detailed(std::span<const Point> points, const KMeansParams& params) {
  params.validate();
  check_points(points, params.k);

  FitReport report;
  std::size_t best = 0;
  for (int r = 0; r < params.n_init; ++r) {
    // Restart seeds derived from the user seed; restart 0 uses it verbatim.
    const std::uint64_t seed = params.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r);
    report.runs.push_back(lloyd(points, kmeans_plus_plus(points, params.k, seed), params));
    if (report.runs.back().inertia < report.runs[best].inertia) best = report.runs.size() - 1;
  }

  const LloydRun& win = report.runs[best];
  report.model.centroids = win.centroids;
  report.model.dim = points.front().size();
  report.model.params = params;
  report.model.inertia = win.inertia;
  report.model.inertia_trace = win.inertia_trace;
  return report;
}

KMeansModel fit(std::span<const Point> points, const KMeansParams& params) {
  return fit_detailed(points, params).model;
}

ClusterAssignment predict(const KMeansModel& model, std::span<const double> point) {
  if (point.size() != model.dim)
    throw Error(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(point.size()) +
                                                  ", model expects " + std::to_string(model.dim));
  const Nearest n = nearest(model.centroids, point);
  return {n.label, std::sqrt(n.sq_dist)};
}

double confidence(double distance, double scale) {
  const double raw = 100.0 - distance / scale;
  return std::clamp(raw, 0.0, 100.0);
}

}  // namespace servant::clustering
