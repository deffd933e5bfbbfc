#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "servant/kmeans.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace servant;
using namespace servant::clustering;
using testing::error_of;

namespace {

KMeansParams with_k(int k, std::uint64_t seed = 0) {
  KMeansParams p;
  p.k = k;
  p.seed = seed;
  return p;
}

bool non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1]) return false;
  return true;
}

std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t dim, double spread) {
  std::vector<Point> pts(n, Point(dim));
  for (auto& p : pts)
    for (double& v : p) v = rng.uniform(-spread, spread);
  return pts;
}

}  // namespace

TEST_CASE("k=1 centroid is the mean") {
  const std::vector<Point> pts = {{0, 0}, {2, 0}, {4, 0}};
  const auto m = fit(pts, with_k(1));
  REQUIRE(m.k() == 1);
  CHECK(m.centroids[0] == Point{2, 0});
  CHECK(m.inertia == doctest::Approx(8.0));
  CHECK(m.dim == 2);
}

TEST_CASE("k=2 on two vertical pairs finds the global optimum") {
  const std::vector<Point> pts = {{0, 0}, {0, 1}, {10, 0}, {10, 1}};
  CHECK(oracle::best_partition_inertia(pts, 2) == doctest::Approx(1.0));
  const auto m = fit(pts, with_k(2, 3));
  auto c = m.centroids;
  std::sort(c.begin(), c.end());
  CHECK(c[0] == Point{0, 0.5});
  CHECK(c[1] == Point{10, 0.5});
  CHECK(m.inertia == doctest::Approx(1.0));
}

TEST_CASE("k=N makes every point its own centroid") {
  const std::vector<Point> pts = {{1, 1}, {5, -2}, {3, 7}, {-4, 0}};
  const auto m = fit(pts, with_k(4));
  CHECK(m.inertia == 0.0);
  for (const auto& p : pts) CHECK(predict(m, p).distance == 0.0);
}

TEST_CASE("fit validates its inputs") {
  const std::vector<Point> pts = {{0, 0}, {1, 1}};
  CHECK(error_of([&] { fit(pts, with_k(3)); }) == ErrorCode::TooFewPoints);
  CHECK(error_of([&] { fit(pts, with_k(0)); }) == ErrorCode::ZeroK);
  const std::vector<Point> ragged = {{0, 0}, {1}};
  CHECK(error_of([&] { fit(ragged, with_k(1)); }) == ErrorCode::DimensionMismatch);
  KMeansParams bad = with_k(1);
  bad.scale = 0.0;
  CHECK(error_of([&] { fit(pts, bad); }) == ErrorCode::InvalidParams);
}

TEST_CASE("fit is deterministic for a fixed seed") {
  Rng rng(21);
  const auto pts = random_points(rng, 60, 5, 10.0);
  const auto a = fit(pts, with_k(4, 99));
  const auto b = fit(pts, with_k(4, 99));
  CHECK(a.centroids == b.centroids);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("inertia never increases across Lloyd iterations") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 5 + static_cast<std::size_t>(rng.below(60));
    const auto pts = random_points(rng, n, 1 + rng.below(4), 5.0);
    const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(n, 6)));
    const auto report = fit_detailed(pts, with_k(k, static_cast<std::uint64_t>(trial)));
    for (const auto& run : report.runs) {
      CHECK(non_increasing(run.inertia_trace));
      CHECK(run.inertia <= run.inertia_trace.back());
    }
  }
}

TEST_CASE("duplicate points force empty-cluster repair without breaking invariants") {
  // Three distinct values but k=4: one centroid must end up duplicated.
  const std::vector<Point> pts = {{1}, {1}, {1}, {5}, {5}, {9}};
  const auto report = fit_detailed(pts, with_k(4, 2));
  CHECK(report.model.k() == 4);
  CHECK(report.model.inertia == 0.0);
  for (const auto& run : report.runs) CHECK(non_increasing(run.inertia_trace));
}

TEST_CASE("every training point is nearest to its own centroid") {
  Rng rng(4);
  const auto pts = random_points(rng, 80, 3, 20.0);
  const auto m = fit(pts, with_k(5, 1));
  for (const auto& p : pts) {
    const auto hit = predict(m, p);
    for (const auto& c : m.centroids) CHECK(hit.distance <= std::sqrt(squared_distance(p, c)));
  }
}

TEST_CASE("predict picks the nearest centroid, lowest index on ties") {
  KMeansModel m;
  m.centroids = {{0, 0}, {2, 0}, {0, 5}};
  m.dim = 2;

  const auto exact = predict(m, Point{2, 0});
  CHECK(exact.label == 1);
  CHECK(exact.distance == 0.0);

  const auto tie = predict(m, Point{1, 0});
  CHECK(tie.label == 0);
  CHECK(tie.distance == 1.0);

  CHECK(error_of([&] { predict(m, Point{1, 2, 3}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("predict agrees with an exhaustive scan on 50 random points") {
  Rng rng(50);
  const auto pts = random_points(rng, 40, 4, 3.0);
  const auto m = fit(pts, with_k(3, 5));
  const auto queries = random_points(rng, 50, 4, 4.0);
  for (const auto& q : queries) {
    const auto got = predict(m, q);
    const auto want = oracle::nearest_centroid(m.centroids, q);
    CHECK(got.label == want.label);
    CHECK(got.distance == doctest::Approx(want.distance).epsilon(1e-14));
  }
}

TEST_CASE("confidence law") {
  CHECK(confidence(0.0, 10000.0) == 100.0);
  CHECK(confidence(500000.0, 10000.0) == 50.0);
  CHECK(confidence(2000000.0, 10000.0) == 0.0);
  CHECK(confidence(1e6, 10000.0) == 0.0);
  CHECK(confidence(1e-6, 10000.0) < 100.0);

  double prev = 100.0;
  for (int i = 0; i <= 1000; ++i) {
    const double c = confidence(i * 1500.0, 10000.0);
    CHECK(c <= prev);
    CHECK((c >= 0.0 && c <= 100.0));
    prev = c;
  }
}

TEST_CASE("Lloyd stays within 5% of optimal on small random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = 2 + static_cast<std::size_t>(rng.below(7));
    const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(n, 3)));
    const auto pts = random_points(rng, n, 2, 10.0);
    const double best = oracle::best_partition_inertia(pts, k);
    const auto m = fit(pts, with_k(k, static_cast<std::uint64_t>(trial)));
    CHECK(m.inertia <= 1.05 * best + 1e-12);
  }
}

TEST_CASE("no single point can change cluster and lower the inertia") {
  Rng rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 4 + static_cast<std::size_t>(rng.below(30));
    const auto pts = random_points(rng, n, 2, 10.0);
    const int k = 2 + static_cast<int>(rng.below(3));
    const auto m = fit(pts, with_k(k, static_cast<std::uint64_t>(trial)));

    std::vector<int> label(n);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
      label[i] = oracle::nearest_centroid(m.centroids, pts[i]).label;
      members[static_cast<std::size_t>(label[i])].push_back(i);
    }
    auto sse_of = [&](const std::vector<std::size_t>& idx) {
      if (idx.empty()) return 0.0;
      Point mean(2, 0.0);
      for (auto i : idx)
        for (int d = 0; d < 2; ++d) mean[static_cast<std::size_t>(d)] += pts[i][static_cast<std::size_t>(d)];
      for (double& v : mean) v /= static_cast<double>(idx.size());
      double s = 0.0;
      for (auto i : idx) s += oracle::sq_dist(pts[i], mean);
      return s;
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(label[i]);
      if (members[a].size() < 2) continue;
      auto without = members[a];
      without.erase(std::find(without.begin(), without.end(), i));
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (b == a) continue;
        auto with = members[b];
        with.push_back(i);
        const double before = sse_of(members[a]) + sse_of(members[b]);
        const double after = sse_of(without) + sse_of(with);
        CHECK(after >= before - 1e-9 * before);
      }
    }
  }
}
