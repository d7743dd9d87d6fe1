#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hypermp/hypergraph.hpp"

namespace hypermp {

struct KMeansOptions {
  std::size_t max_iters = 100;
  double tolerance = 1e-6;  // relative inertia change between Lloyd iterations
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

/// One clustering of the rows of a point matrix.
struct KMeansSolution {
  std::size_t m = 0;
  std::vector<std::size_t> assignments;
  FeatureMatrix centroids;
  double inertia = 0.0;
  /// Inertia after every assignment step of the winning run.
  std::vector<double> inertia_trace;
};

/// k-means++ seeding, Lloyd iterations, best of `restarts` runs. An empty
/// cluster takes the point farthest from its current centroid. Throws
/// InvalidArgument if m is 0 or exceeds the number of points.
KMeansSolution kmeans(const FeatureMatrix& points, std::size_t m, const KMeansOptions& opts);

/// Lloyd iterations from the given initial centroids.
KMeansSolution kmeans_from(const FeatureMatrix& points, FeatureMatrix centroids,
                           const KMeansOptions& opts);

/// Result of the cluster-count sweep m = 1..max_clusters.
struct KMeansResult {
  std::size_t m = 1;
  std::vector<std::size_t> assignments;
  std::vector<double> inertia_curve;  // inertia_curve[m-1]
};

struct ElbowOptions {
  /// Below this relative drop from m=1 to m=2 the curve is treated as flat.
  double min_relative_drop = 0.1;
  /// Whether m = 1 (no split) may be chosen.
  bool allow_single_cluster = true;
};

/// Discrete-curvature elbow: m maximizing I(m-1) - 2 I(m) + I(m+1) over the
/// interior of the curve (ties to the smaller m); m = 1 when the relative
/// drop from I(1) to I(2) is below `min_relative_drop`; m = 2 when the curve
/// has only two points and the drop is large enough.
std::size_t elbow_choice(const std::vector<double>& inertia_curve, const ElbowOptions& opts = {});

/// Runs kmeans for m = 1..max_clusters and picks m with elbow_choice. Each m
/// >= 2 is also warm-started from the (m-1) solution plus its farthest point,
/// so the inertia curve is non-increasing.
KMeansResult kmeans_sweep(const FeatureMatrix& points, std::size_t max_clusters,
                          const KMeansOptions& opts, const ElbowOptions& elbow = {});

}  // namespace hypermp
