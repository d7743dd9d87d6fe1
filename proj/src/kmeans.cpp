#include "hypermp/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypermp/error.hpp"
#include "hypermp/rng.hpp"

namespace hypermp {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

FeatureMatrix plus_plus_seeds(const FeatureMatrix& points, std::size_t m, Rng& rng) {
  const auto n = points.rows;
  FeatureMatrix centroids(m, points.cols);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng.below(n);
  std::copy_n(points.row(first).begin(), points.cols, centroids.row(0).begin());
  for (std::size_t k = 1; k < m; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], sq_dist(points.row(i), centroids.row(k - 1)));
      total += best[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += best[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    std::copy_n(points.row(pick).begin(), points.cols, centroids.row(k).begin());
  }
  return centroids;
}

double assign(const FeatureMatrix& points, const FeatureMatrix& centroids,
              std::vector<std::size_t>& assignments, std::vector<double>& cost) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i) {
    std::size_t best_k = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.rows; ++k) {
      double d = sq_dist(points.row(i), centroids.row(k));
      if (d < best_d) {
        best_d = d;
        best_k = k;
      }
    }
    assignments[i] = best_k;
    cost[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Recomputes centroids; an empty cluster receives the point farthest from its
// centroid (taken from a cluster with at least two points).
void update(const FeatureMatrix& points, FeatureMatrix& centroids,
            std::vector<std::size_t>& assignments, std::vector<double>& cost) {
  const auto m = centroids.rows;
  std::vector<std::size_t> counts(m, 0);
  for (auto a : assignments) ++counts[a];
  for (std::size_t k = 0; k < m; ++k) {
    if (counts[k] > 0) continue;
    std::size_t far = points.rows;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows; ++i) {
      if (counts[assignments[i]] > 1 && cost[i] > far_d) {
        far_d = cost[i];
        far = i;
      }
    }
    if (far == points.rows) break;
    --counts[assignments[far]];
    assignments[far] = k;
    cost[far] = 0.0;
    counts[k] = 1;
  }
  std::fill(centroids.values.begin(), centroids.values.end(), 0.0);
  for (std::size_t i = 0; i < points.rows; ++i) {
    auto c = centroids.row(assignments[i]);
    auto p = points.row(i);
    for (std::size_t j = 0; j < points.cols; ++j) c[j] += p[j];
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (counts[k] == 0) continue;
    for (auto& x : centroids.row(k)) x /= static_cast<double>(counts[k]);
  }
}

double inertia_of(const FeatureMatrix& points, const FeatureMatrix& centroids,
                  const std::vector<std::size_t>& assignments) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i) {
    s += sq_dist(points.row(i), centroids.row(assignments[i]));
  }
  return s;
}

}  // namespace

KMeansSolution kmeans_from(const FeatureMatrix& points, FeatureMatrix centroids,
                           const KMeansOptions& opts) {
  KMeansSolution sol;
  sol.m = centroids.rows;
  sol.assignments.assign(points.rows, 0);
  std::vector<double> cost(points.rows, 0.0);
  double previous = assign(points, centroids, sol.assignments, cost);
  sol.inertia_trace.push_back(previous);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    auto before = sol.assignments;
    update(points, centroids, sol.assignments, cost);
    double current = assign(points, centroids, sol.assignments, cost);
    sol.inertia_trace.push_back(current);
    bool unchanged = before == sol.assignments;
    bool small = previous <= 0.0 || (previous - current) <= opts.tolerance * previous;
    previous = current;
    if (unchanged || small) break;
  }
  // Final centroids are the means of the final assignment.
  update(points, centroids, sol.assignments, cost);
  sol.inertia = inertia_of(points, centroids, sol.assignments);
  sol.centroids = std::move(centroids);
  return sol;
}

KMeansSolution kmeans(const FeatureMatrix& points, std::size_t m, const KMeansOptions& opts) {
  if (m == 0) throw InvalidArgument("kmeans needs m >= 1");
  if (m > points.rows) {
    throw InvalidArgument("kmeans: m=" + std::to_string(m) + " exceeds the number of points " +
                          std::to_string(points.rows));
  }
  Rng rng(opts.seed);
  KMeansSolution best;
  best.inertia = std::numeric_limits<double>::infinity();
  const auto runs = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    auto sol = kmeans_from(points, plus_plus_seeds(points, m, rng), opts);
    if (sol.inertia < best.inertia) best = std::move(sol);
  }
  return best;
}

std::size_t elbow_choice(const std::vector<double>& curve, const ElbowOptions& opts) {
  if (curve.empty()) throw InvalidArgument("elbow_choice needs a non-empty inertia curve");
  if (curve.size() == 1) return 1;
  bool flat = curve[0] <= 0.0 || (curve[0] - curve[1]) < opts.min_relative_drop * curve[0];
  if (flat && opts.allow_single_cluster) return 1;
  if (curve.size() == 2) return 2;
  std::size_t best_m = 2;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 2; m + 1 <= curve.size(); ++m) {
    double second = curve[m - 2] - 2.0 * curve[m - 1] + curve[m];
    if (second > best) {
      best = second;
      best_m = m;
    }
  }
  return best_m;
}

KMeansResult kmeans_sweep(const FeatureMatrix& points, std::size_t max_clusters,
                          const KMeansOptions& opts, const ElbowOptions& elbow) {
  if (points.rows == 0) throw InvalidArgument("kmeans_sweep needs at least one point");
  max_clusters = std::min(max_clusters, points.rows);
  std::vector<KMeansSolution> solutions;
  KMeansResult result;
  for (std::size_t m = 1; m <= max_clusters; ++m) {
    KMeansOptions run = opts;
    run.seed = derive_seed(opts.seed, m);
    auto sol = kmeans(points, m, run);
    if (m >= 2) {
      const auto& prev = solutions.back();
      // Warm start: previous centroids plus the point farthest from them.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.rows; ++i) {
        double d = sq_dist(points.row(i), prev.centroids.row(prev.assignments[i]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      FeatureMatrix init(m, points.cols);
      std::copy(prev.centroids.values.begin(), prev.centroids.values.end(), init.values.begin());
      std::copy_n(points.row(far).begin(), points.cols, init.row(m - 1).begin());
      auto warm = kmeans_from(points, std::move(init), run);
      if (warm.inertia < sol.inertia) sol = std::move(warm);
    }
    result.inertia_curve.push_back(sol.inertia);
    solutions.push_back(std::move(sol));
  }
  result.m = elbow_choice(result.inertia_curve, elbow);
  result.assignments = solutions[result.m - 1].assignments;
  return result;
}

}  // namespace hypermp
