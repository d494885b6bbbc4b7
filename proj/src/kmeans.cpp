#include "crcond/kmeans.hpp"

#include "crcond/parallel.hpp"
#include "crcond/rng.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace crcond {

namespace {

void check_shapes(const Matrix& points, const Matrix& centers) {
  if (centers.rows() < 1) {
    throw std::invalid_argument("assign_nearest: centers must be non-empty");
  }
  if (points.cols() != centers.cols()) {
    throw std::invalid_argument(
        "assign_nearest: dimension mismatch (points " +
        std::to_string(points.cols()) + "-d, centers " +
        std::to_string(centers.cols()) + "-d)");
  }
}

// Nearest center per point plus the squared distance; lowest index on ties.
void assign_with_distance(const Matrix& points, const Matrix& centers,
                          IntVector& assign, Vector& dist2) {
  const Index n = points.rows();
  const Index m = centers.rows();
  assign.resize(n);
  dist2.resize(n);
  parallel_for_each(n, [&](std::ptrdiff_t i) {
    double best = std::numeric_limits<double>::infinity();
    Index best_j = 0;
    for (Index j = 0; j < m; ++j) {
      const double d = (points.row(i) - centers.row(j)).squaredNorm();
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    assign[i] = static_cast<int>(best_j);
    dist2[i] = best;
  });
}

Matrix init_plusplus(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with chosen centers.
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    d2 = d2.cwiseMin(
        (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

Matrix init_random(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Matrix centers(k, points.cols());
  for (int c = 0; c < k; ++c) {
    const Index j = c + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - c)));
    std::swap(idx[static_cast<std::size_t>(c)], idx[static_cast<std::size_t>(j)]);
    centers.row(c) = points.row(idx[static_cast<std::size_t>(c)]);
  }
  return centers;
}

}  // namespace

IntVector assign_nearest(const Matrix& points, const Matrix& centers) {
  check_shapes(points, centers);
  IntVector assign;
  Vector dist2;
  assign_with_distance(points, centers, assign, dist2);
  return assign;
}

KMeansResult kmeans_fit_detailed(const Matrix& points, const KMeansConfig& cfg) {
  const Index n = points.rows();
  if (n < 1) throw std::invalid_argument("kmeans_fit: points must be non-empty");
  if (cfg.k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
  if (cfg.k > n) {
    throw std::invalid_argument("kmeans_fit: k (" + std::to_string(cfg.k) +
                                ") exceeds point count (" + std::to_string(n) + ")");
  }
  if (cfg.max_iter < 1) throw std::invalid_argument("kmeans_fit: max_iter must be >= 1");
  if (!(cfg.tol >= 0.0)) throw std::invalid_argument("kmeans_fit: tol must be >= 0");

  Rng rng(cfg.seed);
  Matrix centers = cfg.init == KMeansInit::plusplus
                       ? init_plusplus(points, cfg.k, rng)
                       : init_random(points, cfg.k, rng);

  KMeansResult result;
  IntVector assign;
  Vector dist2;
  const Index d = points.cols();
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    assign_with_distance(points, centers, assign, dist2);
    result.wcss_trace.push_back(dist2.sum());
    result.iterations = iter + 1;

    Matrix sums = Matrix::Zero(cfg.k, d);
    IntVector counts = IntVector::Zero(cfg.k);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += points.row(i);
      counts[assign[i]] += 1;
    }
    Matrix next = centers;
    for (int j = 0; j < cfg.k; ++j) {
      if (counts[j] > 0) next.row(j) = sums.row(j) / counts[j];
    }
    // Re-seed any empty cluster to the point farthest from its nearest
    // non-empty centroid, cascading so two empties never claim one point.
    bool has_empty = false;
    for (int j = 0; j < cfg.k; ++j) has_empty = has_empty || counts[j] == 0;
    if (has_empty) {
      std::vector<char> taken(static_cast<std::size_t>(n), 0);
      Matrix live(cfg.k, d);
      Index live_count = 0;
      for (int j = 0; j < cfg.k; ++j) {
        if (counts[j] > 0) live.row(live_count++) = next.row(j);
      }
      for (int j = 0; j < cfg.k; ++j) {
        if (counts[j] > 0) continue;
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          if (taken[static_cast<std::size_t>(i)]) continue;
          double nd = std::numeric_limits<double>::infinity();
          for (Index l = 0; l < live_count; ++l) {
            nd = std::min(nd, (points.row(i) - live.row(l)).squaredNorm());
          }
          if (nd > far_d) {
            far_d = nd;
            far = i;
          }
        }
        taken[static_cast<std::size_t>(far)] = 1;
        next.row(j) = points.row(far);
        if (live_count < cfg.k) live.row(live_count++) = points.row(far);
      }
    }

    double movement = 0.0;
    for (int j = 0; j < cfg.k; ++j) {
      movement += (next.row(j) - centers.row(j)).norm();
    }
    centers = next;
    if (movement < cfg.tol) break;
  }
  result.centers = std::move(centers);
  return result;
}

Matrix kmeans_fit(const Matrix& points, const KMeansConfig& cfg) {
  return kmeans_fit_detailed(points, cfg).centers;
}

}  // namespace crcond
