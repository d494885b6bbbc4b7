#pragma once

#include "crcond/types.hpp"

#include <cstdint>
#include <vector>

namespace crcond {

enum class KMeansInit { plusplus, random };

struct KMeansConfig {
  int k = 1;
  int max_iter = 300;
  double tol = 1e-6;  // threshold on total center movement per iteration
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::plusplus;
};

/// Nearest center index per point (Euclidean). Ties go to the lowest center
/// index. Throws on empty centers or dimension mismatch.
IntVector assign_nearest(const Matrix& points, const Matrix& centers);

struct KMeansResult {
  Matrix centers;                  // k x D
  int iterations = 0;
  std::vector<double> wcss_trace;  // one entry per Lloyd iteration, measured
                                   // after assignment with the centers used
};

/// Lloyd iteration from seeded k-means++ (or random) starting centers.
/// Clusters that lose all points are re-seeded to the point farthest from its
/// nearest center, so k is preserved. Deterministic per seed and thread count.
KMeansResult kmeans_fit_detailed(const Matrix& points, const KMeansConfig& cfg);

Matrix kmeans_fit(const Matrix& points, const KMeansConfig& cfg);

}  // namespace crcond
