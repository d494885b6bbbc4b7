#include "crcond/synth.hpp"

#include "crcond/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace crcond {

namespace {

void add_noise(Matrix& points, const NoiseParams& noise) {
  Rng rng(noise.seed);
  if (noise.std == 0.0) return;
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = 0; j < points.cols(); ++j) {
      points(i, j) += noise.std * rng.gaussian();
    }
  }
}

IntVector split_labels(Index n0, Index n1) {
  IntVector labels(n0 + n1);
  labels.head(n0).setZero();
  labels.tail(n1).setConstant(1);
  return labels;
}

}  // namespace

Dataset make_circles(int n, const NoiseParams& noise, double factor) {
  if (n < 0) throw std::invalid_argument("make_circles: n must be non-negative");
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument("make_circles: factor must be in (0, 1), got " +
                                std::to_string(factor));
  }
  if (!(noise.std >= 0.0) || !std::isfinite(noise.std)) {
    throw std::invalid_argument("make_circles: noise std must be finite and >= 0");
  }
  const Index n0 = (n + 1) / 2;
  const Index n1 = n / 2;
  Matrix points(n0 + n1, 2);
  for (Index j = 0; j < n0; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(n0);
    points(j, 0) = std::cos(theta);
    points(j, 1) = std::sin(theta);
  }
  for (Index j = 0; j < n1; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(n1);
    points(n0 + j, 0) = factor * std::cos(theta);
    points(n0 + j, 1) = factor * std::sin(theta);
  }
  add_noise(points, noise);
  return make_dataset(std::move(points), split_labels(n0, n1));
}

Dataset make_moons(int n, const NoiseParams& noise) {
  if (n < 0) throw std::invalid_argument("make_moons: n must be non-negative");
  if (!(noise.std >= 0.0) || !std::isfinite(noise.std)) {
    throw std::invalid_argument("make_moons: noise std must be finite and >= 0");
  }
  const Index n0 = (n + 1) / 2;
  const Index n1 = n / 2;
  Matrix points(n0 + n1, 2);
  const auto arc_t = [](Index j, Index m) {
    return m > 1 ? std::numbers::pi * static_cast<double>(j) /
                       static_cast<double>(m - 1)
                 : 0.0;
  };
  for (Index j = 0; j < n0; ++j) {
    const double t = arc_t(j, n0);
    points(j, 0) = std::cos(t);
    points(j, 1) = std::sin(t);
  }
  for (Index j = 0; j < n1; ++j) {
    const double t = arc_t(j, n1);
    points(n0 + j, 0) = 1.0 - std::cos(t);
    points(n0 + j, 1) = 0.5 - std::sin(t);
  }
  add_noise(points, noise);
  return make_dataset(std::move(points), split_labels(n0, n1));
}

double preset_noise_std(std::string_view preset) {
  if (preset == "clear") return 0.02;
  if (preset == "touching") return 0.08;
  if (preset == "noisy") return 0.15;
  throw std::invalid_argument("unknown noise preset '" + std::string(preset) +
                              "' (expected clear, touching, or noisy)");
}

}  // namespace crcond
