#pragma once

#include "crcond/dataset.hpp"

#include <cstdint>
#include <string_view>

namespace crcond {

/// Isotropic Gaussian perturbation applied per coordinate, drawn from the
/// seeded portable generator in rng.hpp.
struct NoiseParams {
  double std = 0.0;
  std::uint64_t seed = 0;
};

/// Two concentric rings. ceil(n/2) class-0 points on the unit circle at
/// angles 2*pi*j/m, floor(n/2) class-1 points on the radius-`factor` circle,
/// noise added independently per coordinate in row order.
Dataset make_circles(int n, const NoiseParams& noise, double factor = 0.5);

/// Two interleaved half-circle arcs: class 0 is (cos t, sin t) and class 1 is
/// (1 - cos t, 0.5 - sin t) for t evenly spaced over [0, pi] inclusive.
Dataset make_moons(int n, const NoiseParams& noise);

/// Noise presets: clear -> 0.02, touching -> 0.08, noisy -> 0.15.
/// Throws std::invalid_argument for unknown names.
double preset_noise_std(std::string_view preset);

}  // namespace crcond
