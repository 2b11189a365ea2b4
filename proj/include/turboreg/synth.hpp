#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "turboreg/types.hpp"

namespace turboreg {

class Rng;

struct SynthConfig {
  std::size_t n = 1000;
  double outlier_ratio = 0.9;  // in [0, 1)
  double noise_sigma = 0.005;  // meters, isotropic Gaussian on inlier targets
  double extent = 1.0;         // side of the source cube, meters
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t inlier_count() const;
};

struct SynthInstance {
  CorrespondenceSet correspondences;
  RigidTransform gt;
  std::vector<bool> inlier_mask;
};

/// Source points uniform in [−extent/2, extent/2]³; gt rotation from a uniform
/// unit quaternion and translation uniform in [−extent, extent]³. Inlier
/// targets are gt(source) plus noise redrawn until within 6σ; outlier targets
/// are uniform in the bounding box of the transformed cube. Inlier positions
/// are shuffled. Deterministic for a given config.
SynthInstance generate(const SynthConfig& config);

RigidTransform random_transform(Rng& rng, double translation_extent);

}  // namespace turboreg
