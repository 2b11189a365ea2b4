#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "turboreg/types.hpp"

namespace turboreg {

/// Least-squares rigid fit mapping `source` onto `target` (Kabsch/SVD with
/// reflection correction). Throws InputError on length mismatch or fewer than
/// 3 points, DegenerateConfiguration when the centered source points are
/// collinear or coincident.
RigidTransform kabsch(std::span<const Point3> source, std::span<const Point3> target);

/// Same as kabsch() but reports degeneracy as nullopt.
std::optional<RigidTransform> try_kabsch(std::span<const Point3> source,
                                         std::span<const Point3> target);

struct InlierSet {
  std::size_t count = 0;
  std::vector<std::size_t> indices;
};

/// Correspondences with ‖t(x_i) − y_i‖ ≤ threshold, indices ascending.
InlierSet count_inliers(const RigidTransform& t, const CorrespondenceSet& corr, double threshold);

/// Count only; no allocation.
std::size_t inlier_count(const RigidTransform& t, const CorrespondenceSet& corr, double threshold);

/// Full pipeline: compatibility graph, SC² weights (ordered when
/// params.graph_mode is O2), pivot-guided search, one Kabsch hypothesis per
/// TurboClique, and inlier-count model selection. Ties on inlier count go to
/// the larger aggregated weight, then the lexicographically smaller clique.
/// When no usable clique exists the result has success = false.
RegistrationResult estimate(const CorrespondenceSet& corr, const EstimatorParams& params);

/// Classic 3-point RANSAC, deterministic for a given seed.
RegistrationResult ransac_baseline(const CorrespondenceSet& corr, std::size_t iterations,
                                   double inlier_threshold, std::uint64_t seed);

}  // namespace turboreg
