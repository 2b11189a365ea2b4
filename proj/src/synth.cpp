#include "turboreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Geometry>

#include "turboreg/random.hpp"

namespace turboreg {

void SynthConfig::validate() const {
  if (n < CorrespondenceSet::kMinSize) throw InputError("synthetic instance needs n ≥ 3");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0)) {
    throw InputError("outlier ratio must lie in [0, 1)");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InputError("noise sigma must be nonnegative");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InputError("extent must be positive");
  if (inlier_count() == 0) throw InputError("outlier ratio leaves no inliers");
}

std::size_t SynthConfig::inlier_count() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - outlier_ratio)));
}

RigidTransform random_transform(Rng& rng, double translation_extent) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  const double u3 = rng.uniform01();
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2),
                       a * std::cos(two_pi * u2), b * std::sin(two_pi * u3));
  q.normalize();
  const Point3 t(rng.uniform(-translation_extent, translation_extent),
                 rng.uniform(-translation_extent, translation_extent),
                 rng.uniform(-translation_extent, translation_extent));
  return RigidTransform::from_projected(q.toRotationMatrix(), t);
}

SynthInstance generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const RigidTransform gt = random_transform(rng, config.extent);
  const double half = 0.5 * config.extent;

  // Bounding box of the transformed source cube.
  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = -lo;
  for (int corner = 0; corner < 8; ++corner) {
    const Point3 c((corner & 1) ? half : -half, (corner & 2) ? half : -half,
                   (corner & 4) ? half : -half);
    const Point3 p = gt(c);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  const std::size_t n = config.n;
  const std::size_t inliers = config.inlier_count();
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(inliers), true);
  for (std::size_t k = n - 1; k > 0; --k) {
    const auto r = static_cast<std::size_t>(rng.below(k + 1));
    const bool tmp = mask[k];
    mask[k] = mask[r];
    mask[r] = tmp;
  }

  const double bound = 6.0 * config.noise_sigma;
  std::vector<Correspondence> items(n);
  for (std::size_t k = 0; k < n; ++k) {
    Point3 src(rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-half, half));
    Point3 dst;
    if (mask[k]) {
      Point3 noise = Point3::Zero();
      if (config.noise_sigma > 0.0) {
        do {
          noise = Point3(rng.normal(), rng.normal(), rng.normal()) * config.noise_sigma;
        } while (noise.norm() > bound);
      }
      dst = gt(src) + noise;
    } else {
      dst = Point3(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                   rng.uniform(lo.z(), hi.z()));
    }
    items[k] = {src, dst};
  }
  return {CorrespondenceSet(std::move(items)), gt, std::move(mask)};
}

}  // namespace turboreg
