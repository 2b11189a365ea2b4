#include "turboreg/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace turboreg {

bool is_finite(const Point3& p) { return p.allFinite(); }

CorrespondenceSet::CorrespondenceSet(std::vector<Correspondence> items) : items_(std::move(items)) {
  if (items_.size() < kMinSize) {
    throw InputError("correspondence set needs at least 3 matches, got " +
                     std::to_string(items_.size()));
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!is_finite(items_[i].source) || !is_finite(items_[i].target)) {
      throw InputError("correspondence " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

std::vector<Point3> CorrespondenceSet::sources() const {
  std::vector<Point3> out;
  out.reserve(items_.size());
  for (const auto& c : items_) out.push_back(c.source);
  return out;
}

std::vector<Point3> CorrespondenceSet::targets() const {
  std::vector<Point3> out;
  out.reserve(items_.size());
  for (const auto& c : items_) out.push_back(c.target);
  return out;
}

bool is_rotation(const Matrix3& r, double tol) {
  if (!r.allFinite()) return false;
  const Matrix3 gram = r.transpose() * r;
  if ((gram - Matrix3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

Matrix3 project_to_rotation(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 d = Matrix3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

RigidTransform::RigidTransform() : rotation_(Matrix3::Identity()), translation_(Point3::Zero()) {}

RigidTransform::RigidTransform(const Matrix3& rotation, const Point3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_rotation(rotation_)) throw InputError("matrix is not a proper rotation");
  if (!is_finite(translation_)) throw InputError("translation is not finite");
}

RigidTransform RigidTransform::from_projected(const Matrix3& rotation, const Point3& translation,
                                              bool* reprojected) {
  if (!rotation.allFinite() || !is_finite(translation)) {
    throw InputError("transform has non-finite entries");
  }
  const bool bad = !is_rotation(rotation);
  if (reprojected != nullptr) *reprojected = bad;
  if (!bad) return {rotation, translation};
  const Matrix3 r = project_to_rotation(rotation);
  if (!is_rotation(r)) throw InputError("matrix cannot be projected onto a rotation");
  return {r, translation};
}

Matrix4 RigidTransform::matrix() const {
  Matrix4 m = Matrix4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Point3 apply_transform(const RigidTransform& t, const Point3& p) { return t(p); }

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {RigidTransform::Unchecked{}, a.rotation_ * b.rotation_,
          a.rotation_ * b.translation_ + a.translation_};
}

RigidTransform inverse(const RigidTransform& t) {
  const Matrix3 rt = t.rotation_.transpose();
  return {RigidTransform::Unchecked{}, rt, -(rt * t.translation_)};
}

std::string to_string(GraphMode mode) { return mode == GraphMode::O2 ? "o2" : "sc2"; }

GraphMode parse_graph_mode(const std::string& s) {
  if (s == "o2" || s == "O2") return GraphMode::O2;
  if (s == "sc2" || s == "SC2") return GraphMode::SC2;
  throw InputError("unknown graph mode '" + s + "' (expected o2 or sc2)");
}

void EstimatorParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("tau must be positive");
  if (!(inlier_threshold > 0.0) || !std::isfinite(inlier_threshold)) {
    throw InputError("inlier threshold must be positive");
  }
  if (k1 < 1) throw InputError("k1 must be at least 1");
  if (k2 < 1) throw InputError("k2 must be at least 1");
}

TurboClique TurboClique::sorted(std::size_t a, std::size_t b, std::size_t c, std::uint64_t weight) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return {a, b, c, weight};
}

double RegistrationResult::total_seconds() const {
  double total = 0.0;
  for (const auto& [name, s] : stage_timings) total += s;
  return total;
}

}  // namespace turboreg
