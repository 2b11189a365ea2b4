#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace turboreg {

using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

/// Per-entry tolerance for RᵀR = I and det(R) = +1.
inline constexpr double kRotationTolerance = 1e-9;

/// Bad user input: malformed files, invalid parameters, undersized sets.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input too large for the dense N×N layout.
class SizingError : public InputError {
 public:
  using InputError::InputError;
};

/// Point configuration that does not determine a rigid transform.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Correspondence {
  Point3 source;
  Point3 target;
};

bool is_finite(const Point3& p);

/// Ordered list of putative matches. Index i is graph node i; at least three
/// entries, all coordinates finite.
class CorrespondenceSet {
 public:
  static constexpr std::size_t kMinSize = 3;

  CorrespondenceSet() = default;
  explicit CorrespondenceSet(std::vector<Correspondence> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Correspondence& operator[](std::size_t i) const { return items_[i]; }
  std::span<const Correspondence> items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  std::vector<Point3> sources() const;
  std::vector<Point3> targets() const;

 private:
  std::vector<Correspondence> items_;
};

bool is_rotation(const Matrix3& r, double tol = kRotationTolerance);

/// Nearest proper rotation in the Frobenius sense (orthogonal polar factor
/// with the determinant sign fixed).
Matrix3 project_to_rotation(const Matrix3& m);

class RigidTransform {
 public:
  RigidTransform();

  /// Throws InputError unless `rotation` is a proper rotation within
  /// kRotationTolerance.
  RigidTransform(const Matrix3& rotation, const Point3& translation);

  /// Accepts any finite 3×3; re-projects onto SO(3) when validation fails and
  /// reports that through `reprojected`.
  static RigidTransform from_projected(const Matrix3& rotation, const Point3& translation,
                                       bool* reprojected = nullptr);

  static RigidTransform identity() { return {}; }

  const Matrix3& rotation() const { return rotation_; }
  const Point3& translation() const { return translation_; }

  Point3 operator()(const Point3& p) const { return rotation_ * p + translation_; }
  Matrix4 matrix() const;

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Matrix3& rotation, const Point3& translation)
      : rotation_(rotation), translation_(translation) {}

  friend RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
  friend RigidTransform inverse(const RigidTransform& t);

  Matrix3 rotation_;
  Point3 translation_;
};

Point3 apply_transform(const RigidTransform& t, const Point3& p);

/// a ∘ b: applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform inverse(const RigidTransform& t);

enum class GraphMode { SC2, O2 };

std::string to_string(GraphMode mode);
GraphMode parse_graph_mode(const std::string& s);

struct EstimatorParams {
  double tau = 0.0125;               // meters; usually 0.25 × cloud resolution
  std::size_t k1 = 1000;             // pivots
  std::size_t k2 = 2;                // TurboCliques kept per pivot
  double inlier_threshold = 0.10;    // meters
  GraphMode graph_mode = GraphMode::O2;
  std::uint64_t seed = 0;            // baseline and generator only
  bool refine = false;               // re-fit on the final inlier set
  bool keep_ranked = false;          // fill RegistrationResult::ranked_hypotheses

  void validate() const;
};

/// A 3-clique of the compatibility graph, indices sorted ascending.
struct TurboClique {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t z = 0;
  std::uint64_t aggregated_weight = 0;

  static TurboClique sorted(std::size_t a, std::size_t b, std::size_t c, std::uint64_t weight);

  auto key() const { return std::tuple{i, j, z}; }
  friend bool operator==(const TurboClique&, const TurboClique&) = default;
};

struct Hypothesis {
  TurboClique clique;
  RigidTransform transform;
  std::size_t score = 0;
};

/// Stage keys used in RegistrationResult::stage_timings.
inline constexpr const char* kStageGraph = "graph_s";
inline constexpr const char* kStagePgs = "pgs_s";
inline constexpr const char* kStageModel = "model_s";

struct RegistrationResult {
  bool success = false;
  std::string failure_reason;

  RigidTransform best_transform;
  std::size_t best_inlier_count = 0;
  std::vector<std::size_t> inlier_indices;
  TurboClique best_clique;

  std::size_t hypotheses_evaluated = 0;
  std::size_t degenerate_cliques = 0;
  std::size_t cliques_searched = 0;
  std::uint64_t neighbor_checks = 0;

  std::optional<std::vector<Hypothesis>> ranked_hypotheses;
  std::map<std::string, double> stage_timings;

  double total_seconds() const;
};

}  // namespace turboreg
