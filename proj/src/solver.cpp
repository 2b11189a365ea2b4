#include "turboreg/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <string>

#include <Eigen/SVD>

#include "turboreg/compat_graph.hpp"
#include "turboreg/pgs.hpp"
#include "turboreg/random.hpp"

namespace turboreg {

namespace {

// Relative bound on the second singular value of the centered source points.
constexpr double kDegenerateRelTol = 1e-9;
constexpr double kDegenerateAbsTol = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

enum class FitStatus { Ok, Degenerate };

FitStatus fit(std::span<const Point3> source, std::span<const Point3> target, RigidTransform& out) {
  if (source.size() != target.size()) throw InputError("kabsch: point lists differ in length");
  if (source.size() < 3) throw InputError("kabsch: at least 3 point pairs are required");

  const auto n = static_cast<double>(source.size());
  Point3 cs = Point3::Zero();
  Point3 ct = Point3::Zero();
  for (std::size_t k = 0; k < source.size(); ++k) {
    cs += source[k];
    ct += target[k];
  }
  cs /= n;
  ct /= n;

  Eigen::MatrixX3d centered(source.size(), 3);
  Matrix3 h = Matrix3::Zero();
  for (std::size_t k = 0; k < source.size(); ++k) {
    const Point3 a = source[k] - cs;
    const Point3 b = target[k] - ct;
    centered.row(static_cast<Eigen::Index>(k)) = a.transpose();
    h += a * b.transpose();
  }

  // Rank < 2 of the centered source points leaves the rotation undetermined.
  const Eigen::JacobiSVD<Eigen::MatrixX3d> spread(centered);
  const auto sv = spread.singularValues();
  if (sv(0) <= kDegenerateAbsTol || sv(1) <= kDegenerateRelTol * sv(0)) return FitStatus::Degenerate;

  const Eigen::JacobiSVD<Matrix3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix3& u = svd.matrixU();
  const Matrix3& v = svd.matrixV();
  Matrix3 d = Matrix3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  Matrix3 r = v * d * u.transpose();
  if (!is_rotation(r)) r = project_to_rotation(r);
  out = RigidTransform(r, ct - r * cs);
  return FitStatus::Ok;
}

std::optional<RigidTransform> fit_clique(const CorrespondenceSet& corr, const TurboClique& c) {
  const std::array<Point3, 3> src{corr[c.i].source, corr[c.j].source, corr[c.z].source};
  const std::array<Point3, 3> dst{corr[c.i].target, corr[c.j].target, corr[c.z].target};
  return try_kabsch(src, dst);
}

// Strict weak order for model selection.
bool ranks_higher(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.clique.aggregated_weight != b.clique.aggregated_weight) {
    return a.clique.aggregated_weight > b.clique.aggregated_weight;
  }
  return a.clique.key() < b.clique.key();
}

void finalize(RegistrationResult& result, const CorrespondenceSet& corr, const Hypothesis& best,
              double threshold, bool refine) {
  result.success = true;
  result.best_clique = best.clique;
  result.best_transform = best.transform;
  InlierSet inliers = count_inliers(best.transform, corr, threshold);
  if (refine && inliers.count >= 3) {
    std::vector<Point3> src;
    std::vector<Point3> dst;
    for (std::size_t idx : inliers.indices) {
      src.push_back(corr[idx].source);
      dst.push_back(corr[idx].target);
    }
    if (auto refined = try_kabsch(src, dst)) {
      result.best_transform = *refined;
      inliers = count_inliers(*refined, corr, threshold);
    }
  }
  result.best_inlier_count = inliers.count;
  result.inlier_indices = std::move(inliers.indices);
}

}  // namespace

RigidTransform kabsch(std::span<const Point3> source, std::span<const Point3> target) {
  RigidTransform t;
  if (fit(source, target, t) == FitStatus::Degenerate) {
    throw DegenerateConfiguration("kabsch: source points are collinear or coincident");
  }
  return t;
}

std::optional<RigidTransform> try_kabsch(std::span<const Point3> source,
                                         std::span<const Point3> target) {
  RigidTransform t;
  if (fit(source, target, t) == FitStatus::Degenerate) return std::nullopt;
  return t;
}

InlierSet count_inliers(const RigidTransform& t, const CorrespondenceSet& corr, double threshold) {
  if (!(threshold > 0.0)) throw InputError("inlier threshold must be positive");
  InlierSet out;
  for (std::size_t k = 0; k < corr.size(); ++k) {
    if ((t(corr[k].source) - corr[k].target).norm() <= threshold) out.indices.push_back(k);
  }
  out.count = out.indices.size();
  return out;
}

std::size_t inlier_count(const RigidTransform& t, const CorrespondenceSet& corr, double threshold) {
  std::size_t count = 0;
  for (const auto& c : corr) {
    if ((t(c.source) - c.target).norm() <= threshold) ++count;
  }
  return count;
}

RegistrationResult estimate(const CorrespondenceSet& corr, const EstimatorParams& params) {
  params.validate();
  if (corr.size() < CorrespondenceSet::kMinSize) {
    throw InputError("registration needs at least 3 correspondences");
  }
  RegistrationResult result;

  auto start = Clock::now();
  const CompatGraph first = build_first_order(corr, params.tau);
  WeightedGraph weighted = build_sc2(first);
  if (params.graph_mode == GraphMode::O2) weighted = to_o2graph(weighted);
  result.stage_timings[kStageGraph] = seconds_since(start);

  start = Clock::now();
  PgsStats stats;
  std::vector<TurboClique> cliques = pgs_search(weighted, params.k1, params.k2, &stats);
  result.cliques_searched = cliques.size();
  result.neighbor_checks = stats.neighbor_checks;
  if (params.graph_mode == GraphMode::SC2) cliques = deduplicate(cliques);
  result.stage_timings[kStagePgs] = seconds_since(start);

  start = Clock::now();
  std::vector<std::optional<Hypothesis>> hypotheses(cliques.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(cliques.size()); ++s) {
    const auto& c = cliques[static_cast<std::size_t>(s)];
    if (auto t = fit_clique(corr, c)) {
      hypotheses[static_cast<std::size_t>(s)] =
          Hypothesis{c, *t, inlier_count(*t, corr, params.inlier_threshold)};
    }
  }

  const Hypothesis* best = nullptr;
  std::vector<Hypothesis> ranked;
  for (const auto& h : hypotheses) {
    if (!h) {
      ++result.degenerate_cliques;
      continue;
    }
    ++result.hypotheses_evaluated;
    if (best == nullptr || ranks_higher(*h, *best)) best = &*h;
    if (params.keep_ranked) ranked.push_back(*h);
  }

  if (best == nullptr) {
    result.failure_reason = cliques.empty() ? "pivot-guided search found no TurboClique"
                                            : "every TurboClique was degenerate";
  } else {
    finalize(result, corr, *best, params.inlier_threshold, params.refine);
  }
  if (params.keep_ranked) {
    std::sort(ranked.begin(), ranked.end(), ranks_higher);
    result.ranked_hypotheses = std::move(ranked);
  }
  result.stage_timings[kStageModel] = seconds_since(start);
  return result;
}

RegistrationResult ransac_baseline(const CorrespondenceSet& corr, std::size_t iterations,
                                   double inlier_threshold, std::uint64_t seed) {
  if (iterations < 1) throw InputError("RANSAC needs at least one iteration");
  if (!(inlier_threshold > 0.0)) throw InputError("inlier threshold must be positive");
  if (corr.size() < CorrespondenceSet::kMinSize) {
    throw InputError("registration needs at least 3 correspondences");
  }

  RegistrationResult result;
  result.stage_timings[kStageGraph] = 0.0;
  result.stage_timings[kStagePgs] = 0.0;
  const auto start = Clock::now();

  Rng rng(seed);
  const std::uint64_t n = corr.size();
  std::optional<Hypothesis> best;
  for (std::size_t it = 0; it < iterations; ++it) {
    const std::size_t a = rng.below(n);
    std::size_t b = rng.below(n - 1);
    if (b >= a) ++b;
    std::size_t c = rng.below(n - 2);
    if (c >= std::min(a, b)) ++c;
    if (c >= std::max(a, b)) ++c;
    const TurboClique sample = TurboClique::sorted(a, b, c, 0);
    const auto t = fit_clique(corr, sample);
    if (!t) {
      ++result.degenerate_cliques;
      continue;
    }
    ++result.hypotheses_evaluated;
    const std::size_t score = inlier_count(*t, corr, inlier_threshold);
    if (!best || score > best->score) best = Hypothesis{sample, *t, score};
  }
  result.cliques_searched = iterations;
  if (!best) {
    result.failure_reason = "every sampled triple was degenerate";
  } else {
    finalize(result, corr, *best, inlier_threshold, false);
  }
  result.stage_timings[kStageModel] = seconds_since(start);
  return result;
}

}  // namespace turboreg
