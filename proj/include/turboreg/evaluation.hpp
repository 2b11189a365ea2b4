#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "turboreg/types.hpp"

namespace turboreg {

struct SuccessCriteria {
  double re_max_deg = 15.0;
  double te_max_m = 0.30;

  static SuccessCriteria indoor() { return {15.0, 0.30}; }
  static SuccessCriteria kitti() { return {5.0, 0.60}; }

  void validate() const;
};

/// Angle of R_gtᵀ·R_est in degrees, in [0, 180]. The cosine
/// (tr(R_gtᵀR_est) − 1)/2 is clamped to [−1, 1]; values beyond 1e-9 outside
/// that range, or non-rotation inputs, throw InputError. The angle itself is
/// taken with atan2 over the cosine and the skew part so it stays accurate
/// near 0° and 180°.
double rotation_error(const Matrix3& r_est, const Matrix3& r_gt);

double translation_error(const Point3& t_est, const Point3& t_gt);

struct PairEvaluation {
  double re_deg = 0.0;
  double te_m = 0.0;
  bool success = false;
  bool registered = false;  // false when the estimator reported failure
  double elapsed_s = 0.0;
};

struct EvalReport {
  std::vector<PairEvaluation> per_pair;
  double rr = 0.0;
  double mean_re_over_successes = 0.0;
  double mean_te_over_successes = 0.0;
  double mean_re_all = 0.0;  // over registered pairs
  double mean_te_all = 0.0;
  double fps = 0.0;          // pairs / Σ elapsed; 0 when no time was recorded
};

PairEvaluation evaluate_pair(const RegistrationResult& result, const RigidTransform& gt,
                             const SuccessCriteria& criteria);

/// Throws InputError on an empty list.
EvalReport evaluate_pairs(std::span<const std::pair<RegistrationResult, RigidTransform>> results,
                          const SuccessCriteria& criteria);

EvalReport summarize(std::vector<PairEvaluation> per_pair);

enum class RankMetric { InlierNumber, MAE, MSE };

/// Lower-is-better error scores use residuals truncated at the inlier
/// threshold: MAE = mean min(r, thr), MSE = mean min(r, thr)².
double hypothesis_error(const RigidTransform& t, const CorrespondenceSet& corr, double threshold,
                        RankMetric metric);

struct RankedEntry {
  Hypothesis hypothesis;
  double metric_value = 0.0;  // inlier count for InlierNumber, error otherwise
};

/// Orders hypotheses best-first under `metric`. Ties fall back to the
/// solver's selection order (aggregated weight, then clique indices).
std::vector<RankedEntry> rank_hypotheses(std::span<const Hypothesis> hyps,
                                         const CorrespondenceSet& corr, double threshold,
                                         RankMetric metric);

struct RankingRecalls {
  bool tqrr_hit = false;
  bool icrr_hit = false;
  std::vector<std::pair<std::size_t, bool>> tkrr_hits;  // (k, hit)
};

/// Ranking diagnostics for one pair. `ranked` must already be best-first
/// under `metric`. Without `inlier_labels`, labels are residual ≤ threshold
/// under gt.
RankingRecalls ranking_recalls(std::span<const RankedEntry> ranked, const CorrespondenceSet& corr,
                               const RigidTransform& gt,
                               std::optional<std::span<const bool>> inlier_labels,
                               const SuccessCriteria& criteria, std::span<const std::size_t> ks,
                               double threshold, RankMetric metric);

struct StabilityConfig {
  std::size_t clique_size = 10;
  std::size_t max_cliques = 50;
  std::size_t max_attempts = 2000;  // greedy growth restarts per tau
  std::uint64_t seed = 0;
};

struct StabilitySample {
  double tau = 0.0;
  double delta_r_deg = 0.0;
  double delta_t_m = 0.0;
};

struct StabilityRow {
  double tau = 0.0;
  bool present = false;  // false when no clique of the requested size was found
  double median_delta_r_deg = 0.0;
  double median_delta_t_m = 0.0;
  std::size_t cliques = 0;
  std::size_t samples = 0;
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
  std::vector<StabilitySample> samples;
};

/// Cliques of `clique_size` grown greedily from random edges of the
/// compatibility graph at `tau`, sorted ascending, without repeats.
std::vector<std::vector<std::size_t>> grow_cliques(const CorrespondenceSet& corr, double tau,
                                                   const StabilityConfig& config,
                                                   std::uint64_t stream);

/// For each tau: fit the whole clique and each of its 3-subsets, and report
/// how far the subset fits lie from the whole-clique fit. Instances are
/// pooled. Throws InputError when clique_size < 4.
StabilityTable clique_stability_experiment(std::span<const CorrespondenceSet> instances,
                                           std::span<const double> taus,
                                           const StabilityConfig& config);

StabilityTable clique_stability_experiment(const CorrespondenceSet& corr,
                                           std::span<const double> taus,
                                           const StabilityConfig& config);

double median(std::vector<double> values);

}  // namespace turboreg
