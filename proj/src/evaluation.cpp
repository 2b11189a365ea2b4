#include "turboreg/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "turboreg/compat_graph.hpp"
#include "turboreg/random.hpp"
#include "turboreg/solver.hpp"

namespace turboreg {

namespace {

constexpr double kCosineSlack = 1e-9;

double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

bool ranks_before(const RankedEntry& a, const RankedEntry& b, RankMetric metric) {
  if (a.metric_value != b.metric_value) {
    return metric == RankMetric::InlierNumber ? a.metric_value > b.metric_value
                                              : a.metric_value < b.metric_value;
  }
  const auto& ca = a.hypothesis.clique;
  const auto& cb = b.hypothesis.clique;
  if (ca.aggregated_weight != cb.aggregated_weight) return ca.aggregated_weight > cb.aggregated_weight;
  return ca.key() < cb.key();
}

double metric_value(const RigidTransform& t, const CorrespondenceSet& corr, double threshold,
                    RankMetric metric) {
  if (metric == RankMetric::InlierNumber) {
    return static_cast<double>(inlier_count(t, corr, threshold));
  }
  return hypothesis_error(t, corr, threshold, metric);
}

}  // namespace

void SuccessCriteria::validate() const {
  if (!(re_max_deg > 0.0) || !(te_max_m > 0.0)) {
    throw InputError("success thresholds must be positive");
  }
}

double rotation_error(const Matrix3& r_est, const Matrix3& r_gt) {
  if (!is_rotation(r_est) || !is_rotation(r_gt)) {
    throw InputError("rotation_error: input is not a proper rotation");
  }
  const Matrix3 rel = r_gt.transpose() * r_est;
  const double cosine = 0.5 * (rel.trace() - 1.0);
  if (cosine > 1.0 + kCosineSlack || cosine < -1.0 - kCosineSlack) {
    throw InputError("rotation_error: trace out of range for a rotation");
  }
  const double c = std::clamp(cosine, -1.0, 1.0);
  const Point3 skew(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  const double s = 0.5 * skew.norm();
  return to_degrees(std::atan2(s, c));
}

double translation_error(const Point3& t_est, const Point3& t_gt) { return (t_est - t_gt).norm(); }

PairEvaluation evaluate_pair(const RegistrationResult& result, const RigidTransform& gt,
                             const SuccessCriteria& criteria) {
  PairEvaluation e;
  e.elapsed_s = result.total_seconds();
  e.registered = result.success;
  if (!result.success) {
    e.re_deg = std::numeric_limits<double>::quiet_NaN();
    e.te_m = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.re_deg = rotation_error(result.best_transform.rotation(), gt.rotation());
  e.te_m = translation_error(result.best_transform.translation(), gt.translation());
  e.success = e.re_deg <= criteria.re_max_deg && e.te_m <= criteria.te_max_m;
  return e;
}

EvalReport summarize(std::vector<PairEvaluation> per_pair) {
  if (per_pair.empty()) throw InputError("evaluation needs at least one pair");
  EvalReport report;
  std::size_t successes = 0;
  std::size_t registered = 0;
  double elapsed = 0.0;
  for (const auto& p : per_pair) {
    elapsed += p.elapsed_s;
    if (p.registered) {
      ++registered;
      report.mean_re_all += p.re_deg;
      report.mean_te_all += p.te_m;
    }
    if (p.success) {
      ++successes;
      report.mean_re_over_successes += p.re_deg;
      report.mean_te_over_successes += p.te_m;
    }
  }
  const auto pairs = static_cast<double>(per_pair.size());
  report.rr = static_cast<double>(successes) / pairs;
  if (successes > 0) {
    report.mean_re_over_successes /= static_cast<double>(successes);
    report.mean_te_over_successes /= static_cast<double>(successes);
  }
  if (registered > 0) {
    report.mean_re_all /= static_cast<double>(registered);
    report.mean_te_all /= static_cast<double>(registered);
  }
  report.fps = elapsed > 0.0 ? pairs / elapsed : 0.0;
  report.per_pair = std::move(per_pair);
  return report;
}

EvalReport evaluate_pairs(std::span<const std::pair<RegistrationResult, RigidTransform>> results,
                          const SuccessCriteria& criteria) {
  criteria.validate();
  if (results.empty()) throw InputError("evaluation needs at least one pair");
  std::vector<PairEvaluation> per_pair(results.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(results.size()); ++k) {
    const auto& [res, gt] = results[static_cast<std::size_t>(k)];
    per_pair[static_cast<std::size_t>(k)] = evaluate_pair(res, gt, criteria);
  }
  return summarize(std::move(per_pair));
}

double hypothesis_error(const RigidTransform& t, const CorrespondenceSet& corr, double threshold,
                        RankMetric metric) {
  if (corr.empty()) return 0.0;
  double total = 0.0;
  for (const auto& c : corr) {
    const double r = std::min((t(c.source) - c.target).norm(), threshold);
    total += metric == RankMetric::MSE ? r * r : r;
  }
  return total / static_cast<double>(corr.size());
}

std::vector<RankedEntry> rank_hypotheses(std::span<const Hypothesis> hyps,
                                         const CorrespondenceSet& corr, double threshold,
                                         RankMetric metric) {
  std::vector<RankedEntry> ranked(hyps.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(hyps.size()); ++k) {
    const auto& h = hyps[static_cast<std::size_t>(k)];
    ranked[static_cast<std::size_t>(k)] = {h, metric_value(h.transform, corr, threshold, metric)};
  }
  std::sort(ranked.begin(), ranked.end(),
            [metric](const RankedEntry& a, const RankedEntry& b) { return ranks_before(a, b, metric); });
  return ranked;
}

RankingRecalls ranking_recalls(std::span<const RankedEntry> ranked, const CorrespondenceSet& corr,
                               const RigidTransform& gt,
                               std::optional<std::span<const bool>> inlier_labels,
                               const SuccessCriteria& criteria, std::span<const std::size_t> ks,
                               double threshold, RankMetric metric) {
  if (ranked.empty()) throw InputError("ranking recalls need at least one hypothesis");
  RankingRecalls out;

  const double gt_value = metric_value(gt, corr, threshold, metric);
  const double top_value = ranked.front().metric_value;
  out.tqrr_hit = metric == RankMetric::InlierNumber ? top_value >= gt_value : top_value <= gt_value;

  std::vector<bool> labels(corr.size());
  if (inlier_labels) {
    if (inlier_labels->size() != corr.size()) throw InputError("inlier label count mismatch");
    std::copy(inlier_labels->begin(), inlier_labels->end(), labels.begin());
  } else {
    for (std::size_t k = 0; k < corr.size(); ++k) {
      labels[k] = (gt(corr[k].source) - corr[k].target).norm() <= threshold;
    }
  }
  const auto& top = ranked.front().hypothesis.clique;
  out.icrr_hit = labels[top.i] && labels[top.j] && labels[top.z];

  const auto succeeds = [&](const RigidTransform& t) {
    return rotation_error(t.rotation(), gt.rotation()) <= criteria.re_max_deg &&
           translation_error(t.translation(), gt.translation()) <= criteria.te_max_m;
  };
  std::vector<bool> prefix_hit(ranked.size());
  bool any = false;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    any = any || succeeds(ranked[k].hypothesis.transform);
    prefix_hit[k] = any;
  }
  for (std::size_t k : ks) {
    if (k == 0) throw InputError("top-k needs k ≥ 1");
    out.tkrr_hits.emplace_back(k, prefix_hit[std::min(k, ranked.size()) - 1]);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::vector<std::size_t>> grow_cliques(const CorrespondenceSet& corr, double tau,
                                                   const StabilityConfig& config,
                                                   std::uint64_t stream) {
  const CompatGraph g = build_first_order(corr, tau);
  const std::size_t n = g.size();
  const std::size_t words = g.words_per_row();
  Rng rng(config.seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));

  // Uniform pick of a set bit among `bits`, which holds `count` ones.
  const auto pick = [&](const std::vector<CompatGraph::Word>& bits, std::size_t count) {
    std::uint64_t target = rng.below(count);
    for (std::size_t w = 0; w < words; ++w) {
      const auto ones = static_cast<std::uint64_t>(std::popcount(bits[w]));
      if (target < ones) {
        CompatGraph::Word b = bits[w];
        for (std::uint64_t s = 0; s < target; ++s) b &= b - 1;
        return w * 64 + static_cast<std::size_t>(std::countr_zero(b));
      }
      target -= ones;
    }
    return n;  // unreachable when count matches
  };
  const auto popcount = [&](const std::vector<CompatGraph::Word>& bits) {
    std::size_t c = 0;
    for (auto w : bits) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  };

  std::set<std::vector<std::size_t>> found;
  std::vector<CompatGraph::Word> cand(words);
  for (std::size_t attempt = 0; attempt < config.max_attempts && found.size() < config.max_cliques;
       ++attempt) {
    const std::size_t first = rng.below(n);
    const auto r0 = g.row(first);
    std::copy(r0.begin(), r0.end(), cand.begin());
    std::size_t count = popcount(cand);
    std::vector<std::size_t> members{first};
    while (members.size() < config.clique_size && count > 0) {
      const std::size_t next = pick(cand, count);
      members.push_back(next);
      const auto rn = g.row(next);
      for (std::size_t w = 0; w < words; ++w) cand[w] &= rn[w];
      count = popcount(cand);
    }
    if (members.size() == config.clique_size) {
      std::sort(members.begin(), members.end());
      found.insert(std::move(members));
    }
  }
  return {found.begin(), found.end()};
}

StabilityTable clique_stability_experiment(std::span<const CorrespondenceSet> instances,
                                           std::span<const double> taus,
                                           const StabilityConfig& config) {
  if (config.clique_size < 4) {
    throw InputError("clique size must be at least 4 to compare against 3-subsets");
  }
  if (instances.empty()) throw InputError("stability experiment needs at least one instance");
  for (double tau : taus) {
    if (!(tau > 0.0)) throw InputError("tau values must be positive");
  }

  StabilityTable table;
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    const double tau = taus[ti];
    std::vector<std::vector<StabilitySample>> per_instance(instances.size());
    std::vector<std::size_t> clique_counts(instances.size(), 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(instances.size()); ++si) {
      const auto s = static_cast<std::size_t>(si);
      const auto& corr = instances[s];
      const auto cliques = grow_cliques(corr, tau, config, s * 1000003ULL + ti);
      for (const auto& members : cliques) {
        std::vector<Point3> src;
        std::vector<Point3> dst;
        for (std::size_t m : members) {
          src.push_back(corr[m].source);
          dst.push_back(corr[m].target);
        }
        const auto whole = try_kabsch(src, dst);
        if (!whole) continue;
        ++clique_counts[s];
        const std::size_t k = members.size();
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = a + 1; b < k; ++b) {
            for (std::size_t c = b + 1; c < k; ++c) {
              const Point3 s3[3] = {src[a], src[b], src[c]};
              const Point3 d3[3] = {dst[a], dst[b], dst[c]};
              const auto sub = try_kabsch(s3, d3);
              if (!sub) continue;
              per_instance[s].push_back(
                  {tau, rotation_error(sub->rotation(), whole->rotation()),
                   translation_error(whole->translation(), sub->translation())});
            }
          }
        }
      }
    }

    StabilityRow row;
    row.tau = tau;
    std::vector<double> dr;
    std::vector<double> dt;
    for (std::size_t s = 0; s < instances.size(); ++s) {
      row.cliques += clique_counts[s];
      for (const auto& smp : per_instance[s]) {
        dr.push_back(smp.delta_r_deg);
        dt.push_back(smp.delta_t_m);
        table.samples.push_back(smp);
      }
    }
    row.samples = dr.size();
    row.present = row.samples > 0;
    if (row.present) {
      row.median_delta_r_deg = median(dr);
      row.median_delta_t_m = median(dt);
    }
    table.rows.push_back(row);
  }
  return table;
}

StabilityTable clique_stability_experiment(const CorrespondenceSet& corr,
                                           std::span<const double> taus,
                                           const StabilityConfig& config) {
  return clique_stability_experiment(std::span<const CorrespondenceSet>(&corr, 1), taus, config);
}

}  // namespace turboreg
