#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "turboreg/evaluation.hpp"
#include "turboreg/random.hpp"
#include "turboreg/solver.hpp"
#include "turboreg/synth.hpp"

using namespace turboreg;

namespace {

Matrix3 rot(double deg, const Point3& axis) {
  return Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, axis.normalized()).toRotationMatrix();
}

RegistrationResult registered(const RigidTransform& t, double seconds = 0.0) {
  RegistrationResult r;
  r.success = true;
  r.best_transform = t;
  r.stage_timings[kStageModel] = seconds;
  return r;
}

}  // namespace

TEST_CASE("rotation error examples") {
  const Matrix3 id = Matrix3::Identity();
  CHECK(rotation_error(id, id) == 0.0);
  CHECK(rotation_error(rot(90, {0, 0, 1}), id) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(rotation_error(rot(180, {1, 2, 3}), id) == doctest::Approx(180.0).epsilon(1e-12));
  CHECK(rotation_error(rot(1e-5, {0, 1, 0}), id) == doctest::Approx(1e-5).epsilon(1e-6));
}

TEST_CASE("rotation error matches the generating angle") {
  Rng rng(13);
  for (int k = 0; k <= 1800; ++k) {
    const double deg = 0.1 * k;
    const Point3 axis(rng.normal(), rng.normal(), rng.normal());
    const Matrix3 base = rot(rng.uniform(0, 180), Point3(rng.normal(), rng.normal(), rng.normal()));
    const Matrix3 est = base * rot(deg, axis);
    CHECK(std::abs(rotation_error(est, base) - deg) < 1e-9 * std::max(1.0, deg) + 1e-11);
  }
}

TEST_CASE("rotation error is symmetric and validates input") {
  const Matrix3 a = rot(33, {1, 0, 1});
  const Matrix3 b = rot(-71, {0, 1, 1});
  CHECK(rotation_error(a, b) == doctest::Approx(rotation_error(b, a)).epsilon(1e-12));
  Matrix3 bad = Matrix3::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(rotation_error(bad, Matrix3::Identity()), InputError);
  CHECK_THROWS_AS(rotation_error(-Matrix3::Identity(), Matrix3::Identity()), InputError);
}

TEST_CASE("translation error") {
  CHECK(translation_error({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(translation_error({3, 4, 0}, {0, 0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("registration recall over pairs") {
  const RigidTransform gt(rot(20, {1, 1, 0}), {0.5, 0, -1});
  std::vector<std::pair<RegistrationResult, RigidTransform>> pairs;
  for (int k = 0; k < 4; ++k) pairs.emplace_back(registered(gt, 0.25), gt);
  auto all = evaluate_pairs(pairs, SuccessCriteria::indoor());
  CHECK(all.rr == 1.0);
  CHECK(all.mean_re_over_successes == doctest::Approx(0.0));
  CHECK(all.fps == doctest::Approx(4.0));

  const RigidTransform off_rot(rot(20, {1, 1, 0}) * rot(10, {0, 0, 1}), gt.translation());
  const RigidTransform off_trans(gt.rotation(), gt.translation() + Point3(0.4, 0, 0));
  pairs[1].first = registered(off_rot);
  pairs[2].first = registered(off_trans);
  pairs[3].first = RegistrationResult{};
  const auto indoor = evaluate_pairs(pairs, SuccessCriteria::indoor());
  CHECK(indoor.rr == doctest::Approx(0.5));
  CHECK_FALSE(indoor.per_pair[2].success);
  CHECK_FALSE(indoor.per_pair[3].registered);
  CHECK(std::isnan(indoor.per_pair[3].re_deg));
  CHECK(indoor.mean_re_all == doctest::Approx(10.0 / 3.0));
  const auto kitti = evaluate_pairs(pairs, SuccessCriteria::kitti());
  CHECK(kitti.rr == doctest::Approx(0.5));
  CHECK_FALSE(kitti.per_pair[1].success);
  CHECK(kitti.per_pair[2].success);

  CHECK_THROWS_AS(evaluate_pairs({}, SuccessCriteria::indoor()), InputError);
}

TEST_CASE("truncated residual errors") {
  std::vector<Correspondence> items{{Point3(0, 0, 0), Point3(0, 0, 0)},
                                    {Point3(1, 0, 0), Point3(1.05, 0, 0)},
                                    {Point3(0, 1, 0), Point3(0, 3, 0)}};
  const CorrespondenceSet corr(items);
  const auto id = RigidTransform::identity();
  CHECK(hypothesis_error(id, corr, 0.1, RankMetric::MAE) == doctest::Approx((0.05 + 0.1) / 3));
  CHECK(hypothesis_error(id, corr, 0.1, RankMetric::MSE) == doctest::Approx((0.0025 + 0.01) / 3));
}

TEST_CASE("ranking recalls") {
  SynthConfig c;
  c.n = 500;
  c.outlier_ratio = 0.8;
  c.seed = 17;
  const auto inst = generate(c);
  EstimatorParams p;
  p.k1 = 200;
  p.inlier_threshold = 0.015;
  p.keep_ranked = true;
  const auto r = estimate(inst.correspondences, p);
  REQUIRE(r.success);
  const auto& hyps = *r.ranked_hypotheses;
  const std::vector<std::size_t> ks{1, 5, 10, 100};
  const std::vector<bool> labels_vec = inst.inlier_mask;
  const std::unique_ptr<bool[]> labels(new bool[labels_vec.size()]);
  for (std::size_t k = 0; k < labels_vec.size(); ++k) labels[k] = labels_vec[k];
  const std::span<const bool> label_span(labels.get(), labels_vec.size());

  for (RankMetric m : {RankMetric::InlierNumber, RankMetric::MAE, RankMetric::MSE}) {
    const auto ranked = rank_hypotheses(hyps, inst.correspondences, p.inlier_threshold, m);
    REQUIRE(ranked.size() == hyps.size());
    for (std::size_t k = 1; k < ranked.size(); ++k) {
      if (m == RankMetric::InlierNumber) CHECK(ranked[k - 1].metric_value >= ranked[k].metric_value);
      else CHECK(ranked[k - 1].metric_value <= ranked[k].metric_value);
    }
    const auto rec = ranking_recalls(ranked, inst.correspondences, inst.gt, label_span,
                                     SuccessCriteria::indoor(), ks, p.inlier_threshold, m);
    CHECK(rec.icrr_hit);
    REQUIRE(rec.tkrr_hits.size() == ks.size());
    for (std::size_t k = 1; k < rec.tkrr_hits.size(); ++k)
      CHECK((!rec.tkrr_hits[k - 1].second || rec.tkrr_hits[k].second));
    CHECK(rec.tkrr_hits.back().second);
  }

  // Ground truth injected as a hypothesis ranks first and beats itself.
  std::vector<Hypothesis> with_gt = hyps;
  with_gt.push_back({TurboClique{}, inst.gt, 0});
  const auto ranked = rank_hypotheses(with_gt, inst.correspondences, p.inlier_threshold, RankMetric::MAE);
  const auto rec = ranking_recalls(ranked, inst.correspondences, inst.gt, std::nullopt,
                                   SuccessCriteria::indoor(), ks, p.inlier_threshold, RankMetric::MAE);
  CHECK(rec.tqrr_hit);
  CHECK(rec.tkrr_hits.front().second);

  CHECK_THROWS_AS(ranking_recalls({}, inst.correspondences, inst.gt, std::nullopt,
                                  SuccessCriteria::indoor(), ks, 0.015, RankMetric::MAE),
                  InputError);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("clique growth yields sorted cliques of the requested size") {
  SynthConfig c;
  c.n = 200;
  c.outlier_ratio = 0.5;
  c.noise_sigma = 0.0;
  c.seed = 2;
  const auto inst = generate(c);
  StabilityConfig sc;
  sc.clique_size = 6;
  const auto cliques = grow_cliques(inst.correspondences, 0.05, sc, 0);
  REQUIRE_FALSE(cliques.empty());
  CHECK(cliques.size() <= sc.max_cliques);
  for (const auto& q : cliques) {
    REQUIRE(q.size() == 6);
    CHECK(std::is_sorted(q.begin(), q.end()));
  }
  CHECK(grow_cliques(inst.correspondences, 0.05, sc, 0) == cliques);
}

TEST_CASE("clique stability") {
  SynthConfig c;
  c.n = 200;
  c.outlier_ratio = 0.5;
  c.outlier_ratio = 0.0;
  c.noise_sigma = 0.0;
  c.seed = 8;
  const std::vector<double> taus{0.01, 0.1, 0.5};
  StabilityConfig sc;
  const auto exact = clique_stability_experiment(generate(c).correspondences, taus, sc);
  REQUIRE(exact.rows.size() == 3);
  for (const auto& row : exact.rows) {
    REQUIRE(row.present);
    CHECK(row.median_delta_r_deg < 1e-6);
    CHECK(row.median_delta_t_m < 1e-9);
  }

  std::vector<CorrespondenceSet> noisy;
  for (std::uint64_t s = 0; s < 10; ++s) {
    c.outlier_ratio = 0.5;
    c.noise_sigma = 0.01;
    c.seed = 100 + s;
    noisy.push_back(generate(c).correspondences);
  }
  const auto t = clique_stability_experiment(noisy, taus, sc);
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    CHECK(t.rows[k - 1].median_delta_r_deg <= t.rows[k].median_delta_r_deg);

  sc.clique_size = 3;
  CHECK_THROWS_AS(clique_stability_experiment(noisy, taus, sc), InputError);

  sc.clique_size = 150;
  const auto none = clique_stability_experiment(noisy[0], std::vector<double>{0.001}, sc);
  CHECK_FALSE(none.rows[0].present);
}
