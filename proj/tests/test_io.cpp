#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "turboreg/io.hpp"
#include "turboreg/random.hpp"
#include "turboreg/solver.hpp"
#include "turboreg/synth.hpp"

using namespace turboreg;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

CorrespondenceSet parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_correspondences(in, "t.corr");
}

io::TransformRead parse_transform(const std::string& text) {
  std::istringstream in(text);
  return io::read_transform(in, "t.gt");
}

}  // namespace

TEST_CASE("format_real round-trips") {
  Rng rng(4);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.below(80)) - 40);
    CHECK(std::strtod(io::format_real(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_real(0.5) == "0.5");
  CHECK(io::format_real(1.0) == "1");
  CHECK(io::format_real(0.1) == "0.1");
}

TEST_CASE("correspondence files round-trip") {
  SynthConfig c;
  c.n = 200;
  c.seed = 3;
  const auto inst = generate(c);
  std::ostringstream out;
  io::write_correspondences(out, inst.correspondences, {"header"});
  const auto back = parse(out.str());
  REQUIRE(back.size() == inst.correspondences.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].source == inst.correspondences[k].source);
    CHECK(back[k].target == inst.correspondences[k].target);
  }
}

TEST_CASE("correspondence parsing") {
  const auto ok = parse("# comment\n\n0 0 0 1 1 1\n  1\t0 0 2 1 1  \r\n0 1 0 +1 2e0 1\n");
  CHECK(ok.size() == 3);
  CHECK(ok[2].target == Point3(1, 2, 1));

  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1\n0 0 0 1 1 1\n"); }).starts_with("t.corr:2:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 x 1\n"); }).starts_with("t.corr:2:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1 1\n0 nan 0 1 1 1\n"); }).starts_with("t.corr:3:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1 1\n0 inf 0 1 1 1\n"); }).starts_with("t.corr:3:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1 1\n0 0 0 1 1 +-1\n"); }).starts_with("t.corr:3:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1 1\n0 0 0 1 1 ++1\n"); }).starts_with("t.corr:3:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1\n0 0 0 1 1 1\n0 0 0 1 1 +\n"); }).starts_with("t.corr:3:"));
  CHECK(error_of([] { parse("0 0 0 1 1 1 7\n"); }).starts_with("t.corr:1:"));
  CHECK(error_of([] { parse("1e999 0 0 1 1 1\n"); }).starts_with("t.corr:1:"));
  CHECK(error_of([] { parse(""); }).starts_with("t.corr:0:"));
  CHECK(error_of([] { parse("# only comments\n"); }).starts_with("t.corr:1:"));
  CHECK_FALSE(error_of([] { io::read_correspondences_file("/nonexistent/x.corr"); }).empty());
}

TEST_CASE("transform files") {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto t = random_transform(rng, 3.0);
    std::ostringstream out;
    io::write_transform(out, t);
    const auto back = parse_transform(out.str());
    CHECK_FALSE(back.reprojected);
    CHECK(back.transform.rotation() == t.rotation());
    CHECK(back.transform.translation() == t.translation());
  }

  CHECK(error_of([] { parse_transform("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 1 1\n"); }).starts_with("t.gt:4:"));
  CHECK(error_of([] { parse_transform("1 0 0 0\n0 1 0 0\n0 0 1 0\n"); }).starts_with("t.gt:3:"));
  CHECK(error_of([] { parse_transform("1 0 0\n"); }).starts_with("t.gt:1:"));
  CHECK(error_of([] { parse_transform("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n0 0 0 1\n"); })
            .starts_with("t.gt:5:"));

  const auto slightly_off = parse_transform("1.0001 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
  CHECK(slightly_off.reprojected);
  CHECK(is_rotation(slightly_off.transform.rotation()));
}

TEST_CASE("mask files") {
  const std::vector<bool> m{true, false, false, true};
  std::ostringstream out;
  io::write_mask(out, m);
  std::istringstream in(out.str());
  CHECK(io::read_mask(in) == m);
  std::istringstream bad("1\n2\n");
  CHECK(error_of([&] { io::read_mask(bad, "m"); }).starts_with("m:2:"));
}

TEST_CASE("result documents round-trip through JSON") {
  SynthConfig c;
  c.n = 300;
  c.seed = 2;
  const auto inst = generate(c);
  EstimatorParams p;
  p.inlier_threshold = 0.015;
  const auto r = estimate(inst.correspondences, p);
  io::ParamsEcho echo;
  echo.tau = p.tau;
  echo.k1 = p.k1;
  echo.k2 = p.k2;
  echo.inlier_threshold = p.inlier_threshold;
  const auto doc = io::make_result_document(r, echo);
  const auto text = io::to_json(doc).dump(2);
  const auto back = io::result_document_from_json(nlohmann::json::parse(text));
  CHECK(back == doc);
  CHECK(io::to_json(back).dump(2) == text);

  const auto j = io::to_json(doc);
  CHECK(j["stage_timings"].contains("graph_s"));
  CHECK(j["stage_timings"].contains("pgs_s"));
  CHECK(j["stage_timings"].contains("model_s"));

  const auto rr = io::to_registration_result(back);
  CHECK(rr.success == r.success);
  CHECK(rr.best_transform.rotation() == r.best_transform.rotation());
  CHECK(rr.best_transform.translation() == r.best_transform.translation());

  const auto quiet = io::make_result_document(r, echo, false);
  CHECK(quiet.graph_s == 0.0);
  CHECK(quiet.pgs_s == 0.0);

  CHECK_THROWS_AS(io::result_document_from_json(nlohmann::json::parse("{\"success\": 3}")), InputError);
  CHECK_THROWS_AS(io::result_document_from_json(nlohmann::json::parse("[]")), InputError);
}

TEST_CASE("benchmark csv rows") {
  io::BenchRow row;
  row.method = "turboreg";
  row.pair = "p0";
  row.n = 1000;
  row.tau = 0.0125;
  row.k1 = 1000;
  row.k2 = 2;
  row.inlier_threshold = 0.015;
  row.eval.re_deg = 0.5;
  row.eval.te_m = 0.01;
  row.eval.success = true;
  const auto line = io::bench_row_csv(row);
  const auto header = std::string(io::kBenchHeader);
  CHECK(std::count(line.begin(), line.end(), ',') == std::count(header.begin(), header.end(), ','));
  CHECK(line.starts_with("turboreg,p0,1000,0.0125,1000,2,0.015,0.5,0.01,1,"));

  EvalReport rep = summarize({row.eval});
  const auto s = io::summary_row_csv(rep);
  const auto sh = std::string(io::kSummaryHeader);
  CHECK(s.starts_with("SUMMARY,1,1,"));
  CHECK(std::count(s.begin(), s.end(), ',') == std::count(sh.begin(), sh.end(), ','));
}
