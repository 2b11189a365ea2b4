#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "turboreg/evaluation.hpp"
#include "turboreg/types.hpp"

namespace turboreg::io {

/// Shortest "%.17g" rendering; round-trips every finite double.
std::string format_real(double v);

// .corr: one "sx sy sz tx ty tz" record per line, '#' comments, blank lines
// skipped. Errors carry "<source>:<line>:".
CorrespondenceSet read_correspondences(std::istream& in, const std::string& source = "<input>");
CorrespondenceSet read_correspondences_file(const std::string& path);
void write_correspondences(std::ostream& out, const CorrespondenceSet& corr,
                           const std::vector<std::string>& header_comments = {});

struct TransformRead {
  RigidTransform transform;
  bool reprojected = false;
};

// .gt: four rows of four reals, row-major homogeneous matrix.
TransformRead read_transform(std::istream& in, const std::string& source = "<input>");
TransformRead read_transform_file(const std::string& path);
void write_transform(std::ostream& out, const RigidTransform& t);

// .mask: one 0/1 per line.
std::vector<bool> read_mask(std::istream& in, const std::string& source = "<input>");
void write_mask(std::ostream& out, const std::vector<bool>& mask);

struct ParamsEcho {
  std::string method = "turboreg";
  double tau = 0.0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double inlier_threshold = 0.0;
  std::string graph_mode = "o2";
  bool refine = false;
  std::uint64_t iterations = 0;  // RANSAC only
  std::uint64_t seed = 0;

  friend bool operator==(const ParamsEcho&, const ParamsEcho&) = default;
};

/// JSON result written by `register`.
struct ResultDocument {
  bool success = false;
  std::string failure_reason;
  std::array<double, 16> transform{};  // row-major 4×4
  std::size_t inlier_count = 0;
  std::vector<std::size_t> inlier_indices;
  std::array<std::size_t, 3> best_clique{};
  std::size_t hypotheses_evaluated = 0;
  std::size_t cliques_searched = 0;
  std::size_t degenerate_cliques = 0;
  std::uint64_t neighbor_checks = 0;
  double graph_s = 0.0;
  double pgs_s = 0.0;
  double model_s = 0.0;
  ParamsEcho params;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ResultDocument make_result_document(const RegistrationResult& r, const ParamsEcho& params,
                                    bool include_timings = true);
nlohmann::ordered_json to_json(const ResultDocument& doc);
ResultDocument result_document_from_json(const nlohmann::json& j);

/// Rebuilds the parts of a RegistrationResult that evaluation needs.
RegistrationResult to_registration_result(const ResultDocument& doc);

// Benchmark CSV.
inline constexpr const char* kBenchHeader =
    "method,pair,n,tau,k1,k2,inlier_thresh,re_deg,te_m,success,hypotheses,neighbor_checks,"
    "graph_s,pgs_s,model_s,total_s";
inline constexpr const char* kSummaryHeader =
    "#summary,pairs,rr,fps,mean_re_success_deg,mean_te_success_m,mean_re_all_deg,mean_te_all_m";

struct BenchRow {
  std::string method;
  std::string pair;
  std::size_t n = 0;
  double tau = 0.0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double inlier_threshold = 0.0;
  PairEvaluation eval;
  std::size_t hypotheses = 0;
  std::uint64_t neighbor_checks = 0;
  double graph_s = 0.0;
  double pgs_s = 0.0;
  double model_s = 0.0;
};

std::string bench_row_csv(const BenchRow& row);
std::string summary_row_csv(const EvalReport& report);

}  // namespace turboreg::io
