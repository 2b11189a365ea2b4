#include "turboreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace turboreg::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

// Whitespace-separated finite reals; exactly `expected` of them.
std::vector<double> parse_reals(std::string_view line, std::size_t expected,
                                const std::string& source, std::size_t lineno) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    const std::string_view token = line.substr(pos, end - pos);
    double v = 0.0;
    const char* b = token.data();
    if (token.size() > 1 && token.front() == '+' && token[1] != '-' && token[1] != '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(source, lineno, "not a number: '" + std::string(token) + "'");
    }
    if (!std::isfinite(v)) fail(source, lineno, "non-finite value '" + std::string(token) + "'");
    values.push_back(v);
    pos = end;
  }
  if (values.size() != expected) {
    fail(source, lineno, "expected " + std::to_string(expected) + " values, found " +
                             std::to_string(values.size()));
  }
  return values;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

CorrespondenceSet read_correspondences(std::istream& in, const std::string& source) {
  std::vector<Correspondence> items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto v = parse_reals(line, 6, source, lineno);
    items.push_back({Point3(v[0], v[1], v[2]), Point3(v[3], v[4], v[5])});
  }
  if (items.size() < CorrespondenceSet::kMinSize) {
    fail(source, lineno, "need at least 3 correspondence records, found " +
                             std::to_string(items.size()));
  }
  return CorrespondenceSet(std::move(items));
}

CorrespondenceSet read_correspondences_file(const std::string& path) {
  auto in = open_input(path);
  return read_correspondences(in, path);
}

void write_correspondences(std::ostream& out, const CorrespondenceSet& corr,
                           const std::vector<std::string>& header_comments) {
  for (const auto& h : header_comments) out << "# " << h << '\n';
  for (const auto& c : corr) {
    out << format_real(c.source.x()) << ' ' << format_real(c.source.y()) << ' '
        << format_real(c.source.z()) << ' ' << format_real(c.target.x()) << ' '
        << format_real(c.target.y()) << ' ' << format_real(c.target.z()) << '\n';
  }
}

TransformRead read_transform(std::istream& in, const std::string& source) {
  Matrix4 m;
  std::size_t rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    if (rows == 4) fail(source, lineno, "unexpected content after 4 matrix rows");
    const auto v = parse_reals(line, 4, source, lineno);
    for (int c = 0; c < 4; ++c) m(static_cast<Eigen::Index>(rows), c) = v[static_cast<std::size_t>(c)];
    ++rows;
  }
  if (rows != 4) fail(source, lineno, "expected 4 matrix rows, found " + std::to_string(rows));
  const Eigen::RowVector4d bottom(0, 0, 0, 1);
  if ((m.row(3) - bottom).cwiseAbs().maxCoeff() > kRotationTolerance) {
    fail(source, lineno, "bottom row must be 0 0 0 1");
  }
  TransformRead out;
  try {
    out.transform = RigidTransform::from_projected(m.topLeftCorner<3, 3>(),
                                                   m.topRightCorner<3, 1>(), &out.reprojected);
  } catch (const InputError& e) {
    fail(source, lineno, e.what());
  }
  return out;
}

TransformRead read_transform_file(const std::string& path) {
  auto in = open_input(path);
  return read_transform(in, path);
}

void write_transform(std::ostream& out, const RigidTransform& t) {
  const Matrix4 m = t.matrix();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out << (c ? " " : "") << format_real(m(r, c));
    out << '\n';
  }
}

std::vector<bool> read_mask(std::istream& in, const std::string& source) {
  std::vector<bool> mask;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto t = trim(line);
    if (t == "0") {
      mask.push_back(false);
    } else if (t == "1") {
      mask.push_back(true);
    } else {
      fail(source, lineno, "mask entries must be 0 or 1");
    }
  }
  return mask;
}

void write_mask(std::ostream& out, const std::vector<bool>& mask) {
  for (bool b : mask) out << (b ? '1' : '0') << '\n';
}

ResultDocument make_result_document(const RegistrationResult& r, const ParamsEcho& params,
                                    bool include_timings) {
  ResultDocument d;
  d.success = r.success;
  d.failure_reason = r.failure_reason;
  const Matrix4 m = r.success ? r.best_transform.matrix() : Matrix4::Identity();
  for (int row = 0; row < 4; ++row) {
    for (int c = 0; c < 4; ++c) d.transform[static_cast<std::size_t>(row * 4 + c)] = m(row, c);
  }
  d.inlier_count = r.best_inlier_count;
  d.inlier_indices = r.inlier_indices;
  d.best_clique = {r.best_clique.i, r.best_clique.j, r.best_clique.z};
  d.hypotheses_evaluated = r.hypotheses_evaluated;
  d.cliques_searched = r.cliques_searched;
  d.degenerate_cliques = r.degenerate_cliques;
  d.neighbor_checks = r.neighbor_checks;
  if (include_timings) {
    const auto get = [&](const char* key) {
      const auto it = r.stage_timings.find(key);
      return it == r.stage_timings.end() ? 0.0 : it->second;
    };
    d.graph_s = get(kStageGraph);
    d.pgs_s = get(kStagePgs);
    d.model_s = get(kStageModel);
  }
  d.params = params;
  return d;
}

nlohmann::ordered_json to_json(const ResultDocument& d) {
  nlohmann::ordered_json j;
  j["success"] = d.success;
  j["failure_reason"] = d.failure_reason;
  j["transform"] = d.transform;
  j["inlier_count"] = d.inlier_count;
  j["inlier_indices"] = d.inlier_indices;
  j["best_clique"] = d.best_clique;
  j["hypotheses_evaluated"] = d.hypotheses_evaluated;
  j["cliques_searched"] = d.cliques_searched;
  j["degenerate_cliques"] = d.degenerate_cliques;
  j["neighbor_checks"] = d.neighbor_checks;
  j["stage_timings"] = {{"graph_s", d.graph_s}, {"pgs_s", d.pgs_s}, {"model_s", d.model_s}};
  j["params"] = {{"method", d.params.method},
                 {"tau", d.params.tau},
                 {"k1", d.params.k1},
                 {"k2", d.params.k2},
                 {"inlier_threshold", d.params.inlier_threshold},
                 {"graph", d.params.graph_mode},
                 {"refine", d.params.refine},
                 {"iterations", d.params.iterations},
                 {"seed", d.params.seed}};
  return j;
}

ResultDocument result_document_from_json(const nlohmann::json& j) {
  try {
    ResultDocument d;
    d.success = j.at("success").get<bool>();
    d.failure_reason = j.at("failure_reason").get<std::string>();
    d.transform = j.at("transform").get<std::array<double, 16>>();
    d.inlier_count = j.at("inlier_count").get<std::size_t>();
    d.inlier_indices = j.at("inlier_indices").get<std::vector<std::size_t>>();
    d.best_clique = j.at("best_clique").get<std::array<std::size_t, 3>>();
    d.hypotheses_evaluated = j.at("hypotheses_evaluated").get<std::size_t>();
    d.cliques_searched = j.at("cliques_searched").get<std::size_t>();
    d.degenerate_cliques = j.at("degenerate_cliques").get<std::size_t>();
    d.neighbor_checks = j.at("neighbor_checks").get<std::uint64_t>();
    const auto& st = j.at("stage_timings");
    d.graph_s = st.at("graph_s").get<double>();
    d.pgs_s = st.at("pgs_s").get<double>();
    d.model_s = st.at("model_s").get<double>();
    const auto& p = j.at("params");
    d.params.method = p.at("method").get<std::string>();
    d.params.tau = p.at("tau").get<double>();
    d.params.k1 = p.at("k1").get<std::size_t>();
    d.params.k2 = p.at("k2").get<std::size_t>();
    d.params.inlier_threshold = p.at("inlier_threshold").get<double>();
    d.params.graph_mode = p.at("graph").get<std::string>();
    d.params.refine = p.at("refine").get<bool>();
    d.params.iterations = p.at("iterations").get<std::uint64_t>();
    d.params.seed = p.at("seed").get<std::uint64_t>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result document: ") + e.what());
  }
}

RegistrationResult to_registration_result(const ResultDocument& d) {
  RegistrationResult r;
  r.success = d.success;
  r.failure_reason = d.failure_reason;
  if (d.success) {
    Matrix3 rot;
    Point3 t;
    for (int row = 0; row < 3; ++row) {
      for (int c = 0; c < 3; ++c) rot(row, c) = d.transform[static_cast<std::size_t>(row * 4 + c)];
      t(row) = d.transform[static_cast<std::size_t>(row * 4 + 3)];
    }
    r.best_transform = RigidTransform::from_projected(rot, t);
  }
  r.best_inlier_count = d.inlier_count;
  r.inlier_indices = d.inlier_indices;
  r.best_clique = {d.best_clique[0], d.best_clique[1], d.best_clique[2], 0};
  r.hypotheses_evaluated = d.hypotheses_evaluated;
  r.cliques_searched = d.cliques_searched;
  r.degenerate_cliques = d.degenerate_cliques;
  r.neighbor_checks = d.neighbor_checks;
  r.stage_timings = {{kStageGraph, d.graph_s}, {kStagePgs, d.pgs_s}, {kStageModel, d.model_s}};
  return r;
}

std::string bench_row_csv(const BenchRow& row) {
  std::ostringstream o;
  o << row.method << ',' << row.pair << ',' << row.n << ',' << format_real(row.tau) << ','
    << row.k1 << ',' << row.k2 << ',' << format_real(row.inlier_threshold) << ','
    << format_real(row.eval.re_deg) << ',' << format_real(row.eval.te_m) << ','
    << (row.eval.success ? 1 : 0) << ',' << row.hypotheses << ',' << row.neighbor_checks << ','
    << format_real(row.graph_s) << ',' << format_real(row.pgs_s) << ','
    << format_real(row.model_s) << ',' << format_real(row.graph_s + row.pgs_s + row.model_s);
  return o.str();
}

std::string summary_row_csv(const EvalReport& report) {
  std::ostringstream o;
  o << "SUMMARY," << report.per_pair.size() << ',' << format_real(report.rr) << ','
    << format_real(report.fps) << ',' << format_real(report.mean_re_over_successes) << ','
    << format_real(report.mean_te_over_successes) << ',' << format_real(report.mean_re_all) << ','
    << format_real(report.mean_te_all);
  return o.str();
}

}  // namespace turboreg::io
