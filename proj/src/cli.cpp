#include "turboreg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "turboreg/compat_graph.hpp"
#include "turboreg/evaluation.hpp"
#include "turboreg/io.hpp"
#include "turboreg/random.hpp"
#include "turboreg/solver.hpp"
#include "turboreg/synth.hpp"

namespace turboreg::cli {

namespace {

namespace fs = std::filesystem;

struct EstimatorFlags {
  std::optional<double> tau;
  std::optional<double> resolution;
  std::size_t k1 = 1000;
  std::size_t k2 = 2;
  double inlier_thresh = 0.10;
  std::string graph = "o2";
  bool refine = false;
  int threads = 0;
  bool no_timings = false;
};

struct CriteriaFlags {
  std::optional<std::string> preset;
  std::optional<double> re_max;
  std::optional<double> te_max;

  SuccessCriteria resolve() const {
    SuccessCriteria c = SuccessCriteria::indoor();
    if (preset) {
      if (*preset == "kitti") {
        c = SuccessCriteria::kitti();
      } else if (*preset != "indoor") {
        throw InputError("unknown preset '" + *preset + "' (expected indoor or kitti)");
      }
    }
    if (re_max) c.re_max_deg = *re_max;
    if (te_max) c.te_max_m = *te_max;
    c.validate();
    return c;
  }
};

void add_estimator_options(CLI::App* app, EstimatorFlags& f) {
  app->add_option("--tau", f.tau, "Compatibility threshold (m); default 0.25 x resolution");
  app->add_option("--resolution", f.resolution,
                  "Point cloud resolution (m); default median nearest-neighbor spacing");
  app->add_option("--k1", f.k1, "Pivot count")->capture_default_str();
  app->add_option("--k2", f.k2, "TurboCliques kept per pivot")->capture_default_str();
  app->add_option("--inlier-thresh", f.inlier_thresh, "Inlier threshold for scoring (m)")
      ->capture_default_str();
  app->add_option("--graph", f.graph, "Graph mode")
      ->check(CLI::IsMember({"o2", "sc2"}))
      ->capture_default_str();
  app->add_flag("--refine", f.refine, "Re-fit the winner on its inlier set");
  app->add_option("--threads", f.threads, "Worker threads (0 = runtime default)");
  app->add_flag("--no-timings", f.no_timings, "Write zero stage timings (byte-stable output)");
}

void add_criteria_options(CLI::App* app, CriteriaFlags& f) {
  app->add_option("--preset", f.preset, "indoor (15 deg, 0.30 m) or kitti (5 deg, 0.60 m)")
      ->check(CLI::IsMember({"indoor", "kitti"}));
  app->add_option("--re-max", f.re_max, "Rotation error bound (deg), default 15");
  app->add_option("--te-max", f.te_max, "Translation error bound (m), default 0.30");
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

double resolve_tau(const EstimatorFlags& f, const CorrespondenceSet& corr) {
  if (f.tau) return *f.tau;
  if (f.resolution) {
    if (!(*f.resolution > 0.0)) throw InputError("--resolution must be positive");
    return 0.25 * *f.resolution;
  }
  const auto src = corr.sources();
  return 0.25 * estimate_resolution(src);
}

EstimatorParams make_params(const EstimatorFlags& f, double tau) {
  EstimatorParams p;
  p.tau = tau;
  p.k1 = f.k1;
  p.k2 = f.k2;
  p.inlier_threshold = f.inlier_thresh;
  p.graph_mode = parse_graph_mode(f.graph);
  p.refine = f.refine;
  p.validate();
  return p;
}

io::ParamsEcho echo(const EstimatorParams& p) {
  io::ParamsEcho e;
  e.tau = p.tau;
  e.k1 = p.k1;
  e.k2 = p.k2;
  e.inlier_threshold = p.inlier_threshold;
  e.graph_mode = to_string(p.graph_mode);
  e.refine = p.refine;
  return e;
}

// Writes to `path` when given, else to `fallback`.
template <typename Fn>
void emit(const std::optional<std::string>& path, std::ostream& fallback, Fn&& write) {
  if (!path) {
    write(fallback);
    return;
  }
  std::ofstream f(*path);
  if (!f) throw InputError("cannot write '" + *path + "'");
  write(f);
  if (!f) throw InputError("write to '" + *path + "' failed");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  std::istringstream in(s);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw InputError("bad " + what + " value '" + s + "'");
  return v;
}

// ---- register --------------------------------------------------------------

struct RegisterFlags {
  std::string corr;
  std::optional<std::string> out;
  EstimatorFlags est;
};

int run_register(const RegisterFlags& f, std::ostream& out, std::ostream& err) {
  set_threads(f.est.threads);
  const CorrespondenceSet corr = io::read_correspondences_file(f.corr);
  const double tau = resolve_tau(f.est, corr);
  const EstimatorParams params = make_params(f.est, tau);
  const RegistrationResult result = estimate(corr, params);
  const auto doc = io::make_result_document(result, echo(params), !f.est.no_timings);
  emit(f.out, out, [&](std::ostream& o) { o << io::to_json(doc).dump(2) << '\n'; });
  if (!result.success) {
    err << "registration failed: " << result.failure_reason << '\n';
    return kExitNoResult;
  }
  return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthFlags {
  SynthConfig config;
  std::string out_prefix;
};

std::vector<std::string> synth_header(const SynthConfig& c) {
  std::ostringstream o;
  o << "turboreg synth rng=" << Rng::kAlgorithm << " seed=" << c.seed << " n=" << c.n
    << " outlier_ratio=" << io::format_real(c.outlier_ratio)
    << " noise_sigma=" << io::format_real(c.noise_sigma)
    << " extent=" << io::format_real(c.extent);
  return {o.str(), "columns: sx sy sz tx ty tz"};
}

int run_synth(const SynthFlags& f, std::ostream&, std::ostream&) {
  const SynthInstance inst = generate(f.config);
  const std::string prefix = f.out_prefix;
  emit(prefix + ".corr", std::cout,
       [&](std::ostream& o) { io::write_correspondences(o, inst.correspondences, synth_header(f.config)); });
  emit(prefix + ".gt", std::cout, [&](std::ostream& o) { io::write_transform(o, inst.gt); });
  emit(prefix + ".mask", std::cout, [&](std::ostream& o) { io::write_mask(o, inst.inlier_mask); });
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  CriteriaFlags criteria;
  std::string format = "csv";
  std::optional<std::string> out;
};

RegistrationResult load_prediction(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError(path + ": invalid JSON");
    return io::to_registration_result(io::result_document_from_json(j));
  }
  std::istringstream ts(text);
  const auto t = io::read_transform(ts, path);
  if (t.reprojected) err << "warning: " << path << ": rotation re-projected onto SO(3)\n";
  RegistrationResult r;
  r.success = true;
  r.best_transform = t.transform;
  return r;
}

int run_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  if (f.pred.size() != f.gt.size()) {
    throw InputError("--pred and --gt counts differ (" + std::to_string(f.pred.size()) + " vs " +
                     std::to_string(f.gt.size()) + ")");
  }
  if (f.pred.empty()) throw InputError("no pairs given");
  const SuccessCriteria criteria = f.criteria.resolve();
  std::vector<std::pair<RegistrationResult, RigidTransform>> pairs;
  for (std::size_t k = 0; k < f.pred.size(); ++k) {
    const auto gt = io::read_transform_file(f.gt[k]);
    if (gt.reprojected) err << "warning: " << f.gt[k] << ": rotation re-projected onto SO(3)\n";
    pairs.emplace_back(load_prediction(f.pred[k], err), gt.transform);
  }
  const EvalReport report = evaluate_pairs(pairs, criteria);

  emit(f.out, out, [&](std::ostream& o) {
    if (f.format == "json") {
      nlohmann::ordered_json j;
      j["criteria"] = {{"re_max_deg", criteria.re_max_deg}, {"te_max_m", criteria.te_max_m}};
      j["pairs"] = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < report.per_pair.size(); ++k) {
        const auto& p = report.per_pair[k];
        nlohmann::ordered_json row;
        row["pred"] = f.pred[k];
        row["gt"] = f.gt[k];
        row["registered"] = p.registered;
        row["re_deg"] = p.registered ? nlohmann::ordered_json(p.re_deg) : nullptr;
        row["te_m"] = p.registered ? nlohmann::ordered_json(p.te_m) : nullptr;
        row["success"] = p.success;
        row["elapsed_s"] = p.elapsed_s;
        j["pairs"].push_back(row);
      }
      j["rr"] = report.rr;
      j["fps"] = report.fps;
      j["mean_re_success_deg"] = report.mean_re_over_successes;
      j["mean_te_success_m"] = report.mean_te_over_successes;
      j["mean_re_all_deg"] = report.mean_re_all;
      j["mean_te_all_m"] = report.mean_te_all;
      o << j.dump(2) << '\n';
      return;
    }
    o << "# re_max_deg=" << io::format_real(criteria.re_max_deg)
      << " te_max_m=" << io::format_real(criteria.te_max_m) << '\n';
    o << "pair,pred,gt,registered,re_deg,te_m,success,elapsed_s\n";
    for (std::size_t k = 0; k < report.per_pair.size(); ++k) {
      const auto& p = report.per_pair[k];
      o << k << ',' << f.pred[k] << ',' << f.gt[k] << ',' << (p.registered ? 1 : 0) << ','
        << io::format_real(p.re_deg) << ',' << io::format_real(p.te_m) << ','
        << (p.success ? 1 : 0) << ',' << io::format_real(p.elapsed_s) << '\n';
    }
    o << io::kSummaryHeader << '\n' << io::summary_row_csv(report) << '\n';
  });
  return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchFlags {
  std::optional<std::string> dataset_dir;
  std::optional<std::string> synth_sweep;
  std::string method = "turboreg";
  double noise = 0.005;
  double extent = 1.0;
  std::uint64_t ransac_seed = 0;
  EstimatorFlags est;
  CriteriaFlags criteria;
  std::optional<std::string> out;
};

struct BenchPair {
  std::string name;
  CorrespondenceSet corr;
  RigidTransform gt;
};

std::vector<BenchPair> load_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::vector<fs::path> corr_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".corr") {
      corr_files.push_back(entry.path());
    }
  }
  std::sort(corr_files.begin(), corr_files.end());
  std::vector<BenchPair> pairs;
  for (const auto& p : corr_files) {
    fs::path gt = p;
    gt.replace_extension(".gt");
    if (!fs::exists(gt)) throw InputError("missing ground truth '" + gt.string() + "'");
    pairs.push_back({p.stem().string(), io::read_correspondences_file(p.string()),
                     io::read_transform_file(gt.string()).transform});
  }
  return pairs;
}

// "n=500,1000;outlier=0.9;seeds=0:99" (seeds: inclusive range or list).
std::vector<SynthConfig> parse_sweep(const std::string& text, double noise, double extent) {
  std::vector<std::size_t> ns{1000};
  std::vector<double> ratios{0.9};
  std::vector<std::uint64_t> seeds{0};
  for (const auto& field : split(text, ';')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw InputError("sweep field '" + field + "' lacks '='");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "n") {
      ns.clear();
      for (const auto& v : split(value, ',')) ns.push_back(parse_number<std::size_t>(v, "n"));
    } else if (key == "outlier") {
      ratios.clear();
      for (const auto& v : split(value, ',')) ratios.push_back(parse_number<double>(v, "outlier"));
    } else if (key == "seeds") {
      seeds.clear();
      const auto colon = value.find(':');
      if (colon != std::string::npos) {
        const auto lo = parse_number<std::uint64_t>(value.substr(0, colon), "seed");
        const auto hi = parse_number<std::uint64_t>(value.substr(colon + 1), "seed");
        if (hi < lo) throw InputError("seed range '" + value + "' is empty");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      } else {
        for (const auto& v : split(value, ',')) seeds.push_back(parse_number<std::uint64_t>(v, "seed"));
      }
    } else {
      throw InputError("unknown sweep key '" + key + "'");
    }
  }
  std::vector<SynthConfig> configs;
  for (auto n : ns) {
    for (auto r : ratios) {
      for (auto s : seeds) configs.push_back({n, r, noise, extent, s});
    }
  }
  return configs;
}

int run_bench(const BenchFlags& f, std::ostream& out, std::ostream&) {
  if (f.dataset_dir.has_value() == f.synth_sweep.has_value()) {
    throw InputError("give exactly one of --dataset-dir or --synth-sweep");
  }
  const SuccessCriteria criteria = f.criteria.resolve();
  std::vector<BenchPair> pairs;
  if (f.dataset_dir) {
    pairs = load_dataset(*f.dataset_dir);
  } else {
    for (const auto& c : parse_sweep(*f.synth_sweep, f.noise, f.extent)) {
      SynthInstance inst = generate(c);
      std::ostringstream name;
      name << "synth_n" << c.n << "_o" << io::format_real(c.outlier_ratio) << "_s" << c.seed;
      pairs.push_back({name.str(), std::move(inst.correspondences), inst.gt});
    }
  }
  if (pairs.empty()) throw InputError("dataset is empty");
  // Validate estimator flags before running anything.
  make_params(f.est, f.est.tau.value_or(1.0));

  set_threads(f.est.threads);
  std::vector<io::BenchRow> rows(pairs.size());
  std::vector<std::string> errors(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t sk = 0; sk < static_cast<std::ptrdiff_t>(pairs.size()); ++sk) {
    const auto k = static_cast<std::size_t>(sk);
    try {
      const auto& pair = pairs[k];
      const double tau = resolve_tau(f.est, pair.corr);
      const EstimatorParams params = make_params(f.est, tau);
      const RegistrationResult r =
          f.method == "ransac"
              ? ransac_baseline(pair.corr, params.k1 * params.k2, params.inlier_threshold,
                                f.ransac_seed + k)
              : estimate(pair.corr, params);
      io::BenchRow row;
      row.method = f.method;
      row.pair = pair.name;
      row.n = pair.corr.size();
      row.tau = f.method == "ransac" ? 0.0 : tau;
      row.k1 = params.k1;
      row.k2 = params.k2;
      row.inlier_threshold = params.inlier_threshold;
      row.eval = evaluate_pair(r, pair.gt, criteria);
      row.hypotheses = r.hypotheses_evaluated;
      row.neighbor_checks = r.neighbor_checks;
      if (!f.est.no_timings) {
        row.graph_s = r.stage_timings.at(kStageGraph);
        row.pgs_s = r.stage_timings.at(kStagePgs);
        row.model_s = r.stage_timings.at(kStageModel);
      }
      row.eval.elapsed_s = row.graph_s + row.pgs_s + row.model_s;
      rows[k] = std::move(row);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw InputError(e);
  }

  std::vector<PairEvaluation> evals;
  for (const auto& r : rows) evals.push_back(r.eval);
  const EvalReport report = summarize(evals);
  emit(f.out, out, [&](std::ostream& o) {
    o << io::kBenchHeader << '\n';
    for (const auto& r : rows) o << io::bench_row_csv(r) << '\n';
    o << io::kSummaryHeader << '\n' << io::summary_row_csv(report) << '\n';
  });
  return kExitOk;
}

// ---- diag-stability --------------------------------------------------------

struct StabilityFlags {
  std::vector<double> taus{0.01, 0.1, 0.5};
  std::size_t clique_size = 10;
  std::size_t seeds = 30;
  std::uint64_t seed = 0;
  std::size_t max_cliques = 50;
  std::optional<std::string> corr;
  SynthConfig synth{200, 0.5, 0.01, 1.0, 0};
  std::optional<std::string> samples_out;
  std::optional<std::string> out;
  int threads = 0;
};

int run_stability(const StabilityFlags& f, std::ostream& out, std::ostream& err) {
  if (f.clique_size < 4) throw InputError("--clique-size must be at least 4");
  if (f.seeds < 1) throw InputError("--seeds must be at least 1");
  if (f.taus.empty()) throw InputError("--taus is empty");
  set_threads(f.threads);

  StabilityConfig config;
  config.clique_size = f.clique_size;
  config.max_cliques = f.max_cliques;
  config.seed = f.seed;

  std::vector<CorrespondenceSet> instances;
  if (f.corr) {
    // One input, `seeds` independent growth streams pooled.
    const auto corr = io::read_correspondences_file(*f.corr);
    instances.assign(f.seeds, corr);
  } else {
    for (std::size_t s = 0; s < f.seeds; ++s) {
      SynthConfig c = f.synth;
      c.seed = f.seed + s;
      instances.push_back(generate(c).correspondences);
    }
  }
  const StabilityTable table = clique_stability_experiment(instances, f.taus, config);

  const bool any = std::any_of(table.rows.begin(), table.rows.end(),
                               [](const StabilityRow& r) { return r.present; });
  emit(f.out, out, [&](std::ostream& o) {
    o << "tau,median_delta_r_deg,median_delta_t_m,samples,cliques\n";
    for (const auto& r : table.rows) {
      o << io::format_real(r.tau) << ',';
      if (r.present) {
        o << io::format_real(r.median_delta_r_deg) << ',' << io::format_real(r.median_delta_t_m);
      } else {
        o << "absent,absent";
      }
      o << ',' << r.samples << ',' << r.cliques << '\n';
    }
  });
  if (f.samples_out) {
    emit(f.samples_out, out, [&](std::ostream& o) {
      o << "tau,delta_r_deg,delta_t_m\n";
      for (const auto& s : table.samples) {
        o << io::format_real(s.tau) << ',' << io::format_real(s.delta_r_deg) << ','
          << io::format_real(s.delta_t_m) << '\n';
      }
    });
  }
  if (!any) {
    err << "no clique of size " << f.clique_size << " found at any tau\n";
    return kExitNoResult;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"TurboReg point cloud registration toolkit"};
  app.require_subcommand(1);

  RegisterFlags reg;
  auto* reg_cmd = app.add_subcommand("register", "Estimate a rigid transform from correspondences");
  reg_cmd->add_option("--corr", reg.corr, "Correspondence file")->required();
  reg_cmd->add_option("--out", reg.out, "Write the result document here instead of stdout");
  add_estimator_options(reg_cmd, reg.est);

  SynthFlags syn;
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic instance with ground truth");
  syn_cmd->add_option("--n", syn.config.n, "Correspondence count")->capture_default_str();
  syn_cmd->add_option("--outlier-ratio", syn.config.outlier_ratio, "Outlier fraction in [0,1)")
      ->capture_default_str();
  syn_cmd->add_option("--noise", syn.config.noise_sigma, "Inlier noise sigma (m)")
      ->capture_default_str();
  syn_cmd->add_option("--extent", syn.config.extent, "Source cube side (m)")->capture_default_str();
  syn_cmd->add_option("--seed", syn.config.seed, "RNG seed")->capture_default_str();
  syn_cmd->add_option("--out-prefix", syn.out_prefix, "Writes PREFIX.corr/.gt/.mask")->required();

  EvalFlags ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score predicted transforms against ground truth");
  ev_cmd->add_option("--pred", ev.pred, "Result documents or transform files")->required();
  ev_cmd->add_option("--gt", ev.gt, "Ground-truth transform files")->required();
  ev_cmd->add_option("--format", ev.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  ev_cmd->add_option("--out", ev.out);
  add_criteria_options(ev_cmd, ev.criteria);

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a method over a dataset or synthetic sweep");
  bench_cmd->add_option("--dataset-dir", bench.dataset_dir, "Directory of NAME.corr + NAME.gt");
  bench_cmd->add_option("--synth-sweep", bench.synth_sweep,
                        "e.g. \"n=500,1000;outlier=0.9;seeds=0:99\"");
  bench_cmd->add_option("--method", bench.method)
      ->check(CLI::IsMember({"turboreg", "ransac"}))
      ->capture_default_str();
  bench_cmd->add_option("--noise", bench.noise, "Sweep inlier noise (m)")->capture_default_str();
  bench_cmd->add_option("--extent", bench.extent, "Sweep cube side (m)")->capture_default_str();
  bench_cmd->add_option("--ransac-seed", bench.ransac_seed, "Base seed for RANSAC sampling");
  bench_cmd->add_option("--out", bench.out);
  add_estimator_options(bench_cmd, bench.est);
  add_criteria_options(bench_cmd, bench.criteria);

  StabilityFlags stab;
  auto* stab_cmd =
      app.add_subcommand("diag-stability", "3-subset vs whole-clique fit discrepancy across tau");
  stab_cmd->add_option("--taus", stab.taus, "Comma-separated thresholds (m)")->delimiter(',');
  stab_cmd->add_option("--clique-size", stab.clique_size)->capture_default_str();
  stab_cmd->add_option("--seeds", stab.seeds, "Instances (or growth streams with --corr)")
      ->capture_default_str();
  stab_cmd->add_option("--seed", stab.seed, "Base seed")->capture_default_str();
  stab_cmd->add_option("--max-cliques", stab.max_cliques, "Cliques per tau and instance")
      ->capture_default_str();
  stab_cmd->add_option("--corr", stab.corr, "Use this correspondence file instead of synthetic data");
  stab_cmd->add_option("--n", stab.synth.n)->capture_default_str();
  stab_cmd->add_option("--outlier-ratio", stab.synth.outlier_ratio)->capture_default_str();
  stab_cmd->add_option("--noise", stab.synth.noise_sigma)->capture_default_str();
  stab_cmd->add_option("--extent", stab.synth.extent)->capture_default_str();
  stab_cmd->add_option("--samples-out", stab.samples_out, "Raw per-subset samples CSV");
  stab_cmd->add_option("--out", stab.out);
  stab_cmd->add_option("--threads", stab.threads);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (reg_cmd->parsed()) return run_register(reg, out, err);
    if (syn_cmd->parsed()) return run_synth(syn, out, err);
    if (ev_cmd->parsed()) return run_eval(ev, out, err);
    if (bench_cmd->parsed()) return run_bench(bench, out, err);
    if (stab_cmd->parsed()) return run_stability(stab, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace turboreg::cli
