#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "turboreg/cli.hpp"
#include "turboreg/evaluation.hpp"
#include "turboreg/io.hpp"
#include "turboreg/random.hpp"

using namespace turboreg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("turboreg_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t data_lines(const std::string& text) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++n;
  return n;
}

std::string synth(const std::string& name, const std::vector<std::string>& extra) {
  const auto prefix = (scratch() / name).string();
  std::vector<std::string> args{"synth", "--out-prefix", prefix};
  args.insert(args.end(), extra.begin(), extra.end());
  REQUIRE(run(args).code == 0);
  return prefix;
}

}  // namespace

TEST_CASE("synth writes the three files deterministically") {
  const auto p = synth("tiny", {"--n", "3", "--outlier-ratio", "0"});
  CHECK(data_lines(slurp(p + ".corr")) == 3);
  CHECK(data_lines(slurp(p + ".mask")) == 3);
  CHECK(data_lines(slurp(p + ".gt")) == 4);

  const auto a = synth("det_a", {"--n", "50", "--seed", "9"});
  const auto b = synth("det_b", {"--n", "50", "--seed", "9"});
  CHECK(slurp(a + ".corr") == slurp(b + ".corr"));
  CHECK(slurp(a + ".gt") == slurp(b + ".gt"));
  CHECK(slurp(a + ".mask") == slurp(b + ".mask"));

  CHECK(run({"synth", "--out-prefix", (scratch() / "bad").string(), "--outlier-ratio", "1.0"}).code == 1);
}

TEST_CASE("register exit codes and output") {
  const auto clean = synth("clean", {"--n", "200", "--outlier-ratio", "0", "--noise", "0"});
  const auto r = run({"register", "--corr", clean + ".corr", "--tau", "0.01", "--inlier-thresh", "0.001"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["success"] == true);
  CHECK(j["inlier_count"] == 200);
  CHECK(j["params"]["k1"] == 1000);
  CHECK(j["params"]["k2"] == 2);
  CHECK(j["params"]["graph"] == "o2");

  const auto empty = scratch() / "empty.corr";
  spit(empty, "");
  const auto e = run({"register", "--corr", empty.string()});
  CHECK(e.code == 1);
  CHECK(e.err.find(":0:") != std::string::npos);

  CHECK(run({"register", "--corr", (scratch() / "missing.corr").string()}).code == 1);
  CHECK(run({"register"}).code == 1);
  CHECK(run({"register", "--corr", clean + ".corr", "--k1", "0"}).code == 1);
  CHECK(run({"register", "--corr", clean + ".corr", "--graph", "bogus"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);

  const auto nomatch = scratch() / "nomatch.corr";
  spit(nomatch, "0 0 0 0 0 0\n1 0 0 3 0 0\n0 1 0 0 7 0\n0 0 1 0 0 20\n");
  const auto f = run({"register", "--corr", nomatch.string(), "--tau", "0.01"});
  CHECK(f.code == 2);
  CHECK(nlohmann::json::parse(f.out)["success"] == false);
}

TEST_CASE("register on the 90% outlier instance") {
  const auto p = synth("desk", {"--seed", "1"});
  const auto loose = scratch() / "desk_default.json";
  REQUIRE(run({"register", "--corr", p + ".corr", "--out", loose.string()}).code == 0);
  const auto d = run({"eval", "--pred", loose.string(), "--gt", p + ".gt", "--preset", "indoor"});
  REQUIRE(d.code == 0);
  CHECK(d.out.find("\nSUMMARY,1,1,") != std::string::npos);

  const auto tight = scratch() / "desk_3sigma.json";
  REQUIRE(run({"register", "--corr", p + ".corr", "--inlier-thresh", "0.015", "--out", tight.string()}).code == 0);
  const auto e = run({"eval", "--pred", tight.string(), "--gt", p + ".gt", "--re-max", "2", "--te-max", "0.03"});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("\nSUMMARY,1,1,") != std::string::npos);
}

TEST_CASE("register output does not depend on threads") {
  const auto p = synth("threads", {"--n", "800", "--seed", "4"});
  const auto a = run({"register", "--corr", p + ".corr", "--threads", "1", "--no-timings"});
  const auto b = run({"register", "--corr", p + ".corr", "--threads", "8", "--no-timings"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("eval presets and argument checks") {
  const auto p = synth("evalp", {"--n", "20"});
  const auto kitti = run({"eval", "--pred", p + ".gt", "--gt", p + ".gt", "--preset", "kitti"});
  REQUIRE(kitti.code == 0);
  CHECK(kitti.out.starts_with("# re_max_deg=5 te_max_m=0.6\n"));
  CHECK(kitti.out.find("\nSUMMARY,1,1,") != std::string::npos);
  const auto indoor = run({"eval", "--pred", p + ".gt", "--gt", p + ".gt", "--preset", "indoor"});
  CHECK(indoor.out.starts_with("# re_max_deg=15 te_max_m=0.3\n"));
  const auto plain = run({"eval", "--pred", p + ".gt", "--gt", p + ".gt"});
  CHECK(plain.out.starts_with("# re_max_deg=15 te_max_m=0.3\n"));
  const auto js = run({"eval", "--pred", p + ".gt", "--gt", p + ".gt", "--format", "json"});
  REQUIRE(js.code == 0);
  CHECK(nlohmann::json::parse(js.out)["rr"] == 1.0);

  CHECK(run({"eval", "--pred", p + ".gt", p + ".gt", "--gt", p + ".gt"}).code == 1);
  CHECK(run({"eval", "--pred", p + ".gt", "--gt", p + ".corr"}).code == 1);
  CHECK(run({"eval", "--pred", p + ".gt", "--gt", p + ".gt", "--preset", "mars"}).code == 1);
}

TEST_CASE("bench over a dataset directory") {
  const auto dir = scratch() / "ds";
  fs::create_directories(dir);
  synth("ds/pair0", {"--n", "300", "--seed", "2"});
  const auto r = run({"bench", "--dataset-dir", dir.string(), "--inlier-thresh", "0.015", "--tau", "0.0125"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == io::kBenchHeader);
  CHECK(lines[1].starts_with("turboreg,pair0,300,"));
  CHECK(lines[2] == io::kSummaryHeader);
  CHECK(lines[3].starts_with("SUMMARY,1,"));

  const auto none = scratch() / "empty_ds";
  fs::create_directories(none);
  CHECK(run({"bench", "--dataset-dir", none.string()}).code == 1);
  CHECK(run({"bench"}).code == 1);
}

TEST_CASE("bench sweep counter column scales as k1 (n - 2)") {
  const auto r = run({"bench", "--synth-sweep", "n=500,1000,2000;outlier=0.9;seeds=0:0", "--k1", "100",
                      "--tau", "0.0125", "--inlier-thresh", "0.015", "--no-timings"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  const std::size_t ns[] = {500, 1000, 2000};
  for (std::size_t n : ns) {
    REQUIRE(std::getline(in, line));
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 16);
    CHECK(cols[2] == std::to_string(n));
    CHECK(cols[11] == std::to_string(100 * (n - 2)));
  }

  const auto ransac = run({"bench", "--synth-sweep", "n=500;outlier=0.5;seeds=0:1", "--method", "ransac",
                           "--k1", "50", "--inlier-thresh", "0.015"});
  CHECK(ransac.code == 0);
  CHECK(ransac.out.find("\nransac,") != std::string::npos);
  CHECK(run({"bench", "--synth-sweep", "n=500;outlier=0.5;seeds=3:1"}).code == 1);
  CHECK(run({"bench", "--synth-sweep", "garbage"}).code == 1);
}

TEST_CASE("diag-stability") {
  const auto r = run({"diag-stability", "--seeds", "3", "--max-cliques", "10"});
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("tau,median_delta_r_deg,median_delta_t_m,samples,cliques\n"));
  CHECK(data_lines(r.out) == 4);

  const auto clean = synth("stab_clean", {"--n", "100", "--outlier-ratio", "0", "--noise", "0"});
  const auto z = run({"diag-stability", "--corr", clean + ".corr", "--seeds", "2", "--max-cliques", "5"});
  REQUIRE(z.code == 0);
  std::istringstream in(z.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tau, dr;
    std::getline(ss, tau, ',');
    std::getline(ss, dr, ',');
    CHECK(std::stod(dr) < 1e-6);
  }

  CHECK(run({"diag-stability", "--clique-size", "3"}).code == 1);
  CHECK(run({"diag-stability", "--clique-size", "500", "--taus", "0.001", "--seeds", "1"}).code == 2);
}

TEST_CASE("malformed inputs never crash register") {
  Rng rng(123);
  const std::string alphabet = "0123456789 .-+eE#\n\tnaif,x";
  for (int k = 0; k < 200; ++k) {
    std::string text;
    const auto len = rng.below(200);
    for (std::uint64_t c = 0; c < len; ++c) text += alphabet[rng.below(alphabet.size())];
    const auto path = scratch() / ("fuzz" + std::to_string(k) + ".corr");
    spit(path, text);
    const auto r = run({"register", "--corr", path.string(), "--tau", "0.01"});
    CHECK((r.code == 0 || r.code == 1 || r.code == 2));
    if (r.code == 1) CHECK_FALSE(r.err.empty());
  }
}
