#include "turboreg/pgs.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

namespace turboreg {

bool canonical_before(const TurboClique& a, const TurboClique& b) {
  if (a.aggregated_weight != b.aggregated_weight) return a.aggregated_weight > b.aggregated_weight;
  return a.key() < b.key();
}

std::vector<Pivot> select_pivots(const WeightedGraph& g, std::size_t k1) {
  const auto edges = g.positive_edges();
  std::vector<Pivot> pivots;
  pivots.reserve(edges.size());
  for (const auto& e : edges) pivots.push_back({e.i, e.j, e.weight});

  const std::size_t keep = std::min(k1, pivots.size());
  const auto heavier = [](const Pivot& a, const Pivot& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  };
  std::partial_sort(pivots.begin(), pivots.begin() + static_cast<std::ptrdiff_t>(keep),
                    pivots.end(), heavier);
  pivots.resize(keep);
  return pivots;
}

std::vector<std::size_t> common_neighbors(const WeightedGraph& g, std::size_t i, std::size_t j) {
  std::vector<std::size_t> out;
  const auto ri = g.row(i);
  const auto rj = g.row(j);
  for (std::size_t z = 0; z < g.size(); ++z) {
    if (z != i && z != j && ri[z] > 0 && rj[z] > 0) out.push_back(z);
  }
  return out;
}

namespace {

struct Candidate {
  std::uint64_t score;
  std::size_t z;
};

}  // namespace

std::vector<TurboClique> pgs_search(const WeightedGraph& g, std::size_t k1, std::size_t k2,
                                    PgsStats* stats) {
  if (k1 < 1 || k2 < 1) throw InputError("k1 and k2 must be positive");
  const std::size_t n = g.size();
  const std::vector<Pivot> pivots = select_pivots(g, k1);
  const auto np = static_cast<std::ptrdiff_t>(pivots.size());

  std::vector<std::vector<TurboClique>> per_pivot(pivots.size());
  std::uint64_t checks = 0;

#pragma omp parallel reduction(+ : checks)
  {
    std::vector<Candidate> candidates;
    candidates.reserve(n);
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t p = 0; p < np; ++p) {
      const Pivot& pv = pivots[static_cast<std::size_t>(p)];
      const auto ri = g.row(pv.i);
      const auto rj = g.row(pv.j);
      candidates.clear();
      // Row-wise masked sum: S(z) = w_ij + w_iz + w_jz where w_iz·w_jz > 0.
      for (std::size_t z = 0; z < n; ++z) {
        if (z == pv.i || z == pv.j) continue;
        ++checks;
        const std::uint32_t wiz = ri[z];
        const std::uint32_t wjz = rj[z];
        if (wiz != 0 && wjz != 0) candidates.push_back({std::uint64_t{pv.weight} + wiz + wjz, z});
      }
      const auto better = [](const Candidate& a, const Candidate& b) {
        return a.score != b.score ? a.score > b.score : a.z < b.z;
      };
      const std::size_t keep = std::min(k2, candidates.size());
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                        candidates.end(), better);
      auto& out = per_pivot[static_cast<std::size_t>(p)];
      out.reserve(keep);
      for (std::size_t c = 0; c < keep; ++c) {
        out.push_back(TurboClique::sorted(pv.i, pv.j, candidates[c].z, candidates[c].score));
      }
    }
  }

  std::vector<TurboClique> result;
  for (auto& v : per_pivot) result.insert(result.end(), v.begin(), v.end());
  std::sort(result.begin(), result.end(), canonical_before);

  if (stats != nullptr) {
    stats->pivots = pivots.size();
    stats->neighbor_checks = checks;
  }
  return result;
}

std::vector<TurboClique> deduplicate(const std::vector<TurboClique>& cliques) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::vector<TurboClique> out;
  out.reserve(cliques.size());
  for (const auto& c : cliques) {
    if (seen.insert(c.key()).second) out.push_back(c);
  }
  return out;
}

std::vector<TurboClique> brute_force_3cliques(const CompatGraph& g) {
  const std::size_t n = g.size();
  if (n > kBruteForceMaxNodes) {
    throw InputError("brute-force clique enumeration is limited to " +
                     std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  std::vector<TurboClique> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      for (std::size_t z = j + 1; z < n; ++z) {
        if (g.has_edge(i, z) && g.has_edge(j, z)) out.push_back({i, j, z, 0});
      }
    }
  }
  return out;
}

}  // namespace turboreg
