#include <algorithm>

#include "turboreg/pgs.hpp"

namespace turboreg::serial {

std::vector<TurboClique> pgs_search(const WeightedGraph& g, std::size_t k1, std::size_t k2,
                                    PgsStats* stats) {
  if (k1 < 1 || k2 < 1) throw InputError("k1 and k2 must be positive");
  const std::size_t n = g.size();
  const std::vector<Pivot> pivots = select_pivots(g, k1);

  std::vector<TurboClique> result;
  std::uint64_t checks = 0;
  std::vector<std::uint64_t> score(n);
  for (const Pivot& pv : pivots) {
    std::fill(score.begin(), score.end(), 0);
    for (std::size_t z = 0; z < n; ++z) {
      if (z == pv.i || z == pv.j) continue;
      ++checks;
      if (g(pv.i, z) > 0 && g(pv.j, z) > 0) {
        score[z] = std::uint64_t{g(pv.i, pv.j)} + g(pv.i, z) + g(pv.j, z);
      }
    }
    // Repeated argmax; the strict comparison keeps the smallest z on ties.
    for (std::size_t taken = 0; taken < k2; ++taken) {
      std::size_t best = n;
      for (std::size_t z = 0; z < n; ++z) {
        if (score[z] > 0 && (best == n || score[z] > score[best])) best = z;
      }
      if (best == n) break;
      result.push_back(TurboClique::sorted(pv.i, pv.j, best, score[best]));
      score[best] = 0;
    }
  }
  std::sort(result.begin(), result.end(), canonical_before);

  if (stats != nullptr) {
    stats->pivots = pivots.size();
    stats->neighbor_checks = checks;
  }
  return result;
}

}  // namespace turboreg::serial
