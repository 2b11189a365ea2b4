#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "turboreg/compat_graph.hpp"
#include "turboreg/types.hpp"

namespace turboreg {

/// A seed edge for the clique search, i < j.
struct Pivot {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint32_t weight = 0;

  friend bool operator==(const Pivot&, const Pivot&) = default;
};

struct PgsStats {
  std::size_t pivots = 0;
  std::uint64_t neighbor_checks = 0;
};

/// Canonical TurboClique order: aggregated weight descending, then (i, j, z)
/// ascending.
bool canonical_before(const TurboClique& a, const TurboClique& b);

/// The min(k1, #positive edges) heaviest edges with i < j, ordered by weight
/// descending then (i, j) ascending. Ties at the cut weight are filled in
/// lexicographic order until the quota is met. Empty when no edge is positive.
std::vector<Pivot> select_pivots(const WeightedGraph& g, std::size_t k1);

/// {z : g(i, z) > 0 ∧ g(j, z) > 0}, ascending. On an O2Graph with i < j this
/// only yields z > j.
std::vector<std::size_t> common_neighbors(const WeightedGraph& g, std::size_t i, std::size_t j);

/// Pivot-guided search. For each pivot keeps the top-k2 third nodes by
/// aggregated weight g(i,j) + g(i,z) + g(j,z) (ties: smaller z), then returns
/// all kept cliques in canonical order. Pivots run in parallel; the output
/// does not depend on the worker count. On an undirected graph a triangle can
/// be returned once per pivot edge it contains.
std::vector<TurboClique> pgs_search(const WeightedGraph& g, std::size_t k1, std::size_t k2,
                                    PgsStats* stats = nullptr);

/// Drops repeated triples, keeping the first occurrence.
std::vector<TurboClique> deduplicate(const std::vector<TurboClique>& cliques);

inline constexpr std::size_t kBruteForceMaxNodes = 2000;

/// Every triangle of `g`, lexicographic. aggregated_weight is left at 0.
/// Throws InputError above kBruteForceMaxNodes.
std::vector<TurboClique> brute_force_3cliques(const CompatGraph& g);

namespace serial {
/// Literal per-pivot scan with a dense score vector and repeated max
/// extraction.
std::vector<TurboClique> pgs_search(const WeightedGraph& g, std::size_t k1, std::size_t k2,
                                    PgsStats* stats = nullptr);
}  // namespace serial

}  // namespace turboreg
