#include "turboreg/compat_graph.hpp"

#include "compat_kernel.hpp"

namespace turboreg::serial {

CompatGraph build_first_order(const CorrespondenceSet& corr, double tau) {
  if (corr.size() < CorrespondenceSet::kMinSize) {
    throw InputError("compatibility graph needs at least 3 correspondences");
  }
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  const std::size_t n = corr.size();
  detail::check_graph_size(n);

  CompatGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (detail::compatible(corr[i], corr[j], tau)) {
        detail::GraphAccess::set_bit(g, i, j);
        detail::GraphAccess::set_bit(g, j, i);
      }
    }
  }
  return g;
}

WeightedGraph build_sc2(const CompatGraph& g) {
  const std::size_t n = g.size();
  detail::check_graph_size(n);
  std::vector<WeightedGraph::Weight> weights(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      WeightedGraph::Weight common = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (g.has_edge(i, k) && g.has_edge(j, k)) ++common;
      }
      weights[i * n + j] = common;
      weights[j * n + i] = common;
    }
  }
  return detail::GraphAccess::make_weighted(n, std::move(weights), false);
}

}  // namespace turboreg::serial
