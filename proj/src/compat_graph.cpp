#include "turboreg/compat_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "compat_kernel.hpp"

namespace turboreg {

CompatGraph::CompatGraph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n_ * words_, 0) {}

CompatGraph CompatGraph::from_edges(std::size_t n,
                                    std::span<const std::pair<std::size_t, std::size_t>> edges) {
  CompatGraph g(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) throw InputError("self-loops are not allowed");
    g.set_bit(a, b);
    g.set_bit(b, a);
  }
  return g;
}

std::size_t CompatGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (Word w : row(i)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::size_t CompatGraph::edge_count() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n_; ++i) total += degree(i);
  return total / 2;
}

WeightedGraph WeightedGraph::from_dense(std::size_t n, std::vector<Weight> weights, bool ordered) {
  if (weights.size() != n * n) throw InputError("weight matrix must be n×n");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Weight w = weights[i * n + j];
      if (ordered) {
        if (i >= j && w != 0) throw InputError("ordered weight matrix must be strictly upper-triangular");
      } else {
        if (i == j && w != 0) throw InputError("weight matrix diagonal must be zero");
        if (w != weights[j * n + i]) throw InputError("weight matrix must be symmetric");
      }
    }
  }
  return detail::GraphAccess::make_weighted(n, std::move(weights), ordered);
}

void WeightedGraph::collect_edges() {
  edges_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    const Weight* r = weights_.data() + i * n_;
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (r[j] > 0) edges_.push_back({i, j, r[j]});
    }
  }
}

std::uint64_t WeightedGraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), std::uint64_t{0});
}

namespace detail {

WeightedGraph GraphAccess::make_weighted(std::size_t n, std::vector<WeightedGraph::Weight> w,
                                         bool ordered) {
  WeightedGraph g;
  g.n_ = n;
  g.ordered_ = ordered;
  g.weights_ = std::move(w);
  g.collect_edges();
  return g;
}

void check_graph_size(std::size_t n) {
  if (n > kMaxGraphNodes) {
    throw SizingError("dense graphs support at most " + std::to_string(kMaxGraphNodes) +
                      " correspondences, got " + std::to_string(n));
  }
}

}  // namespace detail

CompatGraph build_first_order(const CorrespondenceSet& corr, double tau) {
  if (corr.size() < CorrespondenceSet::kMinSize) {
    throw InputError("compatibility graph needs at least 3 correspondences");
  }
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  const std::size_t n = corr.size();
  detail::check_graph_size(n);

  CompatGraph g(n);
  const auto items = corr.items();
  // Upper triangle first, then each row copies its lower part from the rows
  // above it. Every worker writes only the rows it owns.
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    CompatGraph::Word* row = detail::GraphAccess::row_data(g, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (detail::compatible(items[i], items[j], tau)) row[j / 64] |= CompatGraph::Word{1} << (j % 64);
    }
  }
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    CompatGraph::Word* row = detail::GraphAccess::row_data(g, i);
    for (std::size_t j = 0; j < i; ++j) {
      if (g.has_edge(j, i)) row[j / 64] |= CompatGraph::Word{1} << (j % 64);
    }
  }
  return g;
}

WeightedGraph build_sc2(const CompatGraph& g) {
  const std::size_t n = g.size();
  detail::check_graph_size(n);
  const std::size_t words = g.words_per_row();
  std::vector<WeightedGraph::Weight> weights(n * n, 0);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto ri = g.row(i);
    WeightedGraph::Weight* out = weights.data() + i * n;
    for (std::size_t w = 0; w < words; ++w) {
      CompatGraph::Word bits = ri[w];
      while (bits != 0) {
        const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        const auto rj = g.row(j);
        std::size_t common = 0;
        for (std::size_t k = 0; k < words; ++k) {
          common += static_cast<std::size_t>(std::popcount(ri[k] & rj[k]));
        }
        out[j] = static_cast<WeightedGraph::Weight>(common);
      }
    }
  }
  return detail::GraphAccess::make_weighted(n, std::move(weights), false);
}

WeightedGraph to_o2graph(const WeightedGraph& g) {
  if (g.ordered()) throw InputError("graph is already ordered");
  const std::size_t n = g.size();
  std::vector<WeightedGraph::Weight> weights(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = g.row(i);
    std::copy(r.begin() + static_cast<std::ptrdiff_t>(i + 1), r.end(),
              weights.begin() + static_cast<std::ptrdiff_t>(i * n + i + 1));
  }
  return detail::GraphAccess::make_weighted(n, std::move(weights), true);
}

double estimate_resolution(std::span<const Point3> points) {
  const std::size_t n = points.size();
  if (n < 2) throw InputError("resolution estimate needs at least 2 points");
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) best = std::min(best, (points[i] - points[j]).squaredNorm());
    }
    nearest[i] = std::sqrt(best);
  }
  std::sort(nearest.begin(), nearest.end());
  if (n % 2 == 1) return nearest[n / 2];
  return 0.5 * (nearest[n / 2 - 1] + nearest[n / 2]);
}

}  // namespace turboreg
