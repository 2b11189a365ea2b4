#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "turboreg/types.hpp"

namespace turboreg {

/// Largest correspondence count accepted by the dense graph builders.
inline constexpr std::size_t kMaxGraphNodes = 20000;

namespace detail {
struct GraphAccess;
}

/// First-order compatibility graph: dense symmetric boolean adjacency with a
/// zero diagonal, bit-packed 64 nodes per word, one padded row per node.
class CompatGraph {
 public:
  using Word = std::uint64_t;

  CompatGraph() = default;
  explicit CompatGraph(std::size_t n);

  static CompatGraph from_edges(std::size_t n,
                                std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool has_edge(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & Word{1};
  }

  std::span<const Word> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }

  std::size_t degree(std::size_t i) const;
  std::size_t edge_count() const;

  friend bool operator==(const CompatGraph&, const CompatGraph&) = default;

 private:
  friend struct detail::GraphAccess;

  void set_bit(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= Word{1} << (j % 64); }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

struct WeightedEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint32_t weight = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Dense SC² weight matrix. When `ordered()`, only entries with i < j may be
/// nonzero (the O2Graph). Weights are exact common-neighbor counts; N is
/// capped at kMaxGraphNodes so they fit 16 bits.
class WeightedGraph {
 public:
  using Weight = std::uint16_t;

  WeightedGraph() = default;

  /// Validates the symmetric/upper-triangular invariant of `weights`
  /// (row-major n×n). Throws InputError on violation.
  static WeightedGraph from_dense(std::size_t n, std::vector<Weight> weights, bool ordered);

  std::size_t size() const { return n_; }
  bool ordered() const { return ordered_; }

  Weight operator()(std::size_t i, std::size_t j) const { return weights_[i * n_ + j]; }
  std::span<const Weight> row(std::size_t i) const { return {weights_.data() + i * n_, n_}; }

  /// Positive entries with i < j in lexicographic order. Identical for an
  /// SC² graph and its O2Graph.
  std::span<const WeightedEdge> positive_edges() const { return edges_; }

  std::uint64_t total_weight() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.ordered_ == b.ordered_ && a.weights_ == b.weights_;
  }

 private:
  friend struct detail::GraphAccess;

  void collect_edges();

  std::size_t n_ = 0;
  bool ordered_ = false;
  std::vector<Weight> weights_;
  std::vector<WeightedEdge> edges_;
};

/// adjacency(i, j) iff i ≠ j and | ‖x_i − x_j‖ − ‖y_i − y_j‖ | ≤ tau.
/// Rows are filled in parallel.
CompatGraph build_first_order(const CorrespondenceSet& corr, double tau);

/// weights(i, j) = adjacency(i, j) · |{k : adjacency(i, k) ∧ adjacency(j, k)}|,
/// computed as a masked boolean matrix product (popcount of ANDed rows).
WeightedGraph build_sc2(const CompatGraph& g);

/// Keeps the strictly upper triangle of an undirected SC² graph.
WeightedGraph to_o2graph(const WeightedGraph& g);

/// Median nearest-neighbor distance. Throws InputError for fewer than 2 points.
double estimate_resolution(std::span<const Point3> points);

/// Single-threaded reference kernels. Same contracts as the parallel ones;
/// kept for cross-checking and benchmarking.
namespace serial {
CompatGraph build_first_order(const CorrespondenceSet& corr, double tau);
WeightedGraph build_sc2(const CompatGraph& g);
}  // namespace serial

namespace detail {
struct GraphAccess {
  static void set_bit(CompatGraph& g, std::size_t i, std::size_t j) { g.set_bit(i, j); }
  static CompatGraph::Word* row_data(CompatGraph& g, std::size_t i) {
    return g.bits_.data() + i * g.words_;
  }
  static WeightedGraph make_weighted(std::size_t n, std::vector<WeightedGraph::Weight> w,
                                     bool ordered);
};

void check_graph_size(std::size_t n);
}  // namespace detail

}  // namespace turboreg
