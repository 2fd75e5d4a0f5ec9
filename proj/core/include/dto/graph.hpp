#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dto/types.hpp"

namespace dto {

/// Undirected, unweighted communication topology.
///
/// Nodes are zero-based in the API. Each edge is stored once with the lower
/// index as its tail, which fixes the incidence orientation (tail -1, head +1)
/// so that laplacian() == incidence() * incidence().transpose() exactly.
/// Immutable after construction.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Throws std::invalid_argument on out-of-range indices, self-loops, or
  /// duplicate edges (in either orientation).
  Graph(std::size_t node_count, const std::vector<Edge>& edges);

  /// Convenience for 1-based edge lists such as the ones in scenario files.
  static Graph from_one_based(std::size_t node_count, const std::vector<Edge>& edges);

  static Graph ring(std::size_t node_count);
  static Graph path(std::size_t node_count);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return neighbors_.at(node); }

  Matrix adjacency() const;
  Matrix laplacian() const;
  /// N x |E| oriented incidence matrix.
  Matrix incidence() const;
  /// Breadth-first reachability from node 0.
  bool is_connected() const;

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

}  // namespace dto
