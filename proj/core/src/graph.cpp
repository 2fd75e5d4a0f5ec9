#include "dto/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace dto {

Graph::Graph(std::size_t node_count, const std::vector<Edge>& edges)
    : node_count_(node_count), neighbors_(node_count) {
  if (node_count == 0) {
    throw std::invalid_argument("graph needs at least one node");
  }
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") references a node outside [0, " +
                                  std::to_string(node_count) + ")");
    }
    if (a == b) {
      throw std::invalid_argument("self-loop on node " + std::to_string(a));
    }
    const Edge canonical{std::min(a, b), std::max(a, b)};
    if (std::find(edges_.begin(), edges_.end(), canonical) != edges_.end()) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(canonical.first) + ", " +
                                  std::to_string(canonical.second) + ")");
    }
    edges_.push_back(canonical);
    neighbors_[canonical.first].push_back(canonical.second);
    neighbors_[canonical.second].push_back(canonical.first);
  }
}

Graph Graph::from_one_based(std::size_t node_count, const std::vector<Edge>& edges) {
  std::vector<Edge> shifted;
  shifted.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a == 0 || b == 0) {
      throw std::invalid_argument("1-based edge list contains node 0");
    }
    shifted.emplace_back(a - 1, b - 1);
  }
  return Graph(node_count, shifted);
}

Graph Graph::ring(std::size_t node_count) {
  std::vector<Edge> edges;
  if (node_count >= 2) {
    for (std::size_t i = 0; i + 1 < node_count; ++i) edges.emplace_back(i, i + 1);
    if (node_count > 2) edges.emplace_back(node_count - 1, 0);
  }
  return Graph(node_count, edges);
}

Graph Graph::path(std::size_t node_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < node_count; ++i) edges.emplace_back(i, i + 1);
  return Graph(node_count, edges);
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(node_count_, node_count_);
  for (const auto& [i, j] : edges_) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

Matrix Graph::laplacian() const {
  Matrix l = Matrix::Zero(node_count_, node_count_);
  for (const auto& [i, j] : edges_) {
    l(i, j) -= 1.0;
    l(j, i) -= 1.0;
    l(i, i) += 1.0;
    l(j, j) += 1.0;
  }
  return l;
}

Matrix Graph::incidence() const {
  Matrix d = Matrix::Zero(node_count_, edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    d(edges_[k].first, k) = -1.0;
    d(edges_[k].second, k) = 1.0;
  }
  return d;
}

bool Graph::is_connected() const {
  std::vector<bool> seen(node_count_, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t visited = 1;
  while (!frontier.empty()) {
    const std::size_t node = frontier.front();
    frontier.pop();
    for (std::size_t next : neighbors_[node]) {
      if (!seen[next]) {
        seen[next] = true;
        ++visited;
        frontier.push(next);
      }
    }
  }
  return visited == node_count_;
}

}  // namespace dto
