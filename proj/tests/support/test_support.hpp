#pragma once

#include <Eigen/Eigenvalues>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dto/graph.hpp"

namespace dto::testing {

/// Random simple graph on `nodes` vertices with edge probability p.
inline Graph random_graph(std::mt19937_64& rng, std::size_t nodes, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return Graph(nodes, edges);
}

/// Second-smallest Laplacian eigenvalue (algebraic connectivity).
inline double fiedler_value(const Graph& g) {
  if (g.node_count() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.laplacian(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(1);
}

/// Tag-balance check for the SVG writer output: every opened element is
/// closed in order, attribute quotes are balanced.
inline bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  bool saw_root = false;
  while ((pos = doc.find('<', pos)) != std::string::npos) {
    const std::size_t end = doc.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?' || tag.front() == '!') continue;
    std::size_t quotes = 0;
    for (char c : tag) quotes += (c == '"');
    if (quotes % 2 != 0) return false;
    if (tag.front() == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /\n"));
    if (stack.empty()) {
      if (saw_root) return false;
      saw_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  return saw_root && stack.empty();
}

}  // namespace dto::testing
