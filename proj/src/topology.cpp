#include "selfconf/topology.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "selfconf/error.hpp"

namespace selfconf {

std::vector<NodeState> line_nodes(int n, double spacing) {
  std::vector<NodeState> out;
  for (int i = 0; i < n; ++i) {
    const Point p{spacing * i, 0.0};
    out.push_back({i, p, p, false});
  }
  return out;
}

std::vector<NodeState> grid_nodes(int rows, int cols, double spacing) {
  std::vector<NodeState> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Point p{spacing * c, spacing * r};
      out.push_back({r * cols + c, p, p, false});
    }
  }
  return out;
}

std::vector<NodeState> random_nodes(int n, double side, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<NodeState> out;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    out.push_back({i, {x, y}, {x, y}, false});
  }
  return out;
}

std::pair<int, int> near_square_factors(int n) {
  if (n < 1) throw ValidationError("node count must be >= 1");
  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  while (n % rows != 0) --rows;
  return {rows, n / rows};
}

std::vector<Point> assign_grid_targets(const std::vector<NodeState>& nodes, double l_th) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0) return {};
  const auto [rows, cols] = near_square_factors(n);
  Point centroid;
  for (const auto& node : nodes) {
    centroid.x += node.position.x / n;
    centroid.y += node.position.y / n;
  }
  std::vector<Point> grid;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      grid.push_back({centroid.x + l_th * (c - 0.5 * (cols - 1)),
                      centroid.y + l_th * (r - 0.5 * (rows - 1))});
  std::vector<char> taken(grid.size(), 0);
  std::vector<Point> out;
  for (const auto& node : nodes) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (taken[g]) continue;
      const double d = distance(node.position, grid[g]);
      if (d < best_d) {
        best_d = d;
        best = g;
      }
    }
    taken[best] = 1;
    out.push_back(grid[best]);
  }
  return out;
}

std::vector<Dipole> dipoles_within(const std::vector<NodeState>& nodes, double max_dist) {
  std::vector<Dipole> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j || nodes[i].failed || nodes[j].failed) continue;
      if (distance(nodes[i].position, nodes[j].position) <= max_dist * (1.0 + 1e-9))
        out.push_back({static_cast<int>(i), static_cast<int>(j), -1});
    }
  }
  return out;
}

std::vector<Dipole> yao_dipoles(const NetworkConfig& config, double theta) {
  std::set<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < config.node_count(); ++i) {
    const int a = static_cast<int>(i);
    for (int b : yao_neighbors(a, config, theta)) {
      edges.insert({a, b});
      edges.insert({b, a});
    }
  }
  std::vector<Dipole> out;
  for (const auto& [a, b] : edges) out.push_back({a, b, -1});
  return out;
}

}  // namespace selfconf
