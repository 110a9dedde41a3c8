#pragma once

// Builders for the network layouts used by tests and experiments.

#include <cstdint>
#include <random>
#include <vector>

#include "selfconf/network.hpp"

namespace selfconf {

using Rng = std::mt19937_64;

// Nodes on the x axis at 0, spacing, 2*spacing, ...; desired == actual.
std::vector<NodeState> line_nodes(int n, double spacing);
// rows x cols grid, row-major ids; desired == actual.
std::vector<NodeState> grid_nodes(int rows, int cols, double spacing);
// Uniform positions in [0, side]^2; desired positions are left at the
// position drawn.
std::vector<NodeState> random_nodes(int n, double side, Rng& rng);

// rows * cols == n with rows <= cols and the pair as close to square as
// possible.
std::pair<int, int> near_square_factors(int n);
// Regular grid of spacing l_th, assigned greedily: each node in id order
// takes the nearest unclaimed grid point. Grid is centred on the centroid
// of the current positions.
std::vector<Point> assign_grid_targets(const std::vector<NodeState>& nodes, double l_th);

// Both directions of every pair within max_dist (inclusive, relative 1e-9).
std::vector<Dipole> dipoles_within(const std::vector<NodeState>& nodes, double max_dist);
// Both directions of every Yao edge.
std::vector<Dipole> yao_dipoles(const NetworkConfig& config, double theta);

}  // namespace selfconf
