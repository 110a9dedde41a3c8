#pragma once

// Geometry, channel and neighborhood primitives for a planar ad-hoc network.
//
// Nodes are indexed 0..N-1. A dipole is a directed transmitter/receiver pair
// with activity +1 (transmitting) or -1 (idle).

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace selfconf {

inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct NodeState {
  int id = 0;
  Point position;
  Point desired_position;
  bool failed = false;
};

struct Dipole {
  int tx = 0;
  int rx = 0;
  int activity = -1;  // sigma in {-1, +1}

  bool active() const { return activity == 1; }
  int eta() const { return activity == 1 ? 1 : 0; }
};

struct ChannelParams {
  double alpha = 4.0;
  double noise_power = 0.1;
  double tx_power = 100.0;
  double sinr_threshold = 20.0;

  void validate() const;
};

struct NeighborhoodParams {
  double contention_range = 10.0;
  double interference_range = 40.0;

  void validate() const;
};

// Joint physical/logical configuration. Dipoles are kept sorted by (tx, rx).
class NetworkConfig {
 public:
  NetworkConfig() = default;
  NetworkConfig(std::vector<NodeState> nodes, std::vector<Dipole> dipoles);

  const std::vector<NodeState>& nodes() const { return nodes_; }
  const std::vector<Dipole>& dipoles() const { return dipoles_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t dipole_count() const { return dipoles_.size(); }

  const NodeState& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const Dipole& dipole(std::size_t d) const { return dipoles_.at(d); }

  std::optional<std::size_t> find(int tx, int rx) const;
  std::vector<Point> positions() const;
  std::vector<int> activities() const;
  std::size_t active_count() const;

  // Value-returning modifiers; the receiver is left untouched.
  NetworkConfig with_positions(std::span<const Point> positions) const;
  NetworkConfig with_activities(std::span<const int> sigma) const;
  NetworkConfig with_failed(std::span<const int> failed_nodes) const;

 private:
  std::vector<NodeState> nodes_;
  std::vector<Dipole> dipoles_;
};

double distance(Point a, Point b);

// tx_power * l^-alpha; throws DegenerateGeometryError when l == 0.
double received_power(double tx_power, double l, double alpha);

// Returned by sinr() when neither noise nor interference is present.
inline constexpr double kUnboundedSinr = std::numeric_limits<double>::infinity();

// SINR of dipole (tx, rx) against every other active dipole. A dipole whose
// transmitter is the receiver itself is not counted as interference.
double sinr(const NetworkConfig& config, const ChannelParams& chan, int tx, int rx);

// Angular index of `to` seen from `from`, sectors of width theta anchored at
// angle 0. Angles within 1e-9 rad below a boundary are assigned to the next
// sector so that axis-aligned neighbors land deterministically.
int yao_sector(Point from, Point to, double theta);
int yao_sector_count(double theta);

// Nearest non-failed node per sector around `origin`, excluding `self`.
// Ties go to the lower node id. Result is sorted by node id.
std::vector<int> yao_neighbors_at(Point origin, int self, std::span<const NodeState> nodes,
                                  double theta);
std::vector<int> yao_neighbors(int i, const NetworkConfig& config, double theta);

// Dipoles (other than d) that some endpoint of lies within r_f of some
// endpoint of d. Dipoles touching failed nodes are never members.
std::vector<std::size_t> interference_neighborhood(std::size_t d, const NetworkConfig& config,
                                                   const NeighborhoodParams& nbhd);
bool within_interference_range(Point tx_a, Point rx_a, Point tx_b, Point rx_b, double r_f);

using LinkPredicate = std::function<bool(int, int)>;

// Connectivity of the undirected graph induced by `linked` over non-failed
// nodes. The predicate is queried with i < j.
bool is_one_connected(const NetworkConfig& config, const LinkPredicate& linked);
// Same, with Yao adjacency (i ~ j if either lists the other).
bool is_one_connected(const NetworkConfig& config, double theta);

// Largest pairwise distance between non-failed nodes.
double network_diameter(const NetworkConfig& config);

}  // namespace selfconf
