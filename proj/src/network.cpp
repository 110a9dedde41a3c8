#include "selfconf/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "selfconf/error.hpp"

namespace selfconf {

void ChannelParams::validate() const {
  if (!(alpha >= 2.0)) throw ValidationError("channel.alpha must be >= 2");
  if (!(noise_power >= 0.0)) throw ValidationError("channel.noise_power must be >= 0");
  if (!(tx_power > 0.0)) throw ValidationError("channel.tx_power must be > 0");
  if (!(sinr_threshold > 0.0)) throw ValidationError("channel.sinr_threshold must be > 0");
}

void NeighborhoodParams::validate() const {
  if (!(contention_range > 0.0))
    throw ValidationError("neighborhood.contention_range must be > 0");
  if (!(interference_range >= contention_range))
    throw ValidationError("neighborhood.interference_range must be >= contention_range");
}

NetworkConfig::NetworkConfig(std::vector<NodeState> nodes, std::vector<Dipole> dipoles)
    : nodes_(std::move(nodes)), dipoles_(std::move(dipoles)) {
  const int n = static_cast<int>(nodes_.size());
  for (int i = 0; i < n; ++i) nodes_[static_cast<std::size_t>(i)].id = i;
  for (auto& d : dipoles_) {
    if (d.tx < 0 || d.tx >= n || d.rx < 0 || d.rx >= n)
      throw ValidationError("dipole endpoint references a missing node");
    if (d.tx == d.rx) throw ValidationError("dipole tx and rx must differ");
    if (d.activity != 1 && d.activity != -1)
      throw ValidationError("dipole activity must be -1 or +1");
    if (nodes_[static_cast<std::size_t>(d.tx)].failed ||
        nodes_[static_cast<std::size_t>(d.rx)].failed)
      d.activity = -1;
  }
  std::sort(dipoles_.begin(), dipoles_.end(), [](const Dipole& a, const Dipole& b) {
    return a.tx != b.tx ? a.tx < b.tx : a.rx < b.rx;
  });
  auto dup = std::adjacent_find(dipoles_.begin(), dipoles_.end(),
                                [](const Dipole& a, const Dipole& b) {
                                  return a.tx == b.tx && a.rx == b.rx;
                                });
  if (dup != dipoles_.end()) throw ValidationError("duplicate dipole");
}

std::optional<std::size_t> NetworkConfig::find(int tx, int rx) const {
  auto it = std::lower_bound(dipoles_.begin(), dipoles_.end(), Dipole{tx, rx, -1},
                             [](const Dipole& a, const Dipole& b) {
                               return a.tx != b.tx ? a.tx < b.tx : a.rx < b.rx;
                             });
  if (it == dipoles_.end() || it->tx != tx || it->rx != rx) return std::nullopt;
  return static_cast<std::size_t>(it - dipoles_.begin());
}

std::vector<Point> NetworkConfig::positions() const {
  std::vector<Point> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.position);
  return out;
}

std::vector<int> NetworkConfig::activities() const {
  std::vector<int> out;
  out.reserve(dipoles_.size());
  for (const auto& d : dipoles_) out.push_back(d.activity);
  return out;
}

std::size_t NetworkConfig::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(dipoles_.begin(), dipoles_.end(), [](const Dipole& d) { return d.active(); }));
}

NetworkConfig NetworkConfig::with_positions(std::span<const Point> positions) const {
  if (positions.size() != nodes_.size()) throw ValidationError("position count mismatch");
  NetworkConfig out = *this;
  for (std::size_t i = 0; i < positions.size(); ++i) out.nodes_[i].position = positions[i];
  return out;
}

NetworkConfig NetworkConfig::with_activities(std::span<const int> sigma) const {
  if (sigma.size() != dipoles_.size()) throw ValidationError("activity count mismatch");
  NetworkConfig out = *this;
  for (std::size_t d = 0; d < sigma.size(); ++d) {
    if (sigma[d] != 1 && sigma[d] != -1)
      throw ValidationError("dipole activity must be -1 or +1");
    const auto& dip = out.dipoles_[d];
    const bool dead = out.nodes_[static_cast<std::size_t>(dip.tx)].failed ||
                      out.nodes_[static_cast<std::size_t>(dip.rx)].failed;
    out.dipoles_[d].activity = dead ? -1 : sigma[d];
  }
  return out;
}

NetworkConfig NetworkConfig::with_failed(std::span<const int> failed_nodes) const {
  NetworkConfig out = *this;
  for (int i : failed_nodes) {
    if (i < 0 || static_cast<std::size_t>(i) >= nodes_.size())
      throw ValidationError("unknown node id " + std::to_string(i));
    out.nodes_[static_cast<std::size_t>(i)].failed = true;
  }
  for (auto& d : out.dipoles_) {
    if (out.nodes_[static_cast<std::size_t>(d.tx)].failed ||
        out.nodes_[static_cast<std::size_t>(d.rx)].failed)
      d.activity = -1;
  }
  return out;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double received_power(double tx_power, double l, double alpha) {
  if (l == 0.0) throw DegenerateGeometryError("received_power: coincident nodes");
  return tx_power * std::pow(l, -alpha);
}

double sinr(const NetworkConfig& config, const ChannelParams& chan, int tx, int rx) {
  const Point rx_pos = config.node(rx).position;
  const double signal = received_power(chan.tx_power, distance(config.node(tx).position, rx_pos),
                                       chan.alpha);
  double interference = 0.0;
  for (const auto& d : config.dipoles()) {
    if (!d.active() || (d.tx == tx && d.rx == rx) || d.tx == rx) continue;
    const double l = distance(config.node(d.tx).position, rx_pos);
    if (l == 0.0)
      throw DegenerateGeometryError("sinr: active transmitter coincides with receiver");
    interference += chan.tx_power * std::pow(l, -chan.alpha);
  }
  const double denom = chan.noise_power + interference;
  if (denom == 0.0) return kUnboundedSinr;
  return signal / denom;
}

int yao_sector_count(double theta) {
  return static_cast<int>(std::ceil(2.0 * kPi / theta - 1e-9));
}

int yao_sector(Point from, Point to, double theta) {
  double angle = std::atan2(to.y - from.y, to.x - from.x);
  if (angle < 0.0) angle += 2.0 * kPi;
  const int count = yao_sector_count(theta);
  int s = static_cast<int>(std::floor(angle / theta + 1e-9));
  if (s >= count) s = s % count;
  return s;
}

std::vector<int> yao_neighbors_at(Point origin, int self, std::span<const NodeState> nodes,
                                  double theta) {
  const int count = yao_sector_count(theta);
  std::vector<int> best(static_cast<std::size_t>(count), -1);
  std::vector<double> best_d(static_cast<std::size_t>(count),
                             std::numeric_limits<double>::infinity());
  for (const auto& n : nodes) {
    if (n.id == self || n.failed) continue;
    const double l = distance(origin, n.position);
    if (l == 0.0) continue;
    const auto s = static_cast<std::size_t>(yao_sector(origin, n.position, theta));
    // nodes are visited in id order, so strict < keeps the lower id on ties
    if (l < best_d[s]) {
      best_d[s] = l;
      best[s] = n.id;
    }
  }
  std::vector<int> out;
  for (int b : best)
    if (b >= 0) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> yao_neighbors(int i, const NetworkConfig& config, double theta) {
  const auto& self = config.node(i);
  if (self.failed) return {};
  return yao_neighbors_at(self.position, i, config.nodes(), theta);
}

bool within_interference_range(Point tx_a, Point rx_a, Point tx_b, Point rx_b, double r_f) {
  return distance(tx_a, tx_b) <= r_f || distance(tx_a, rx_b) <= r_f ||
         distance(rx_a, tx_b) <= r_f || distance(rx_a, rx_b) <= r_f;
}

std::vector<std::size_t> interference_neighborhood(std::size_t d, const NetworkConfig& config,
                                                   const NeighborhoodParams& nbhd) {
  const auto& self = config.dipole(d);
  const auto& nodes = config.nodes();
  auto dead = [&](const Dipole& x) {
    return nodes[static_cast<std::size_t>(x.tx)].failed ||
           nodes[static_cast<std::size_t>(x.rx)].failed;
  };
  std::vector<std::size_t> out;
  if (dead(self)) return out;
  const Point a_tx = config.node(self.tx).position;
  const Point a_rx = config.node(self.rx).position;
  for (std::size_t e = 0; e < config.dipole_count(); ++e) {
    if (e == d) continue;
    const auto& other = config.dipole(e);
    if (dead(other)) continue;
    if (within_interference_range(a_tx, a_rx, config.node(other.tx).position,
                                  config.node(other.rx).position, nbhd.interference_range))
      out.push_back(e);
  }
  return out;
}

bool is_one_connected(const NetworkConfig& config, const LinkPredicate& linked) {
  const int n = static_cast<int>(config.node_count());
  std::vector<int> alive;
  for (int i = 0; i < n; ++i)
    if (!config.node(i).failed) alive.push_back(i);
  if (alive.size() <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> q;
  q.push(alive.front());
  seen[static_cast<std::size_t>(alive.front())] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : alive) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      if (linked(std::min(u, v), std::max(u, v))) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == alive.size();
}

bool is_one_connected(const NetworkConfig& config, double theta) {
  const std::size_t n = config.node_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : yao_neighbors(static_cast<int>(i), config, theta)) {
      adj[i][static_cast<std::size_t>(j)] = 1;
      adj[static_cast<std::size_t>(j)][i] = 1;
    }
  }
  return is_one_connected(config, [&](int a, int b) {
    return adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
  });
}

double network_diameter(const NetworkConfig& config) {
  double best = 0.0;
  const auto& nodes = config.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].failed) continue;
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[j].failed) continue;
      best = std::max(best, distance(nodes[i].position, nodes[j].position));
    }
  }
  return best;
}

}  // namespace selfconf
