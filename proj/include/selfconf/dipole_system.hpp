#pragma once

#include <cstddef>
#include <vector>

#include "selfconf/network.hpp"

namespace selfconf {

// Path-loss gains and interference neighborhoods for the dipoles of a
// configuration, cached for fixed node positions.
//
// gain(e, d) is the power transmitter tx(e) delivers at receiver rx(d):
// P_t * |X_tx(e) - X_rx(d)|^-alpha, or 0 when tx(e) is rx(d) itself.
// gain(d, d) is the signal power of d. Neighborhoods are symmetric:
// e in neighbors(d) iff d in neighbors(e).
class DipoleSystem {
 public:
  DipoleSystem(const NetworkConfig& config, const ChannelParams& chan, double interference_range);

  std::size_t size() const { return tx_.size(); }
  std::size_t node_count() const { return positions_.size(); }
  int tx(std::size_t d) const { return tx_[d]; }
  int rx(std::size_t d) const { return rx_[d]; }
  // false when an endpoint has failed; such dipoles stay inactive.
  bool usable(std::size_t d) const { return usable_[d] != 0; }
  bool shares_node(std::size_t d, std::size_t e) const;

  double gain(std::size_t e, std::size_t d) const { return gain_[e * size() + d]; }
  double signal(std::size_t d) const { return gain(d, d); }
  const std::vector<std::size_t>& neighbors(std::size_t d) const { return neighbors_[d]; }
  bool in_range(std::size_t d, std::size_t e) const;

  // Dipole indices with node i as transmitter or receiver.
  const std::vector<std::size_t>& incident(int i) const {
    return incident_[static_cast<std::size_t>(i)];
  }
  Point position(int i) const { return positions_[static_cast<std::size_t>(i)]; }
  const std::vector<Point>& positions() const { return positions_; }
  double interference_range() const { return r_f_; }
  const ChannelParams& channel() const { return chan_; }

  // Moves node i and refreshes every gain and neighborhood it touches.
  void move_node(int i, Point p);

 private:
  void refresh_gain(std::size_t e, std::size_t d);
  void rebuild_neighbors(std::size_t d);

  ChannelParams chan_;
  double r_f_;
  std::vector<Point> positions_;
  std::vector<char> failed_;
  std::vector<int> tx_;
  std::vector<int> rx_;
  std::vector<char> usable_;
  std::vector<double> gain_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::vector<std::size_t>> incident_;
};

}  // namespace selfconf
