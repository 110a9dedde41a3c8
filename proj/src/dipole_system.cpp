#include "selfconf/dipole_system.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "selfconf/error.hpp"

namespace selfconf {

DipoleSystem::DipoleSystem(const NetworkConfig& config, const ChannelParams& chan,
                           double interference_range)
    : chan_(chan), r_f_(interference_range) {
  chan_.validate();
  if (!(interference_range > 0.0))
    throw ValidationError("neighborhood.interference_range must be > 0");
  positions_ = config.positions();
  failed_.reserve(config.node_count());
  for (const auto& n : config.nodes()) failed_.push_back(n.failed ? 1 : 0);
  incident_.resize(config.node_count());
  const std::size_t k = config.dipole_count();
  tx_.reserve(k);
  rx_.reserve(k);
  usable_.reserve(k);
  for (std::size_t d = 0; d < k; ++d) {
    const auto& dip = config.dipole(d);
    tx_.push_back(dip.tx);
    rx_.push_back(dip.rx);
    usable_.push_back(failed_[static_cast<std::size_t>(dip.tx)] ||
                              failed_[static_cast<std::size_t>(dip.rx)]
                          ? 0
                          : 1);
    incident_[static_cast<std::size_t>(dip.tx)].push_back(d);
    incident_[static_cast<std::size_t>(dip.rx)].push_back(d);
    if (distance(positions_[static_cast<std::size_t>(dip.tx)],
                 positions_[static_cast<std::size_t>(dip.rx)]) == 0.0)
      throw DegenerateGeometryError("dipole endpoints coincide");
  }
  gain_.assign(k * k, 0.0);
  for (std::size_t e = 0; e < k; ++e)
    for (std::size_t d = 0; d < k; ++d) refresh_gain(e, d);
  neighbors_.assign(k, {});
  for (std::size_t d = 0; d < k; ++d) {
    if (!usable(d)) continue;
    for (std::size_t e = d + 1; e < k; ++e) {
      if (usable(e) && in_range(d, e)) {
        neighbors_[d].push_back(e);
        neighbors_[e].push_back(d);
      }
    }
  }
}

bool DipoleSystem::shares_node(std::size_t d, std::size_t e) const {
  return tx_[d] == tx_[e] || tx_[d] == rx_[e] || rx_[d] == tx_[e] || rx_[d] == rx_[e];
}

bool DipoleSystem::in_range(std::size_t d, std::size_t e) const {
  return within_interference_range(position(tx_[d]), position(rx_[d]), position(tx_[e]),
                                   position(rx_[e]), r_f_);
}

void DipoleSystem::refresh_gain(std::size_t e, std::size_t d) {
  double g = 0.0;
  if (tx_[e] != rx_[d]) {
    const double l = distance(position(tx_[e]), position(rx_[d]));
    g = l == 0.0 ? std::numeric_limits<double>::infinity()
                 : chan_.tx_power * std::pow(l, -chan_.alpha);
  }
  gain_[e * size() + d] = g;
}

void DipoleSystem::rebuild_neighbors(std::size_t d) {
  std::vector<std::size_t> fresh;
  if (usable(d))
    for (std::size_t e = 0; e < size(); ++e)
      if (e != d && usable(e) && in_range(d, e)) fresh.push_back(e);
  auto& old = neighbors_[d];
  std::vector<std::size_t> gone, added;
  std::set_difference(old.begin(), old.end(), fresh.begin(), fresh.end(), std::back_inserter(gone));
  std::set_difference(fresh.begin(), fresh.end(), old.begin(), old.end(), std::back_inserter(added));
  for (std::size_t e : gone) {
    auto& back = neighbors_[e];
    const auto it = std::lower_bound(back.begin(), back.end(), d);
    if (it != back.end() && *it == d) back.erase(it);
  }
  for (std::size_t e : added) {
    auto& back = neighbors_[e];
    back.insert(std::lower_bound(back.begin(), back.end(), d), d);
  }
  old = std::move(fresh);
}

void DipoleSystem::move_node(int i, Point p) {
  positions_[static_cast<std::size_t>(i)] = p;
  for (std::size_t d : incident(i)) {
    if (distance(position(tx_[d]), position(rx_[d])) == 0.0)
      throw DegenerateGeometryError("dipole endpoints coincide");
  }
  for (std::size_t a : incident(i)) {
    for (std::size_t b = 0; b < size(); ++b) {
      refresh_gain(a, b);
      refresh_gain(b, a);
    }
  }
  for (std::size_t d : incident(i)) rebuild_neighbors(d);
}

}  // namespace selfconf
