#include "selfconf/hamiltonian.hpp"

#include <cmath>
#include <limits>

#include "selfconf/error.hpp"

namespace selfconf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool on(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d) {
  return sigma[d] == 1 && sys.usable(d);
}

void check_size(const DipoleSystem& sys, std::span<const int> sigma) {
  if (sigma.size() != sys.size()) throw ValidationError("activity count mismatch");
}

double gain_at(std::span<const Point> positions, const ChannelParams& chan, int tx, int rx) {
  return received_power(chan.tx_power,
                        distance(positions[static_cast<std::size_t>(tx)],
                                 positions[static_cast<std::size_t>(rx)]),
                        chan.alpha);
}

double interference_at(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d,
                       bool local) {
  double total = 0.0;
  if (local) {
    for (std::size_t e : sys.neighbors(d))
      if (on(sys, sigma, e)) total += sys.gain(e, d);
  } else {
    for (std::size_t e = 0; e < sys.size(); ++e)
      if (e != d && on(sys, sigma, e)) total += sys.gain(e, d);
  }
  return total;
}

}  // namespace

bool sinr_violated(double signal, double interference, const ChannelParams& chan) {
  const double denom = chan.noise_power + interference;
  if (denom == 0.0) return false;
  return signal / denom < chan.sinr_threshold;
}

void ModelWeights::validate() const {
  if (!(beta > 0.0)) throw ValidationError("weights.beta must be > 0");
  if (!(zeta > 0.0)) throw ValidationError("weights.zeta must be > 0");
  if (!(xi >= 0.0)) throw ValidationError("weights.xi must be >= 0");
  if (!(pos_variance > 0.0)) throw ValidationError("weights.pos_variance must be > 0");
  if (!(epsilon0 >= 0.0 && epsilon0 < 1.0))
    throw ValidationError("weights.epsilon0 must be in [0, 1)");
  if (!(l_th > 0.0)) throw ValidationError("weights.l_th must be > 0");
  if (!(theta > 0.0 && theta <= 2.0 * kPi)) throw ValidationError("weights.theta out of range");
}

double first_order(double signal, const ChannelParams& chan, double beta) {
  const double excess = signal - chan.sinr_threshold * chan.noise_power;
  return -signal + beta * excess * excess;
}

double second_order(double signal, double interferer, const ChannelParams& chan, double beta) {
  const double s = chan.sinr_threshold;
  return 2.0 * std::sqrt(signal * interferer) - interferer +
         beta * s * s * interferer * interferer -
         2.0 * beta * (signal - s * chan.noise_power) * s * interferer;
}

double third_order(double interferer_a, double interferer_b, const ChannelParams& chan,
                   double beta) {
  const double s = chan.sinr_threshold;
  return -2.0 * std::sqrt(interferer_a * interferer_b) +
         beta * s * s * interferer_a * interferer_b;
}

double third_order_pair(double interferer_a, double interferer_b, const ChannelParams& chan,
                        double beta) {
  const double s = chan.sinr_threshold;
  return third_order(interferer_a, interferer_b, chan, beta) +
         beta * s * s * interferer_a * interferer_b;
}

double coeff_first(int tx, int rx, std::span<const Point> positions, const ChannelParams& chan,
                   const ModelWeights& w) {
  return first_order(gain_at(positions, chan, tx, rx), chan, w.beta);
}

double coeff_second(int tx, int rx, int itx, int irx, std::span<const Point> positions,
                    const ChannelParams& chan, const ModelWeights& w) {
  if (tx == itx && rx == irx) throw ValidationError("coeff_second: interferer equals dipole");
  return second_order(gain_at(positions, chan, tx, rx), gain_at(positions, chan, itx, rx), chan,
                      w.beta);
}

double coeff_third(int tx, int rx, int mtx, int mrx, int utx, int urx,
                   std::span<const Point> positions, const ChannelParams& chan,
                   const ModelWeights& w) {
  if ((tx == mtx && rx == mrx) || (tx == utx && rx == urx) || (mtx == utx && mrx == urx))
    throw ValidationError("coeff_third: dipoles must be distinct");
  return third_order(gain_at(positions, chan, mtx, rx), gain_at(positions, chan, utx, rx), chan,
                     w.beta);
}

double sinr_of(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d, bool local) {
  const double denom = sys.channel().noise_power + interference_at(sys, sigma, d, local);
  if (denom == 0.0) return kUnboundedSinr;
  return sys.signal(d) / denom;
}

double logical_energy_direct(const DipoleSystem& sys, std::span<const int> sigma, double beta,
                             PenaltyMode mode) {
  check_size(sys, sigma);
  const auto& chan = sys.channel();
  double h = 0.0;
  for (std::size_t d = 0; d < sys.size(); ++d) {
    if (!on(sys, sigma, d)) continue;
    double amp = std::sqrt(sys.signal(d));
    double interference = 0.0;
    for (std::size_t e = 0; e < sys.size(); ++e) {
      if (e == d || !on(sys, sigma, e)) continue;
      amp -= std::sqrt(sys.gain(e, d));
      interference += sys.gain(e, d);
    }
    h -= amp * amp;
    if (mode == PenaltyMode::quadratic) {
      const double gap =
          sys.signal(d) - chan.sinr_threshold * (interference + chan.noise_power);
      h += beta * gap * gap;
    } else if (sinr_violated(sys.signal(d), interference, chan)) {
      h += beta;
    }
  }
  return h;
}

EnergyBreakdown logical_breakdown(const DipoleSystem& sys, std::span<const int> sigma,
                                  double beta, PenaltyMode mode) {
  check_size(sys, sigma);
  const auto& chan = sys.channel();
  const double b = mode == PenaltyMode::quadratic ? beta : 0.0;
  EnergyBreakdown out;
  std::vector<std::size_t> others;
  for (std::size_t d = 0; d < sys.size(); ++d) {
    if (!on(sys, sigma, d)) continue;
    const double sig = sys.signal(d);
    out.r1 += first_order(sig, chan, b);
    others.clear();
    double interference = 0.0;
    for (std::size_t e = 0; e < sys.size(); ++e) {
      if (e == d || !on(sys, sigma, e)) continue;
      others.push_back(e);
      const double g = sys.gain(e, d);
      interference += g;
      const double c = second_order(sig, g, chan, b);
      if (sys.in_range(d, e))
        out.r2 += c;
      else
        out.r_residual += c;
    }
    for (std::size_t a = 0; a < others.size(); ++a) {
      const std::size_t ea = others[a];
      const bool ia = sys.in_range(d, ea);
      for (std::size_t c = a + 1; c < others.size(); ++c) {
        const std::size_t ec = others[c];
        const double v = third_order_pair(sys.gain(ea, d), sys.gain(ec, d), chan, b);
        if (ia && sys.in_range(d, ec))
          out.r3 += v;
        else
          out.r_residual += v;
      }
    }
    if (mode == PenaltyMode::hard && sinr_violated(sig, interference, chan)) out.penalty += beta;
  }
  out.sum();
  return out;
}

double logical_energy_local(const DipoleSystem& sys, std::span<const int> sigma, double beta,
                            PenaltyMode mode) {
  check_size(sys, sigma);
  const auto& chan = sys.channel();
  const double b = mode == PenaltyMode::quadratic ? beta : 0.0;
  double h = 0.0;
  for (std::size_t d = 0; d < sys.size(); ++d) {
    if (!on(sys, sigma, d)) continue;
    const double sig = sys.signal(d);
    h += first_order(sig, chan, b);
    double interference = 0.0;
    for (std::size_t e : sys.neighbors(d)) {
      if (!on(sys, sigma, e)) continue;
      const double g = sys.gain(e, d);
      interference += g;
      h += second_order(sig, g, chan, b);
    }
    if (mode == PenaltyMode::hard && sinr_violated(sig, interference, chan)) h += beta;
  }
  return h;
}

bool half_duplex_blocked(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d) {
  for (int node : {sys.tx(d), sys.rx(d)})
    for (std::size_t e : sys.incident(node))
      if (e != d && on(sys, sigma, e)) return true;
  return false;
}

bool half_duplex_ok(const DipoleSystem& sys, std::span<const int> sigma) {
  check_size(sys, sigma);
  for (std::size_t d = 0; d < sys.size(); ++d)
    if (on(sys, sigma, d) && half_duplex_blocked(sys, sigma, d)) return false;
  return true;
}

double local_flip_delta(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d,
                        double beta, PenaltyMode mode) {
  if (!sys.usable(d)) return kInf;
  const auto& chan = sys.channel();
  const double sig = sys.signal(d);
  if (mode == PenaltyMode::quadratic) {
    double delta = first_order(sig, chan, beta);
    for (std::size_t e : sys.neighbors(d)) {
      if (!on(sys, sigma, e)) continue;
      delta += second_order(sig, sys.gain(e, d), chan, beta) +
               second_order(sys.signal(e), sys.gain(d, e), chan, beta);
    }
    return delta;
  }
  if (half_duplex_blocked(sys, sigma, d)) return kInf;
  double delta = first_order(sig, chan, 0.0);
  double interference = 0.0;
  for (std::size_t e : sys.neighbors(d)) {
    if (!on(sys, sigma, e)) continue;
    const double g_in = sys.gain(e, d);
    interference += g_in;
    delta += second_order(sig, g_in, chan, 0.0) +
             second_order(sys.signal(e), sys.gain(d, e), chan, 0.0);
    double around_e = 0.0;
    for (std::size_t f : sys.neighbors(e))
      if (f != d && on(sys, sigma, f)) around_e += sys.gain(f, e);
    const bool before = sinr_violated(sys.signal(e), around_e, chan);
    const bool after = sinr_violated(sys.signal(e), around_e + sys.gain(d, e), chan);
    delta += beta * (static_cast<double>(after) - static_cast<double>(before));
  }
  if (sinr_violated(sig, interference, chan)) delta += beta;
  return delta;
}

double h_logical_direct(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, PenaltyMode mode) {
  const DipoleSystem sys(config, chan, kInf);
  const auto sigma = config.activities();
  return logical_energy_direct(sys, sigma, w.beta, mode);
}

EnergyBreakdown h_logical_decomposed(const NetworkConfig& config, const ChannelParams& chan,
                                     const ModelWeights& w, const NeighborhoodParams& nbhd,
                                     PenaltyMode mode) {
  const DipoleSystem sys(config, chan, nbhd.interference_range);
  const auto sigma = config.activities();
  return logical_breakdown(sys, sigma, w.beta, mode);
}

double h_local(const NetworkConfig& config, const ChannelParams& chan, const ModelWeights& w,
               const NeighborhoodParams& nbhd, PenaltyMode mode) {
  const DipoleSystem sys(config, chan, nbhd.interference_range);
  const auto sigma = config.activities();
  return logical_energy_local(sys, sigma, w.beta, mode);
}

double h_connectivity(Point a, Point b, const ModelWeights& w, double desired) {
  const double l = distance(a, b);
  if (std::abs(l - w.l_th) / w.l_th <= w.epsilon0) return 0.0;
  return std::abs(l - desired);
}

double h_connectivity(Point a, Point b, const ModelWeights& w) {
  return h_connectivity(a, b, w, w.l_th);
}

double position_prior(Point x, Point desired, const ModelWeights& w) {
  const double dx = x.x - desired.x;
  const double dy = x.y - desired.y;
  return (dx * dx + dy * dy) / (2.0 * w.pos_variance);
}

double h_physical(const NetworkConfig& config, const ModelWeights& w) {
  double h = 0.0;
  for (const auto& n : config.nodes()) {
    if (n.failed) continue;
    h += position_prior(n.position, n.desired_position, w);
    for (int j : yao_neighbors(n.id, config, w.theta))
      h += w.zeta * h_connectivity(n.position, config.node(j).position, w);
  }
  return h;
}

double reconfiguration_distance(const NetworkConfig& config, const NetworkConfig& reference) {
  if (config.node_count() != reference.node_count() ||
      config.dipole_count() != reference.dipole_count())
    throw ValidationError("reference configuration has a different shape");
  double dist = 0.0;
  for (std::size_t i = 0; i < config.node_count(); ++i) {
    const int id = static_cast<int>(i);
    dist += distance(config.node(id).position, reference.node(id).position);
  }
  for (std::size_t d = 0; d < config.dipole_count(); ++d)
    if (config.dipole(d).activity != reference.dipole(d).activity) dist += 1.0;
  return dist;
}

EnergyBreakdown h_total(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, const NeighborhoodParams& nbhd, PenaltyMode mode,
                        const NetworkConfig* reference) {
  EnergyBreakdown out = h_logical_decomposed(config, chan, w, nbhd, mode);
  out.physical = h_physical(config, w);
  if (reference != nullptr) out.reconfig = w.xi * reconfiguration_distance(config, *reference);
  out.sum();
  return out;
}

CliquePotential clique_potential(int i, int j, const NetworkConfig& config,
                                 const ChannelParams& chan, const ModelWeights& w,
                                 const NeighborhoodParams& nbhd) {
  const auto idx = config.find(i, j);
  if (!idx) throw ValidationError("clique_potential: no such dipole");
  CliquePotential out;
  for (int node : {i, j}) {
    const auto& n = config.node(node);
    if (n.failed) continue;
    out.physical += position_prior(n.position, n.desired_position, w);
    for (int k : yao_neighbors(node, config, w.theta))
      out.physical += w.zeta * h_connectivity(n.position, config.node(k).position, w);
  }
  const DipoleSystem sys(config, chan, nbhd.interference_range);
  const auto sigma = config.activities();
  const std::size_t d = *idx;
  out.neighborhood = sys.neighbors(d);
  if (on(sys, sigma, d)) out.logical = local_flip_delta(sys, sigma, d, w.beta,
                                                        PenaltyMode::quadratic);
  return out;
}

}  // namespace selfconf
