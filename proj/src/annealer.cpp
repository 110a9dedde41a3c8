#include "selfconf/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "selfconf/error.hpp"

namespace selfconf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t first_min(const std::vector<double>& e) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < e.size(); ++k)
    if (e[k] < e[best]) best = k;
  return best;
}

std::vector<double> weights_from(const std::vector<double>& energies, double temperature) {
  std::vector<double> p(energies.size(), 0.0);
  if (temperature == 0.0) {
    p[first_min(energies)] = 1.0;
    return p;
  }
  const double lowest = *std::min_element(energies.begin(), energies.end());
  if (!std::isfinite(lowest)) {
    p[0] = 1.0;
    return p;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    p[k] = std::exp(-(energies[k] - lowest) / temperature);
    z += p[k];
  }
  for (auto& x : p) x /= z;
  return p;
}

}  // namespace

void AnnealSchedule::validate() const {
  if (!(t0_temperature > 0.0)) throw ValidationError("schedule.t0_temperature must be > 0");
  if (max_sweeps < 0) throw ValidationError("schedule.max_sweeps must be >= 0");
  if (fixed_temperature && !(*fixed_temperature > 0.0))
    throw ValidationError("schedule.fixed_temperature must be > 0");
  if (!(stop_tolerance >= 0.0)) throw ValidationError("schedule.stop_tolerance must be >= 0");
  if (patience < 1) throw ValidationError("schedule.patience must be >= 1");
  if (quench_sweeps < 0) throw ValidationError("schedule.quench_sweeps must be >= 0");
}

void SamplerParams::validate() const {
  chan.validate();
  weights.validate();
  nbhd.validate();
  if (candidate_step < 0.0) throw ValidationError("sampler.candidate_step must be >= 0");
}

double cooling(int t, const AnnealSchedule& schedule) {
  if (schedule.fixed_temperature) return *schedule.fixed_temperature;
  if (t < 1) throw ValidationError("cooling: sweep index must be >= 1");
  return schedule.t0_temperature / std::log1p(static_cast<double>(t));
}

std::vector<Point> position_candidates(const NodeState& node, double step) {
  std::vector<Point> out{node.position};
  auto add = [&](Point p) {
    for (const auto& q : out)
      if (distance(p, q) < 1e-12) return;
    out.push_back(p);
  };
  add(node.desired_position);
  const double diag = step / std::sqrt(2.0);
  const Point c = node.position;
  for (Point off : {Point{step, 0}, Point{diag, diag}, Point{0, step}, Point{-diag, diag},
                    Point{-step, 0}, Point{-diag, -diag}, Point{0, -step}, Point{diag, -diag}})
    add({c.x + off.x, c.y + off.y});
  return out;
}

double position_energy(int i, Point x, Point desired, std::span<const NodeState> others,
                       const ModelWeights& w, const std::optional<Point>& reference) {
  double e = position_prior(x, desired, w);
  for (int j : yao_neighbors_at(x, i, others, w.theta)) {
    for (const auto& n : others) {
      if (n.id == j) {
        e += w.zeta * h_connectivity(x, n.position, w);
        break;
      }
    }
  }
  if (reference) e += w.xi * distance(x, *reference);
  return e;
}

NodeView make_view(int i, const NetworkConfig& config, const DipoleSystem& sys,
                   const ModelWeights& w, int stamp) {
  NodeView view;
  view.self = config.node(i);
  view.stamp = stamp;
  const Point here = view.self.position;
  for (const auto& n : config.nodes()) {
    if (n.id == i || n.failed) continue;
    if (distance(here, n.position) <= sys.interference_range())
      view.neighbor_positions[n.id] = n.position;
  }
  for (int j : yao_neighbors(i, config, w.theta))
    view.neighbor_positions[j] = config.node(j).position;
  std::set<std::size_t> known;
  for (std::size_t d : sys.incident(i)) {
    if (sys.tx(d) != i) continue;
    known.insert(d);
    for (int node : {sys.tx(d), sys.rx(d)})
      for (std::size_t e : sys.incident(node)) known.insert(e);
    for (std::size_t e : sys.neighbors(d)) {
      known.insert(e);
      for (std::size_t f : sys.neighbors(e)) known.insert(f);
    }
  }
  for (std::size_t e : known) {
    view.neighbor_activities[e] = config.dipole(e).activity;
    for (int node : {sys.tx(e), sys.rx(e)})
      if (node != i) view.neighbor_positions[node] = config.node(node).position;
  }
  return view;
}

std::vector<double> position_conditional(int i, const NodeView& view,
                                         std::span<const Point> candidates,
                                         const ModelWeights& w, double temperature) {
  if (candidates.empty()) throw ValidationError("position_conditional: no candidates");
  std::vector<NodeState> others;
  for (const auto& [id, p] : view.neighbor_positions) others.push_back({id, p, p, false});
  std::vector<double> energies;
  for (Point x : candidates)
    energies.push_back(position_energy(i, x, view.self.desired_position, others, w));
  return weights_from(energies, temperature);
}

std::array<double, 2> dipole_conditional(std::size_t d, const NodeView& view,
                                         const DipoleSystem& sys, int now, double temperature,
                                         const ModelWeights& w, PenaltyMode penalty) {
  if (now - view.stamp > 1)
    throw StaleViewError("node view from sweep " + std::to_string(view.stamp) +
                         " is too old at sweep " + std::to_string(now));
  std::vector<int> sigma(sys.size(), -1);
  auto need = [&](std::size_t e) {
    auto it = view.neighbor_activities.find(e);
    if (it == view.neighbor_activities.end())
      throw ValidationError("node view lacks the activity of dipole " + std::to_string(e));
    sigma[e] = it->second;
  };
  for (int node : {sys.tx(d), sys.rx(d)})
    for (std::size_t e : sys.incident(node)) need(e);
  for (std::size_t e : sys.neighbors(d)) {
    need(e);
    if (penalty == PenaltyMode::hard)
      for (std::size_t f : sys.neighbors(e)) need(f);
  }
  const double delta = local_flip_delta(sys, sigma, d, w.beta, penalty);
  const auto p = weights_from({0.0, delta}, temperature);
  return {p[0], p[1]};
}

Annealer::Annealer(const NetworkConfig& start, const SamplerParams& params, std::uint64_t seed,
                   const NetworkConfig* reference)
    : params_(params),
      nodes_(start.nodes()),
      dipoles_(start.dipoles()),
      sys_(start, params.chan, params.nbhd.interference_range),
      sigma_(start.activities()),
      interference_(start.dipole_count(), 0.0),
      out_(start.node_count()),
      rng_(seed) {
  params_.validate();
  for (std::size_t d = 0; d < sys_.size(); ++d) {
    if (!sys_.usable(d)) sigma_[d] = -1;
    out_[static_cast<std::size_t>(sys_.tx(d))].push_back(d);
  }
  if (reference != nullptr) {
    if (reference->node_count() != start.node_count() ||
        reference->dipole_count() != start.dipole_count())
      throw ValidationError("reference configuration has a different shape");
    has_reference_ = true;
    ref_positions_ = reference->positions();
    ref_sigma_ = reference->activities();
  }
  for (std::size_t d = 0; d < sys_.size(); ++d) refresh_interference(d);
}

void Annealer::refresh_interference(std::size_t f) {
  double total = 0.0;
  for (std::size_t e : sys_.neighbors(f))
    if (sigma_[e] == 1) total += sys_.gain(e, f);
  interference_[f] = total;
}

void Annealer::set_activity(std::size_t d, int s) {
  if (sigma_[d] == s) return;
  sigma_[d] = s;
  const double sign = s == 1 ? 1.0 : -1.0;
  for (std::size_t e : sys_.neighbors(d)) interference_[e] += sign * sys_.gain(d, e);
}

void Annealer::move(int i, Point p) {
  std::vector<std::size_t> touched;
  for (std::size_t d : sys_.incident(i)) {
    touched.push_back(d);
    touched.insert(touched.end(), sys_.neighbors(d).begin(), sys_.neighbors(d).end());
  }
  sys_.move_node(i, p);
  nodes_[static_cast<std::size_t>(i)].position = p;
  for (std::size_t d : sys_.incident(i))
    touched.insert(touched.end(), sys_.neighbors(d).begin(), sys_.neighbors(d).end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (std::size_t f : touched) refresh_interference(f);
}

double Annealer::flip_delta(std::size_t d) const {
  if (!sys_.usable(d)) return kInf;
  double delta;
  if (params_.penalty == PenaltyMode::quadratic) {
    delta = local_flip_delta(sys_, sigma_, d, params_.weights.beta, PenaltyMode::quadratic);
  } else {
    if (half_duplex_blocked(sys_, sigma_, d)) return kInf;
    const auto& chan = params_.chan;
    const double beta = params_.weights.beta;
    const double sig = sys_.signal(d);
    const bool d_on = sigma_[d] == 1;
    delta = first_order(sig, chan, 0.0);
    for (std::size_t e : sys_.neighbors(d)) {
      if (sigma_[e] != 1) continue;
      const double g_out = sys_.gain(d, e);
      delta += second_order(sig, sys_.gain(e, d), chan, 0.0) +
               second_order(sys_.signal(e), g_out, chan, 0.0);
      const double without = interference_[e] - (d_on ? g_out : 0.0);
      delta += beta * (static_cast<double>(sinr_violated(sys_.signal(e), without + g_out, chan)) -
                       static_cast<double>(sinr_violated(sys_.signal(e), without, chan)));
    }
    if (sinr_violated(sig, interference_[d], chan)) delta += beta;
  }
  if (has_reference_) delta += params_.weights.xi * (ref_sigma_[d] == 1 ? -1.0 : 1.0);
  return delta;
}

double Annealer::term(std::size_t f) const {
  if (sigma_[f] != 1 || !sys_.usable(f)) return 0.0;
  const auto& chan = params_.chan;
  const bool quad = params_.penalty == PenaltyMode::quadratic;
  const double b = quad ? params_.weights.beta : 0.0;
  const double sig = sys_.signal(f);
  double e = first_order(sig, chan, b);
  double interference = 0.0;
  for (std::size_t g : sys_.neighbors(f)) {
    if (sigma_[g] != 1) continue;
    interference += sys_.gain(g, f);
    e += second_order(sig, sys_.gain(g, f), chan, b);
  }
  if (!quad && sinr_violated(sig, interference, chan)) e += params_.weights.beta;
  return e;
}

double Annealer::physical_energy(int i, Point x) const {
  std::optional<Point> ref;
  if (has_reference_) ref = ref_positions_[static_cast<std::size_t>(i)];
  return position_energy(i, x, nodes_[static_cast<std::size_t>(i)].desired_position, nodes_,
                         params_.weights, ref);
}

std::vector<Point> Annealer::candidates(int i) const {
  std::vector<Point> out;
  for (Point p : position_candidates(nodes_[static_cast<std::size_t>(i)], params_.step())) {
    bool clash = false;
    for (const auto& n : nodes_) {
      if (n.id != i && !n.failed && distance(n.position, p) < 1e-9) {
        clash = true;
        break;
      }
    }
    if (!clash) out.push_back(p);
  }
  return out;
}

std::size_t Annealer::draw(const std::vector<double>& energies, double temperature) {
  return draw_boltzmann(energies, temperature, rng_);
}

std::size_t draw_boltzmann(const std::vector<double>& energies, double temperature, Rng& rng) {
  if (temperature == 0.0) return first_min(energies);
  const auto p = weights_from(energies, temperature);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (r < p[k]) return k;
    r -= p[k];
  }
  std::size_t last = p.size() - 1;
  while (last > 0 && p[last] == 0.0) --last;
  return last;
}

void Annealer::update_position(int i, double temperature) {
  const auto cands = candidates(i);
  std::vector<double> energies;
  energies.reserve(cands.size());
  for (Point x : cands) energies.push_back(physical_energy(i, x));
  const Point chosen = cands[draw(energies, temperature)];
  if (!(chosen == nodes_[static_cast<std::size_t>(i)].position)) move(i, chosen);
}

bool Annealer::update_dipole(std::size_t d, double temperature) {
  const double delta = flip_delta(d);
  const int next = draw({0.0, delta}, temperature) == 1 ? 1 : -1;
  const bool flipped = next != sigma_[d];
  set_activity(d, next);
  return flipped;
}

int Annealer::update_incident(int i, double temperature) {
  const auto& inc = sys_.incident(i);
  std::vector<int> before;
  for (std::size_t d : inc) before.push_back(sigma_[d]);
  for (std::size_t d : inc) set_activity(d, -1);
  std::vector<double> energies{0.0};
  if (has_reference_)
    for (std::size_t d : inc)
      if (ref_sigma_[d] == 1) energies[0] += params_.weights.xi;
  for (std::size_t d : inc) energies.push_back(energies[0] + flip_delta(d));
  const std::size_t pick = draw(energies, temperature);
  if (pick > 0) set_activity(inc[pick - 1], 1);
  int flips = 0;
  for (std::size_t k = 0; k < inc.size(); ++k)
    if (sigma_[inc[k]] != before[k]) ++flips;
  return flips;
}

double Annealer::placed_delta(std::size_t d, int i, Point x,
                              std::span<const std::size_t> active) const {
  const auto& chan = params_.chan;
  const double beta = params_.weights.beta;
  const auto at = [&](int node) { return node == i ? x : sys_.position(node); };
  const Point tx = at(sys_.tx(d));
  const Point rx = at(sys_.rx(d));
  const double sig = received_power(chan.tx_power, distance(tx, rx), chan.alpha);
  double delta = first_order(sig, chan, 0.0);
  double interference = 0.0;
  for (std::size_t e : active) {
    const Point etx = sys_.position(sys_.tx(e));
    const Point erx = sys_.position(sys_.rx(e));
    if (!within_interference_range(tx, rx, etx, erx, sys_.interference_range())) continue;
    const double g_in = received_power(chan.tx_power, distance(etx, rx), chan.alpha);
    const double g_out = received_power(chan.tx_power, distance(tx, erx), chan.alpha);
    interference += g_in;
    delta += second_order(sig, g_in, chan, 0.0) + second_order(sys_.signal(e), g_out, chan, 0.0);
    delta += beta * (static_cast<double>(sinr_violated(sys_.signal(e), interference_[e] + g_out, chan)) -
                     static_cast<double>(sinr_violated(sys_.signal(e), interference_[e], chan)));
  }
  if (sinr_violated(sig, interference, chan)) delta += beta;
  if (has_reference_) delta += params_.weights.xi * (ref_sigma_[d] == 1 ? -1.0 : 1.0);
  return delta;
}

// Hard mode: with the block cleared no other term depends on X_i, so each
// option costs the physical energy plus one placed dipole against the
// current active set.
int Annealer::update_joint_hard(int i, double temperature) {
  const auto& inc = sys_.incident(i);
  std::vector<int> before;
  for (std::size_t d : inc) before.push_back(sigma_[d]);
  for (std::size_t d : inc) set_activity(d, -1);

  std::vector<std::size_t> options;
  for (std::size_t d : inc)
    if (sys_.usable(d) && !half_duplex_blocked(sys_, sigma_, d)) options.push_back(d);
  std::vector<std::size_t> active;
  for (std::size_t e = 0; e < sigma_.size(); ++e)
    if (sigma_[e] == 1) active.push_back(e);

  const auto cands = candidates(i);
  std::vector<double> energies;
  energies.reserve(cands.size() * (options.size() + 1));
  for (Point x : cands) {
    const double phys = physical_energy(i, x);
    energies.push_back(phys);
    for (std::size_t d : options) energies.push_back(phys + placed_delta(d, i, x, active));
  }
  const std::size_t pick = draw(energies, temperature);
  const Point chosen = cands[pick / (options.size() + 1)];
  const std::size_t slot = pick % (options.size() + 1);
  if (!(chosen == nodes_[static_cast<std::size_t>(i)].position)) move(i, chosen);
  if (slot > 0) set_activity(options[slot - 1], 1);
  int flips = 0;
  for (std::size_t k = 0; k < inc.size(); ++k)
    if (sigma_[inc[k]] != before[k]) ++flips;
  return flips;
}

int Annealer::update_joint(int i, double temperature) {
  const bool hard = params_.penalty == PenaltyMode::hard;
  if (hard) return update_joint_hard(i, temperature);
  const auto& out = hard ? sys_.incident(i) : out_[static_cast<std::size_t>(i)];
  std::vector<int> before;
  for (std::size_t d : out) before.push_back(sigma_[d]);
  for (std::size_t d : out) set_activity(d, -1);

  // assignments of the block, as bitmasks over `out`
  std::vector<std::uint32_t> options{0};
  if (hard) {
    for (std::size_t k = 0; k < out.size(); ++k)
      if (sys_.usable(out[k]) && !half_duplex_blocked(sys_, sigma_, out[k]))
        options.push_back(std::uint32_t{1} << k);
  } else {
    if (out.size() > 16) throw ValidationError("joint update: too many outgoing dipoles");
    for (std::uint32_t m = 1; m < (std::uint32_t{1} << out.size()); ++m) {
      bool ok = true;
      for (std::size_t k = 0; k < out.size(); ++k)
        if ((m >> k) & 1U && !sys_.usable(out[k])) ok = false;
      if (ok) options.push_back(m);
    }
  }

  const auto cands = candidates(i);
  std::set<std::size_t> affected;
  auto collect = [&] {
    for (std::size_t d : sys_.incident(i)) {
      affected.insert(d);
      affected.insert(sys_.neighbors(d).begin(), sys_.neighbors(d).end());
    }
  };
  collect();
  for (std::size_t c = 1; c < cands.size(); ++c) {
    sys_.move_node(i, cands[c]);
    collect();
  }

  std::vector<double> energies;
  energies.reserve(cands.size() * options.size());
  for (Point x : cands) {
    sys_.move_node(i, x);
    nodes_[static_cast<std::size_t>(i)].position = x;
    const double phys = physical_energy(i, x);
    for (std::uint32_t m : options) {
      double e = phys;
      for (std::size_t k = 0; k < out.size(); ++k) {
        const int s = (m >> k) & 1U ? 1 : -1;
        sigma_[out[k]] = s;
        if (has_reference_ && s != ref_sigma_[out[k]]) e += params_.weights.xi;
      }
      for (std::size_t f : affected) e += term(f);
      energies.push_back(e);
    }
    for (std::size_t d : out) sigma_[d] = -1;
  }
  const std::size_t pick = draw(energies, temperature);
  const Point chosen = cands[pick / options.size()];
  const std::uint32_t mask = options[pick % options.size()];

  sys_.move_node(i, chosen);
  nodes_[static_cast<std::size_t>(i)].position = chosen;
  int flips = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int s = (mask >> k) & 1U ? 1 : -1;
    sigma_[out[k]] = s;
    if (s != before[k]) ++flips;
  }
  for (std::size_t f : affected) refresh_interference(f);
  return flips;
}

int Annealer::sweep(double temperature, Layers layers) {
  std::vector<int> order;
  for (const auto& n : nodes_)
    if (!n.failed) order.push_back(n.id);
  if (params_.mode.order == ScanOrder::random) std::shuffle(order.begin(), order.end(), rng_);
  int flips = 0;
  for (int i : order) {
    if (params_.mode.kind == UpdateKind::joint && layers == Layers::both) {
      flips += update_joint(i, temperature);
      continue;
    }
    if (layers != Layers::logical) update_position(i, temperature);
    if (layers == Layers::physical) continue;
    if (params_.penalty == PenaltyMode::hard) {
      flips += update_incident(i, temperature);
    } else {
      for (std::size_t d : out_[static_cast<std::size_t>(i)])
        if (update_dipole(d, temperature)) ++flips;
    }
  }
  return flips;
}

NetworkConfig Annealer::config() const {
  auto dipoles = dipoles_;
  for (std::size_t d = 0; d < dipoles.size(); ++d) dipoles[d].activity = sigma_[d];
  return NetworkConfig(nodes_, dipoles);
}

EnergyBreakdown Annealer::energy() const {
  EnergyBreakdown out = logical_breakdown(sys_, sigma_, params_.weights.beta, params_.penalty);
  const auto cfg = config();
  out.physical = h_physical(cfg, params_.weights);
  if (has_reference_) {
    double dist = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      dist += distance(nodes_[i].position, ref_positions_[i]);
    for (std::size_t d = 0; d < sigma_.size(); ++d)
      if (sigma_[d] != ref_sigma_[d]) dist += 1.0;
    out.reconfig = params_.weights.xi * dist;
  }
  out.sum();
  return out;
}

std::size_t Annealer::active_count() const {
  return static_cast<std::size_t>(std::count(sigma_.begin(), sigma_.end(), 1));
}

bool Annealer::within_band(double tolerance) const {
  return selfconf::within_band(config(), params_.weights, tolerance);
}

bool within_band(const NetworkConfig& config, const ModelWeights& w, double tolerance) {
  for (const auto& n : config.nodes()) {
    if (n.failed) continue;
    for (int j : yao_neighbors(n.id, config, w.theta)) {
      const double l = distance(n.position, config.node(j).position);
      if (!(std::abs((l - w.l_th) / w.l_th) < tolerance)) return false;
    }
  }
  return true;
}

NetworkConfig sweep(const NetworkConfig& config, const SamplerParams& params,
                    const AnnealSchedule& schedule, int t, std::uint64_t seed,
                    const NetworkConfig* reference) {
  schedule.validate();
  if (schedule.max_sweeps == 0) return config;
  Annealer a(config, params, seed, reference);
  a.sweep(cooling(t, schedule));
  return a.config();
}

RunResult run(const NetworkConfig& start, const SamplerParams& params,
              const AnnealSchedule& schedule, std::uint64_t seed,
              const NetworkConfig* reference) {
  schedule.validate();
  RunResult result;
  if (schedule.max_sweeps == 0) {
    result.final_config = start;
    return result;
  }
  Annealer a(start, params, seed, reference);
  int total = 0;
  auto trace = [&](double temperature, const char* phase) {
    ++total;
    if (params.trace_every > 0 && total % params.trace_every == 0)
      result.trajectory.push_back({total, temperature, a.energy(), a.active_count(), phase});
  };
  const bool physical = params.layers != Layers::logical;
  const bool logical = params.layers != Layers::physical;

  if (params.mode.kind == UpdateKind::joint && physical && logical) {
    int quiet = 0;
    for (int t = 1; t <= schedule.max_sweeps; ++t) {
      const double temp = cooling(t, schedule);
      quiet = a.sweep(temp, Layers::both) == 0 ? quiet + 1 : 0;
      trace(temp, "joint");
      ++result.physical_sweeps;
      ++result.logical_sweeps;
      if (quiet >= schedule.patience && a.within_band(schedule.stop_tolerance)) {
        result.physical_converged = result.logical_converged = true;
        break;
      }
    }
  } else {
    if (physical) {
      if (a.within_band(schedule.stop_tolerance)) result.physical_converged = true;
      for (int t = 1; t <= schedule.max_sweeps && !result.physical_converged; ++t) {
        const double temp = cooling(t, schedule);
        a.sweep(temp, Layers::physical);
        trace(temp, "physical");
        ++result.physical_sweeps;
        if (a.within_band(schedule.stop_tolerance)) result.physical_converged = true;
      }
    }
    if (logical) {
      int quiet = 0;
      for (int t = 1; t <= schedule.max_sweeps; ++t) {
        const double temp = cooling(t, schedule);
        quiet = a.sweep(temp, Layers::logical) == 0 ? quiet + 1 : 0;
        trace(temp, "logical");
        ++result.logical_sweeps;
        if (quiet >= schedule.patience) {
          result.logical_converged = true;
          break;
        }
      }
    }
  }
  for (int q = 0; q < schedule.quench_sweeps; ++q) {
    int flips = 0;
    if (physical && !(params.mode.kind == UpdateKind::joint && logical))
      a.sweep(0.0, Layers::physical);
    if (physical && logical && params.mode.kind == UpdateKind::joint)
      flips += a.sweep(0.0, Layers::both);
    else if (logical)
      flips += a.sweep(0.0, Layers::logical);
    trace(0.0, "quench");
    if (flips == 0 && (!physical || a.within_band(schedule.stop_tolerance)) && q > 0) break;
  }
  if (physical) result.physical_converged = a.within_band(schedule.stop_tolerance);
  result.sweeps = total;
  result.final_config = a.config();
  return result;
}

NetworkConfig inject_failures(const NetworkConfig& config, std::span<const int> failed) {
  if (failed.empty()) throw ValidationError("failure set must be non-empty");
  return config.with_failed(failed);
}

RunResult recover(const NetworkConfig& current, const NetworkConfig& reference, double xi,
                  const SamplerParams& params, const AnnealSchedule& schedule,
                  std::uint64_t seed) {
  if (!(xi >= 0.0)) throw ValidationError("xi must be >= 0");
  SamplerParams p = params;
  p.weights.xi = xi;
  return run(current, p, schedule, seed, xi > 0.0 ? &reference : nullptr);
}

}  // namespace selfconf
