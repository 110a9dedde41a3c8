#pragma once

// Stochastic relaxation over positions and dipole activities with the local
// model: each node samples its position from its physical conditional and
// the activities of its dipoles from their logical conditional, at a
// temperature that follows T0 / ln(1 + t).

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selfconf/dipole_system.hpp"
#include "selfconf/hamiltonian.hpp"
#include "selfconf/network.hpp"
#include "selfconf/topology.hpp"

namespace selfconf {

struct AnnealSchedule {
  double t0_temperature = 3.0;
  int max_sweeps = 2000;
  std::optional<double> fixed_temperature;
  double stop_tolerance = 0.01;  // relative band on Yao pair distances
  int patience = 10;             // sweeps without a flip ending the logical phase
  int quench_sweeps = 20;        // zero-temperature sweeps after annealing

  void validate() const;
};

enum class UpdateKind { sequential, joint };
enum class ScanOrder { fixed, random };

struct UpdateMode {
  UpdateKind kind = UpdateKind::sequential;
  ScanOrder order = ScanOrder::fixed;
};

enum class Layers { physical, logical, both };

struct SamplerParams {
  ChannelParams chan;
  ModelWeights weights;
  NeighborhoodParams nbhd;
  PenaltyMode penalty = PenaltyMode::hard;
  UpdateMode mode;
  Layers layers = Layers::both;
  double candidate_step = 0.0;  // 0 selects l_th / 8
  int trace_every = 1;          // 0 disables the energy trace

  void validate() const;
  double step() const { return candidate_step > 0.0 ? candidate_step : weights.l_th / 8.0; }
};

double cooling(int t, const AnnealSchedule& schedule);

// Index drawn with probability proportional to exp(-E/T); T == 0 returns the
// first minimizer. An all-infinite list returns 0.
std::size_t draw_boltzmann(const std::vector<double>& energies, double temperature, Rng& rng);

// What a node knows: its own state, positions of nodes it hears from, and
// activities of dipoles within two interference hops of its dipoles.
struct NodeView {
  NodeState self;
  std::map<int, Point> neighbor_positions;
  std::map<std::size_t, int> neighbor_activities;
  int stamp = 0;
};

NodeView make_view(int i, const NetworkConfig& config, const DipoleSystem& sys,
                   const ModelWeights& w, int stamp);

// Current position, desired position and eight compass offsets at `step`,
// without duplicates, in that order.
std::vector<Point> position_candidates(const NodeState& node, double step);

// Local physical energy of node i at x: position prior plus zeta times the
// connectivity penalty to each Yao neighbor of x among `others`, plus
// xi * |x - reference| when a reference position is given.
double position_energy(int i, Point x, Point desired, std::span<const NodeState> others,
                       const ModelWeights& w, const std::optional<Point>& reference = {});

// Probabilities over the candidates. T == 0 puts all mass on the first
// minimizer.
std::vector<double> position_conditional(int i, const NodeView& view,
                                         std::span<const Point> candidates,
                                         const ModelWeights& w, double temperature);

// {P(inactive), P(active)} for dipole d given the view. Throws StaleViewError
// when the view is older than one sweep, and ValidationError when it lacks a
// needed activity.
std::array<double, 2> dipole_conditional(std::size_t d, const NodeView& view,
                                         const DipoleSystem& sys, int now, double temperature,
                                         const ModelWeights& w, PenaltyMode penalty);

struct TraceRecord {
  int sweep = 0;
  double temperature = 0.0;
  EnergyBreakdown energy;
  std::size_t active = 0;
  std::string phase;
};

struct RunResult {
  NetworkConfig final_config;
  std::vector<TraceRecord> trajectory;
  int sweeps = 0;
  int physical_sweeps = 0;
  int logical_sweeps = 0;
  bool physical_converged = false;
  bool logical_converged = false;
};

// Live sampler state. Updates inside a sweep are visible to later updates in
// the same sweep.
class Annealer {
 public:
  Annealer(const NetworkConfig& start, const SamplerParams& params, std::uint64_t seed,
           const NetworkConfig* reference = nullptr);

  // One pass over the non-failed nodes at temperature T (0 = greedy).
  // Returns the number of activity flips.
  int sweep(double temperature, Layers layers);
  int sweep(double temperature) { return sweep(temperature, params_.layers); }

  NetworkConfig config() const;
  std::span<const int> sigma() const { return sigma_; }
  const DipoleSystem& system() const { return sys_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  EnergyBreakdown energy() const;
  std::size_t active_count() const;
  bool within_band(double tolerance) const;

 private:
  void update_position(int i, double temperature);
  bool update_dipole(std::size_t d, double temperature);
  int update_incident(int i, double temperature);
  int update_joint(int i, double temperature);
  int update_joint_hard(int i, double temperature);
  double placed_delta(std::size_t d, int i, Point x, std::span<const std::size_t> active) const;
  void move(int i, Point p);
  void set_activity(std::size_t d, int s);
  void refresh_interference(std::size_t f);
  double flip_delta(std::size_t d) const;
  double term(std::size_t f) const;
  double physical_energy(int i, Point x) const;
  std::vector<Point> candidates(int i) const;
  std::size_t draw(const std::vector<double>& energies, double temperature);

  SamplerParams params_;
  std::vector<NodeState> nodes_;
  std::vector<Dipole> dipoles_;
  DipoleSystem sys_;
  std::vector<int> sigma_;
  std::vector<double> interference_;
  std::vector<std::vector<std::size_t>> out_;
  bool has_reference_ = false;
  std::vector<Point> ref_positions_;
  std::vector<int> ref_sigma_;
  Rng rng_;
};

// One pass over the non-failed nodes at temperature T(t).
NetworkConfig sweep(const NetworkConfig& config, const SamplerParams& params,
                    const AnnealSchedule& schedule, int t, std::uint64_t seed,
                    const NetworkConfig* reference = nullptr);

// True when every Yao pair distance is within tolerance * l_th of l_th.
bool within_band(const NetworkConfig& config, const ModelWeights& w, double tolerance);

RunResult run(const NetworkConfig& start, const SamplerParams& params,
              const AnnealSchedule& schedule, std::uint64_t seed,
              const NetworkConfig* reference = nullptr);

NetworkConfig inject_failures(const NetworkConfig& config, std::span<const int> failed);

// Anneals `current` (typically reference with failures injected) with the
// reconfiguration penalty xi * |(sigma, X) - reference| switched on.
RunResult recover(const NetworkConfig& current, const NetworkConfig& reference, double xi,
                  const SamplerParams& params, const AnnealSchedule& schedule,
                  std::uint64_t seed);

}  // namespace selfconf
