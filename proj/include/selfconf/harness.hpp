#pragma once

// Scenario files, experiment runners and their measurements.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfconf/annealer.hpp"
#include "selfconf/bounds.hpp"
#include "selfconf/network.hpp"
#include "selfconf/oracle.hpp"
#include "selfconf/stdma.hpp"

namespace selfconf {

enum class ExperimentKind {
  form_topology,
  schedule_links,
  joint,
  recover,
  capacity_compare,
  bound_validate,
  complexity_measure,
  stdma,
};

std::string to_string(ExperimentKind kind);
// Throws ValidationError naming `field` for an unknown name.
ExperimentKind parse_experiment(std::string_view name, std::string_view field = "experiment");

enum class TopologyKind { random_uniform, regular_grid, line };
// yao: Yao edges of the start positions. target_yao: Yao edges of the
// desired positions. range: every pair within demand_range.
enum class DemandKind { yao, target_yao, range };

struct TopologySpec {
  TopologyKind kind = TopologyKind::random_uniform;
  int nodes = 100;
  double side = 0.0;            // random-uniform square; 0 selects sqrt(N) l_th
  double spacing = 0.0;         // grid and line; 0 selects l_th
  bool random_spacing = false;  // line gaps uniform in [spacing / 2, 3 spacing / 2]
  bool grid_targets = true;     // random-uniform desired positions on the l_th grid
  DemandKind demand = DemandKind::yao;
  double demand_range = 0.0;
};

struct RecoverSpec {
  std::vector<int> failed;  // empty: the 4 nodes nearest the centroid
  std::vector<double> xi{3.0, 10.0, 30.0};
};

struct CapacitySpec {
  std::vector<double> separation_ranges{1.0, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0};
};

struct BoundSpec {
  std::vector<double> alphas{4.0, 6.0};
  std::vector<double> interference_ranges{10, 15, 20, 30, 40, 60, 100};
  double n_nodes = 1000.0;
  double epsilon0 = 0.0;
  double epsilon_target = 0.1;
  int restarts = 5;  // anneals per model in the measured-error experiment
};

struct ComplexitySpec {
  std::vector<int> sizes{20, 40, 60, 80, 100};
};

struct Scenario {
  ExperimentKind experiment = ExperimentKind::schedule_links;
  std::vector<std::uint64_t> seeds{1};
  TopologySpec topology;
  ChannelParams chan;
  ModelWeights weights;
  NeighborhoodParams nbhd;
  AnnealSchedule schedule;
  UpdateMode mode;
  PenaltyMode penalty = PenaltyMode::hard;
  double candidate_step = 0.0;
  int trace_every = 1;
  RecoverSpec recover;
  CapacitySpec capacity;
  BoundSpec bounds;
  ComplexitySpec complexity;
  bool oracle = false;
  std::size_t oracle_cap = kDefaultEnumerationCap;

  // Throws ValidationError naming the offending field.
  void validate() const;
  SamplerParams sampler(Layers layers) const;
};

// JSON with nested sections; absent keys keep their defaults, unknown keys
// are rejected with the dotted path of the key.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_json(const Scenario& scenario);

// Nodes and demanded dipoles for one seed.
NetworkConfig build_topology(const Scenario& scenario, std::uint64_t seed);

// Active dipoles whose SINR against every other active dipole meets the
// threshold.
std::size_t one_hop_capacity(const NetworkConfig& config, const ChannelParams& chan);
// Mean number of active dipoles in the interference neighborhood of each
// active dipole. Throws UndefinedMetricError without active dipoles.
double measure_complexity(const NetworkConfig& config, const NeighborhoodParams& nbhd);

struct ProtocolResult {
  std::vector<int> sigma;
  std::size_t activated = 0;
  std::size_t capacity = 0;
};

// Greedy activation in a seeded random order: a dipole joins when both its
// nodes are free and its transmitter is at least r_s from every active
// receiver and its receiver at least r_s from every active transmitter.
ProtocolResult protocol_model_baseline(const NetworkConfig& config, double separation,
                                       const ChannelParams& chan, std::uint64_t seed);

struct MetricsRecord {
  std::uint64_t seed = 0;
  std::string experiment;
  std::string variant;
  std::size_t nodes = 0;
  std::size_t dipoles = 0;
  std::size_t active = 0;
  std::size_t one_hop_capacity = 0;
  std::optional<double> measured_complexity;
  std::optional<double> measured_error;
  std::string error_method;
  std::optional<bool> one_connected;
  std::optional<bool> within_band;
  int sweeps = 0;
  double energy = 0.0;
  double wall_seconds = 0.0;  // excluded from equality
  std::map<std::string, double> extra;

  bool operator==(const MetricsRecord& other) const;
};

struct SeedRun {
  MetricsRecord metrics;
  NetworkConfig final_config;
  std::vector<TraceRecord> trajectory;
  std::optional<SlotAssignment> slots;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Aggregate {
  std::string variant;
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ScenarioResult {
  Scenario scenario;
  std::vector<SeedRun> runs;
  std::vector<Aggregate> aggregate;
  std::vector<Table> tables;
  std::map<std::string, double> summary;
};

// Mean, min and max of every numeric metric per variant.
std::vector<Aggregate> aggregate(const std::vector<MetricsRecord>& records);

struct BoundValidationRow {
  double interference_range = 0.0;
  double complexity = 0.0;
  double measured_error = 0.0;  // mean over seeds
  double epsilon_delta = 0.0;
  bool feasible = false;
  bool dominated = false;
  std::string method;  // "enumeration" or "annealed"
};

struct BoundValidation {
  std::vector<BoundValidationRow> rows;
  // Median gap of the global-model restarts above the best one, relative to
  // H* and averaged over seeds: the resolution of the annealed estimate.
  double resolution = 0.0;
  std::vector<SeedRun> runs;
};

BoundValidation bound_validation_experiment(const Scenario& scenario);

struct CapacityComparison {
  double local_mean = 0.0;
  double global_mean = 0.0;
  std::vector<double> separation_ranges;
  std::vector<double> protocol_means;
  double best_separation = 0.0;
  double protocol_best = 0.0;
  double protocol_vs_local_gap = 0.0;  // 1 - protocol_best / local_mean
  double local_vs_global_gap = 0.0;    // 1 - local_mean / global_mean
  std::vector<SeedRun> runs;
};

CapacityComparison capacity_compare_experiment(const Scenario& scenario);

struct ComplexityScaling {
  std::vector<int> sizes;
  std::vector<double> local_mean;
  std::vector<double> global_mean;
  double global_linear_r2 = 0.0;
  double local_exponent = 0.0;  // log-log slope
  std::vector<SeedRun> runs;
};

ComplexityScaling complexity_experiment(const Scenario& scenario);

struct RecoverRow {
  std::uint64_t seed = 0;
  double xi = 0.0;
  std::size_t changed = 0;
  bool connected = false;
  bool contains_failed = false;
  double radius = 0.0;  // farthest changed node from the nearest failed node
};

struct RecoverExperiment {
  std::vector<int> failed;
  std::vector<RecoverRow> rows;
  std::vector<SeedRun> runs;
};

RecoverExperiment recover_experiment(const Scenario& scenario);

// Nodes whose position moved by more than tolerance * l_th, whose failure
// state differs, or with an incident dipole whose activity differs.
std::vector<int> changed_nodes(const NetworkConfig& result, const NetworkConfig& reference,
                               double position_tolerance);
// Connectivity of `subset` under the Yao adjacency of `reference`.
bool subset_connected(const NetworkConfig& reference, const std::vector<int>& subset,
                      double theta);

ScenarioResult run_scenario(const Scenario& scenario);

// Closed-form bound tables over bounds.alphas x bounds.interference_ranges
// with the channel and contention range of `scenario`, plus the r_c growth
// order per alpha. No annealing.
ScenarioResult evaluate_bounds(const Scenario& scenario);

std::string metrics_json(const MetricsRecord& record);

// metrics.jsonl, aggregate.csv, one CSV per table, scenario.json,
// snapshots/seed-<s>[-<variant>].json and trajectory/....csv under `dir`.
void write_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

}  // namespace selfconf
