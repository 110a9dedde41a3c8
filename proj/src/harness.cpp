#include "selfconf/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "selfconf/error.hpp"
#include "selfconf/hamiltonian.hpp"
#include "selfconf/topology.hpp"

namespace selfconf {

using json = nlohmann::ordered_json;

namespace {

template <class E>
using NameTable = std::vector<std::pair<const char*, E>>;

const NameTable<ExperimentKind> kExperiments{
    {"form-topology", ExperimentKind::form_topology},
    {"schedule-links", ExperimentKind::schedule_links},
    {"joint", ExperimentKind::joint},
    {"recover", ExperimentKind::recover},
    {"capacity-compare", ExperimentKind::capacity_compare},
    {"bound-validate", ExperimentKind::bound_validate},
    {"complexity-measure", ExperimentKind::complexity_measure},
    {"stdma", ExperimentKind::stdma},
};
const NameTable<TopologyKind> kTopologies{{"random-uniform", TopologyKind::random_uniform},
                                          {"regular-grid", TopologyKind::regular_grid},
                                          {"line", TopologyKind::line}};
const NameTable<DemandKind> kDemands{
    {"yao", DemandKind::yao}, {"target-yao", DemandKind::target_yao}, {"range", DemandKind::range}};
const NameTable<UpdateKind> kUpdates{{"sequential", UpdateKind::sequential},
                                     {"joint", UpdateKind::joint}};
const NameTable<ScanOrder> kOrders{{"fixed", ScanOrder::fixed}, {"random", ScanOrder::random}};
const NameTable<PenaltyMode> kPenalties{{"quadratic", PenaltyMode::quadratic},
                                        {"hard", PenaltyMode::hard}};

template <class E>
E lookup(const NameTable<E>& table, std::string_view name, std::string_view field) {
  for (const auto& [n, v] : table)
    if (name == n) return v;
  std::string expected;
  for (const auto& [n, v] : table) expected += (expected.empty() ? "" : ", ") + std::string(n);
  throw ValidationError(std::string(field) + ": unknown value '" + std::string(name) +
                        "' (expected " + expected + ")");
}

template <class E>
std::string name_of(const NameTable<E>& table, E value) {
  for (const auto& [n, v] : table)
    if (v == value) return n;
  return "?";
}

// Object reader that remembers which keys were consumed so leftovers can be
// reported by their dotted path.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(where() + ": expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* take(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ValidationError(field(key) + ": expected a number");
      out = v->get<double>();
    }
  }
  void optional_number(const char* key, std::optional<double>& out) {
    if (const json* v = take(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) throw ValidationError(field(key) + ": expected a number or null");
      out = v->get<double>();
    }
  }
  template <class Int>
  void integer(const char* key, Int& out) {
    if (const json* v = take(key)) out = as_integer<Int>(*v, field(key));
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ValidationError(field(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }
  template <class E>
  void choice(const char* key, const NameTable<E>& table, E& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ValidationError(field(key) + ": expected a string");
      out = lookup(table, v->get<std::string>(), field(key));
    }
  }
  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ValidationError(field(key) + ": expected a list of numbers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number())
          throw ValidationError(field(key) + "[" + std::to_string(k) + "]: expected a number");
        out.push_back((*v)[k].get<double>());
      }
    }
  }
  template <class Int>
  void integers(const char* key, std::vector<Int>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ValidationError(field(key) + ": expected a list of integers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k)
        out.push_back(as_integer<Int>((*v)[k], field(key) + "[" + std::to_string(k) + "]"));
    }
  }
  template <class F>
  void section(const char* key, F&& read) {
    if (const json* v = take(key)) {
      Reader sub(*v, field(key));
      read(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ValidationError(field(item.key()) + ": unknown key");
  }

 private:
  std::string where() const { return path_.empty() ? "scenario" : path_; }

  template <class Int>
  static Int as_integer(const json& v, const std::string& field) {
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<Int>(v.get<std::int64_t>());
      throw ValidationError(field + ": expected a non-negative integer");
    } else {
      if (!v.is_number_integer()) throw ValidationError(field + ": expected an integer");
      return static_cast<Int>(v.get<std::int64_t>());
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void prefixed(const std::string& field, F&& check) {
  try {
    check();
  } catch (const ValidationError& e) {
    throw ValidationError(field + ": " + e.what());
  }
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field + ": " + what);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string flag(bool v) { return v ? "true" : "false"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Slope and R^2 of the least-squares line through (x, y).
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) return {0.0, 0.0};
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, r2};
}

NeighborhoodParams global_range(const NetworkConfig& config, const NeighborhoodParams& nbhd) {
  return {nbhd.contention_range,
          std::max(network_diameter(config) + 1.0, nbhd.contention_range)};
}

MetricsRecord base_record(const Scenario& sc, std::uint64_t seed, std::string variant,
                          const NetworkConfig& config) {
  MetricsRecord m;
  m.seed = seed;
  m.experiment = to_string(sc.experiment);
  m.variant = std::move(variant);
  m.nodes = config.node_count();
  m.dipoles = config.dipole_count();
  m.active = config.active_count();
  m.one_hop_capacity = one_hop_capacity(config, sc.chan);
  return m;
}

std::optional<double> complexity_or_none(const NetworkConfig& config,
                                         const NeighborhoodParams& nbhd) {
  try {
    return measure_complexity(config, nbhd);
  } catch (const UndefinedMetricError&) {
    return std::nullopt;
  }
}

// Logical configuration for fixed positions: enumeration when the oracle is
// requested, annealing otherwise.
SeedRun solve_logical(const Scenario& sc, const NetworkConfig& config,
                      const NeighborhoodParams& nbhd, bool global, std::uint64_t seed,
                      std::string variant) {
  const auto t0 = std::chrono::steady_clock::now();
  SeedRun out;
  double energy = 0.0;
  int sweeps = 0;
  if (sc.oracle) {
    GibbsSpec spec;
    spec.model = global ? ModelKind::global : ModelKind::local;
    spec.nbhd = nbhd;
    spec.penalty = sc.penalty;
    spec.cap = sc.oracle_cap;
    const auto map = map_config(config, sc.chan, sc.weights, spec);
    out.final_config = config.with_activities(map.sigma);
    energy = map.energy;
  } else {
    auto params = sc.sampler(Layers::logical);
    params.nbhd = nbhd;
    auto r = run(config, params, sc.schedule, seed);
    out.final_config = std::move(r.final_config);
    out.trajectory = std::move(r.trajectory);
    sweeps = r.sweeps;
    energy = h_local(out.final_config, sc.chan, sc.weights, nbhd, sc.penalty);
  }
  out.metrics = base_record(sc, seed, std::move(variant), out.final_config);
  out.metrics.sweeps = sweeps;
  out.metrics.energy = energy;
  out.metrics.measured_complexity = complexity_or_none(out.final_config, nbhd);
  out.metrics.wall_seconds = seconds_since(t0);
  return out;
}

SeedRun anneal_both(const Scenario& sc, const NetworkConfig& config, UpdateKind kind,
                    std::uint64_t seed, std::string variant) {
  const auto t0 = std::chrono::steady_clock::now();
  auto params = sc.sampler(Layers::both);
  params.mode.kind = kind;
  auto r = run(config, params, sc.schedule, seed);
  SeedRun out;
  out.final_config = std::move(r.final_config);
  out.trajectory = std::move(r.trajectory);
  out.metrics = base_record(sc, seed, std::move(variant), out.final_config);
  out.metrics.sweeps = r.sweeps;
  out.metrics.energy =
      h_total(out.final_config, sc.chan, sc.weights, sc.nbhd, sc.penalty).total;
  out.metrics.measured_complexity = complexity_or_none(out.final_config, sc.nbhd);
  out.metrics.one_connected = is_one_connected(out.final_config, sc.weights.theta);
  out.metrics.within_band =
      within_band(out.final_config, sc.weights, sc.schedule.stop_tolerance);
  out.metrics.extra["physical_sweeps"] = r.physical_sweeps;
  out.metrics.extra["logical_sweeps"] = r.logical_sweeps;
  out.metrics.wall_seconds = seconds_since(t0);
  return out;
}

std::vector<int> default_failed(const NetworkConfig& config) {
  const std::size_t n = config.node_count();
  Point c;
  for (const auto& node : config.nodes()) {
    c.x += node.position.x / static_cast<double>(n);
    c.y += node.position.y / static_cast<double>(n);
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return distance(config.node(a).position, c) < distance(config.node(b).position, c);
  });
  ids.resize(std::min<std::size_t>(4, n > 1 ? n - 1 : 0));
  std::sort(ids.begin(), ids.end());
  return ids;
}

Table slot_rows(std::uint64_t seed, const NetworkConfig& config, const SlotAssignment& a,
                Table t) {
  for (const auto& r : slot_table(config, a))
    t.rows.push_back({std::to_string(seed), std::to_string(r.tx), std::to_string(r.rx),
                      std::to_string(r.slot)});
  return t;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json snapshot_json(const SeedRun& run) {
  json j;
  j["seed"] = run.metrics.seed;
  j["variant"] = run.metrics.variant;
  json nodes = json::array();
  for (const auto& n : run.final_config.nodes())
    nodes.push_back({{"id", n.id},
                     {"position", point_json(n.position)},
                     {"desired", point_json(n.desired_position)},
                     {"failed", n.failed}});
  j["nodes"] = std::move(nodes);
  json dipoles = json::array();
  for (std::size_t d = 0; d < run.final_config.dipole_count(); ++d) {
    const auto& dp = run.final_config.dipole(d);
    json e{{"tx", dp.tx}, {"rx", dp.rx}, {"activity", dp.activity}};
    if (run.slots) e["slot"] = run.slots->slots[d];
    dipoles.push_back(std::move(e));
  }
  j["dipoles"] = std::move(dipoles);
  if (run.slots) j["s_max"] = run.slots->s_max;
  return j;
}

std::string file_stem(const MetricsRecord& m) {
  std::string stem = "seed-" + std::to_string(m.seed);
  if (!m.variant.empty()) {
    stem += '-';
    for (char c : m.variant)
      stem += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  }
  return stem;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const bool quote = cells[k].find_first_of(",\"\n") != std::string::npos;
      if (k) out << ',';
      if (quote) {
        out << '"';
        for (char c : cells[k]) out << (c == '"' ? "\"\"" : std::string(1, c));
        out << '"';
      } else {
        out << cells[k];
      }
    }
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

}  // namespace

std::string to_string(ExperimentKind kind) { return name_of(kExperiments, kind); }

ExperimentKind parse_experiment(std::string_view name, std::string_view field) {
  return lookup(kExperiments, name, field);
}

void Scenario::validate() const {
  require(!seeds.empty(), "seeds", "must be non-empty");
  require(topology.nodes >= 1, "topology.nodes", "must be >= 1");
  require(topology.side >= 0.0, "topology.side", "must be >= 0");
  require(topology.spacing >= 0.0, "topology.spacing", "must be >= 0");
  if (topology.demand == DemandKind::range)
    require(topology.demand_range > 0.0, "topology.demand_range", "must be > 0 for range demand");
  prefixed("channel", [&] { chan.validate(); });
  prefixed("weights", [&] { weights.validate(); });
  prefixed("neighborhood", [&] { nbhd.validate(); });
  prefixed("schedule", [&] { schedule.validate(); });
  require(candidate_step >= 0.0, "sampler.candidate_step", "must be >= 0");
  require(trace_every >= 0, "sampler.trace_every", "must be >= 0");
  require(oracle_cap >= 1, "oracle.cap", "must be >= 1");
  if (oracle) {
    const bool allowed = experiment == ExperimentKind::schedule_links ||
                         experiment == ExperimentKind::bound_validate ||
                         experiment == ExperimentKind::capacity_compare ||
                         experiment == ExperimentKind::complexity_measure;
    require(allowed, "oracle.enabled",
            "enumeration has no meaning for experiment '" + to_string(experiment) + "'");
  }
  switch (experiment) {
    case ExperimentKind::recover:
      require(!recover.xi.empty(), "recover.xi", "must be non-empty");
      for (double x : recover.xi) require(x > 0.0, "recover.xi", "entries must be > 0");
      for (int f : recover.failed)
        require(f >= 0 && f < topology.nodes, "recover.failed", "node id out of range");
      break;
    case ExperimentKind::capacity_compare:
      require(!capacity.separation_ranges.empty(), "capacity.separation_ranges",
              "must be non-empty");
      for (double r : capacity.separation_ranges)
        require(r > 0.0, "capacity.separation_ranges", "entries must be > 0");
      break;
    case ExperimentKind::bound_validate:
      require(!bounds.interference_ranges.empty(), "bounds.interference_ranges",
              "must be non-empty");
      for (double r : bounds.interference_ranges)
        require(r >= nbhd.contention_range, "bounds.interference_ranges",
                "entries must be >= neighborhood.contention_range");
      require(bounds.restarts >= 1, "bounds.restarts", "must be >= 1");
      break;
    case ExperimentKind::complexity_measure:
      require(!complexity.sizes.empty(), "complexity.sizes", "must be non-empty");
      for (int n : complexity.sizes) require(n >= 2, "complexity.sizes", "entries must be >= 2");
      break;
    default:
      break;
  }
  require(!bounds.alphas.empty(), "bounds.alphas", "must be non-empty");
  require(bounds.epsilon_target > 0.0, "bounds.epsilon_target", "must be > 0");
  require(bounds.n_nodes >= 2.0, "bounds.n_nodes", "must be >= 2");
}

SamplerParams Scenario::sampler(Layers layers) const {
  SamplerParams p;
  p.chan = chan;
  p.weights = weights;
  p.nbhd = nbhd;
  p.penalty = penalty;
  p.mode = mode;
  p.layers = layers;
  p.candidate_step = candidate_step;
  p.trace_every = trace_every;
  return p;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  Scenario sc;
  Reader r(root, "");
  const json* exp = r.take("experiment");
  if (exp == nullptr) throw ValidationError("experiment: required");
  if (!exp->is_string()) throw ValidationError("experiment: expected a string");
  sc.experiment = parse_experiment(exp->get<std::string>());
  r.integers("seeds", sc.seeds);
  r.section("topology", [&](Reader& s) {
    s.choice("kind", kTopologies, sc.topology.kind);
    s.integer("nodes", sc.topology.nodes);
    s.number("side", sc.topology.side);
    s.number("spacing", sc.topology.spacing);
    s.boolean("random_spacing", sc.topology.random_spacing);
    s.boolean("grid_targets", sc.topology.grid_targets);
    s.choice("demand", kDemands, sc.topology.demand);
    s.number("demand_range", sc.topology.demand_range);
  });
  r.section("channel", [&](Reader& s) {
    s.number("alpha", sc.chan.alpha);
    s.number("noise_power", sc.chan.noise_power);
    s.number("tx_power", sc.chan.tx_power);
    s.number("sinr_threshold", sc.chan.sinr_threshold);
  });
  r.section("weights", [&](Reader& s) {
    s.number("beta", sc.weights.beta);
    s.number("zeta", sc.weights.zeta);
    s.number("xi", sc.weights.xi);
    s.number("pos_variance", sc.weights.pos_variance);
    s.number("epsilon0", sc.weights.epsilon0);
    s.number("l_th", sc.weights.l_th);
    s.number("theta", sc.weights.theta);
  });
  r.section("neighborhood", [&](Reader& s) {
    s.number("contention_range", sc.nbhd.contention_range);
    s.number("interference_range", sc.nbhd.interference_range);
  });
  r.section("schedule", [&](Reader& s) {
    s.number("t0_temperature", sc.schedule.t0_temperature);
    s.integer("max_sweeps", sc.schedule.max_sweeps);
    s.optional_number("fixed_temperature", sc.schedule.fixed_temperature);
    s.number("stop_tolerance", sc.schedule.stop_tolerance);
    s.integer("patience", sc.schedule.patience);
    s.integer("quench_sweeps", sc.schedule.quench_sweeps);
  });
  r.section("sampler", [&](Reader& s) {
    s.choice("update", kUpdates, sc.mode.kind);
    s.choice("order", kOrders, sc.mode.order);
    s.choice("penalty", kPenalties, sc.penalty);
    s.number("candidate_step", sc.candidate_step);
    s.integer("trace_every", sc.trace_every);
  });
  r.section("recover", [&](Reader& s) {
    s.integers("failed", sc.recover.failed);
    s.numbers("xi", sc.recover.xi);
  });
  r.section("capacity",
            [&](Reader& s) { s.numbers("separation_ranges", sc.capacity.separation_ranges); });
  r.section("bounds", [&](Reader& s) {
    s.numbers("alphas", sc.bounds.alphas);
    s.numbers("interference_ranges", sc.bounds.interference_ranges);
    s.number("n_nodes", sc.bounds.n_nodes);
    s.number("epsilon0", sc.bounds.epsilon0);
    s.number("epsilon_target", sc.bounds.epsilon_target);
    s.integer("restarts", sc.bounds.restarts);
  });
  r.section("complexity", [&](Reader& s) { s.integers("sizes", sc.complexity.sizes); });
  r.section("oracle", [&](Reader& s) {
    s.boolean("enabled", sc.oracle);
    s.integer("cap", sc.oracle_cap);
  });
  r.finish();
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_json(const Scenario& sc) {
  json j;
  j["experiment"] = to_string(sc.experiment);
  j["seeds"] = sc.seeds;
  j["topology"] = {{"kind", name_of(kTopologies, sc.topology.kind)},
                   {"nodes", sc.topology.nodes},
                   {"side", sc.topology.side},
                   {"spacing", sc.topology.spacing},
                   {"random_spacing", sc.topology.random_spacing},
                   {"grid_targets", sc.topology.grid_targets},
                   {"demand", name_of(kDemands, sc.topology.demand)},
                   {"demand_range", sc.topology.demand_range}};
  j["channel"] = {{"alpha", sc.chan.alpha},
                  {"noise_power", sc.chan.noise_power},
                  {"tx_power", sc.chan.tx_power},
                  {"sinr_threshold", sc.chan.sinr_threshold}};
  j["weights"] = {{"beta", sc.weights.beta},         {"zeta", sc.weights.zeta},
                  {"xi", sc.weights.xi},             {"pos_variance", sc.weights.pos_variance},
                  {"epsilon0", sc.weights.epsilon0}, {"l_th", sc.weights.l_th},
                  {"theta", sc.weights.theta}};
  j["neighborhood"] = {{"contention_range", sc.nbhd.contention_range},
                       {"interference_range", sc.nbhd.interference_range}};
  j["schedule"] = {{"t0_temperature", sc.schedule.t0_temperature},
                   {"max_sweeps", sc.schedule.max_sweeps},
                   {"fixed_temperature", sc.schedule.fixed_temperature
                                             ? json(*sc.schedule.fixed_temperature)
                                             : json(nullptr)},
                   {"stop_tolerance", sc.schedule.stop_tolerance},
                   {"patience", sc.schedule.patience},
                   {"quench_sweeps", sc.schedule.quench_sweeps}};
  j["sampler"] = {{"update", name_of(kUpdates, sc.mode.kind)},
                  {"order", name_of(kOrders, sc.mode.order)},
                  {"penalty", name_of(kPenalties, sc.penalty)},
                  {"candidate_step", sc.candidate_step},
                  {"trace_every", sc.trace_every}};
  j["recover"] = {{"failed", sc.recover.failed}, {"xi", sc.recover.xi}};
  j["capacity"] = {{"separation_ranges", sc.capacity.separation_ranges}};
  j["bounds"] = {{"alphas", sc.bounds.alphas},
                 {"interference_ranges", sc.bounds.interference_ranges},
                 {"n_nodes", sc.bounds.n_nodes},
                 {"epsilon0", sc.bounds.epsilon0},
                 {"epsilon_target", sc.bounds.epsilon_target},
                 {"restarts", sc.bounds.restarts}};
  j["complexity"] = {{"sizes", sc.complexity.sizes}};
  j["oracle"] = {{"enabled", sc.oracle}, {"cap", sc.oracle_cap}};
  return j.dump(2);
}

NetworkConfig build_topology(const Scenario& sc, std::uint64_t seed) {
  const auto& t = sc.topology;
  const double l_th = sc.weights.l_th;
  Rng rng(seed);
  std::vector<NodeState> nodes;
  switch (t.kind) {
    case TopologyKind::random_uniform: {
      const double side = t.side > 0.0 ? t.side : std::sqrt(static_cast<double>(t.nodes)) * l_th;
      nodes = random_nodes(t.nodes, side, rng);
      if (t.grid_targets) {
        const auto targets = assign_grid_targets(nodes, l_th);
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].desired_position = targets[i];
      }
      break;
    }
    case TopologyKind::regular_grid: {
      const auto [rows, cols] = near_square_factors(t.nodes);
      nodes = grid_nodes(rows, cols, t.spacing > 0.0 ? t.spacing : l_th);
      break;
    }
    case TopologyKind::line: {
      const double spacing = t.spacing > 0.0 ? t.spacing : l_th;
      if (!t.random_spacing) {
        nodes = line_nodes(t.nodes, spacing);
        break;
      }
      std::uniform_real_distribution<double> gap(0.5 * spacing, 1.5 * spacing);
      double x = 0.0;
      for (int i = 0; i < t.nodes; ++i) {
        nodes.push_back({i, {x, 0.0}, {x, 0.0}, false});
        x += gap(rng);
      }
      break;
    }
  }
  std::vector<Dipole> demand;
  switch (t.demand) {
    case DemandKind::yao:
      demand = yao_dipoles(NetworkConfig(nodes, {}), sc.weights.theta);
      break;
    case DemandKind::target_yao: {
      auto at_target = nodes;
      for (auto& n : at_target) n.position = n.desired_position;
      demand = yao_dipoles(NetworkConfig(at_target, {}), sc.weights.theta);
      break;
    }
    case DemandKind::range:
      demand = dipoles_within(nodes, t.demand_range);
      break;
  }
  return NetworkConfig(std::move(nodes), std::move(demand));
}

std::size_t one_hop_capacity(const NetworkConfig& config, const ChannelParams& chan) {
  std::size_t n = 0;
  for (const auto& d : config.dipoles()) {
    if (!d.active() || config.node(d.tx).failed || config.node(d.rx).failed) continue;
    if (sinr(config, chan, d.tx, d.rx) >= chan.sinr_threshold) ++n;
  }
  return n;
}

double measure_complexity(const NetworkConfig& config, const NeighborhoodParams& nbhd) {
  std::size_t active = 0;
  std::size_t total = 0;
  for (std::size_t d = 0; d < config.dipole_count(); ++d) {
    const auto& dp = config.dipole(d);
    if (!dp.active() || config.node(dp.tx).failed || config.node(dp.rx).failed) continue;
    ++active;
    for (std::size_t e : interference_neighborhood(d, config, nbhd))
      if (config.dipole(e).active()) ++total;
  }
  if (active == 0) throw UndefinedMetricError("complexity undefined: no active dipoles");
  return static_cast<double>(total) / static_cast<double>(active);
}

ProtocolResult protocol_model_baseline(const NetworkConfig& config, double separation,
                                       const ChannelParams& chan, std::uint64_t seed) {
  if (!(separation > 0.0)) throw ValidationError("separation range must be > 0");
  std::vector<std::size_t> order(config.dipole_count());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  ProtocolResult out;
  out.sigma.assign(config.dipole_count(), -1);
  std::vector<char> busy(config.node_count(), 0);
  std::vector<std::size_t> active;
  for (std::size_t d : order) {
    const auto& dp = config.dipole(d);
    if (config.node(dp.tx).failed || config.node(dp.rx).failed) continue;
    if (busy[static_cast<std::size_t>(dp.tx)] || busy[static_cast<std::size_t>(dp.rx)]) continue;
    const Point tx = config.node(dp.tx).position;
    const Point rx = config.node(dp.rx).position;
    const bool separated = std::all_of(active.begin(), active.end(), [&](std::size_t e) {
      const auto& ep = config.dipole(e);
      return distance(tx, config.node(ep.rx).position) >= separation &&
             distance(config.node(ep.tx).position, rx) >= separation;
    });
    if (!separated) continue;
    out.sigma[d] = 1;
    busy[static_cast<std::size_t>(dp.tx)] = busy[static_cast<std::size_t>(dp.rx)] = 1;
    active.push_back(d);
  }
  out.activated = active.size();
  out.capacity = one_hop_capacity(config.with_activities(out.sigma), chan);
  return out;
}

bool MetricsRecord::operator==(const MetricsRecord& o) const {
  return seed == o.seed && experiment == o.experiment && variant == o.variant &&
         nodes == o.nodes && dipoles == o.dipoles && active == o.active &&
         one_hop_capacity == o.one_hop_capacity && measured_complexity == o.measured_complexity &&
         measured_error == o.measured_error && error_method == o.error_method &&
         one_connected == o.one_connected && within_band == o.within_band &&
         sweeps == o.sweeps && energy == o.energy && extra == o.extra;
}

std::string metrics_json(const MetricsRecord& m) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json j{{"seed", m.seed},
         {"experiment", m.experiment},
         {"variant", m.variant},
         {"nodes", m.nodes},
         {"dipoles", m.dipoles},
         {"active", m.active},
         {"one_hop_capacity", m.one_hop_capacity},
         {"measured_complexity", opt(m.measured_complexity)},
         {"measured_error", opt(m.measured_error)},
         {"error_method", m.error_method.empty() ? json(nullptr) : json(m.error_method)},
         {"one_connected", opt(m.one_connected)},
         {"within_band", opt(m.within_band)},
         {"sweeps", m.sweeps},
         {"energy", m.energy},
         {"wall_seconds", m.wall_seconds}};
  for (const auto& [k, v] : m.extra) j[k] = v;
  return j.dump();
}

std::vector<Aggregate> aggregate(const std::vector<MetricsRecord>& records) {
  std::vector<std::string> variants;
  std::map<std::string, std::vector<std::pair<std::string, double>>> values;
  for (const auto& m : records) {
    if (std::find(variants.begin(), variants.end(), m.variant) == variants.end())
      variants.push_back(m.variant);
    auto& v = values[m.variant];
    v.emplace_back("active", static_cast<double>(m.active));
    v.emplace_back("one_hop_capacity", static_cast<double>(m.one_hop_capacity));
    if (m.measured_complexity) v.emplace_back("measured_complexity", *m.measured_complexity);
    if (m.measured_error) v.emplace_back("measured_error", *m.measured_error);
    if (m.one_connected) v.emplace_back("one_connected", *m.one_connected ? 1.0 : 0.0);
    if (m.within_band) v.emplace_back("within_band", *m.within_band ? 1.0 : 0.0);
    v.emplace_back("sweeps", static_cast<double>(m.sweeps));
    v.emplace_back("energy", m.energy);
    v.emplace_back("wall_seconds", m.wall_seconds);
    for (const auto& [k, x] : m.extra) v.emplace_back(k, x);
  }
  std::vector<Aggregate> out;
  for (const auto& variant : variants) {
    std::vector<std::string> metrics;
    for (const auto& [name, x] : values[variant])
      if (std::find(metrics.begin(), metrics.end(), name) == metrics.end()) metrics.push_back(name);
    for (const auto& metric : metrics) {
      Aggregate a{variant, metric};
      a.min = std::numeric_limits<double>::infinity();
      a.max = -a.min;
      double sum = 0.0;
      for (const auto& [name, x] : values[variant]) {
        if (name != metric) continue;
        ++a.count;
        sum += x;
        a.min = std::min(a.min, x);
        a.max = std::max(a.max, x);
      }
      a.mean = sum / static_cast<double>(a.count);
      out.push_back(a);
    }
  }
  return out;
}

BoundValidation bound_validation_experiment(const Scenario& sc) {
  BoundValidation out;
  const auto& ranges = sc.bounds.interference_ranges;
  std::vector<std::vector<double>> errors(ranges.size());
  std::vector<std::string> methods(ranges.size());
  std::vector<double> spreads;

  for (std::uint64_t seed : sc.seeds) {
    const auto config = build_topology(sc, seed);
    const bool enumerate = sc.oracle || config.dipole_count() <= sc.oracle_cap;
    if (enumerate) {
      for (std::size_t k = 0; k < ranges.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const NeighborhoodParams nbhd{sc.nbhd.contention_range, ranges[k]};
        const double err =
            exact_error(config, sc.chan, sc.weights, nbhd, sc.penalty, sc.oracle_cap);
        GibbsSpec spec;
        spec.nbhd = nbhd;
        spec.penalty = sc.penalty;
        spec.cap = sc.oracle_cap;
        const auto map = map_config(config, sc.chan, sc.weights, spec);
        SeedRun r;
        r.final_config = config.with_activities(map.sigma);
        r.metrics = base_record(sc, seed, "r_f=" + num(ranges[k]), r.final_config);
        r.metrics.energy = map.energy;
        r.metrics.measured_error = err;
        r.metrics.error_method = "enumeration";
        r.metrics.measured_complexity = complexity_or_none(r.final_config, nbhd);
        r.metrics.wall_seconds = seconds_since(t0);
        errors[k].push_back(err);
        methods[k] = "enumeration";
        out.runs.push_back(std::move(r));
      }
      spreads.push_back(0.0);
      continue;
    }

    const DipoleSystem global_sys(config, sc.chan, 1e300);
    auto global_energy = [&](const NetworkConfig& c) {
      return logical_energy_direct(global_sys, c.activities(), sc.weights.beta, sc.penalty);
    };
    // Best of `restarts` anneals, chosen by the model's own energy.
    auto best_of = [&](const NeighborhoodParams& nbhd, std::uint64_t base,
                       std::vector<double>* restart_energies) {
      auto params = sc.sampler(Layers::logical);
      params.nbhd = nbhd;
      RunResult best;
      double best_own = std::numeric_limits<double>::infinity();
      for (int k = 0; k < sc.bounds.restarts; ++k) {
        auto r = run(config, params, sc.schedule, base + 7919ULL * static_cast<std::uint64_t>(k));
        const DipoleSystem own(r.final_config, sc.chan, nbhd.interference_range);
        const double e = logical_energy_local(own, r.final_config.activities(), sc.weights.beta,
                                              sc.penalty);
        if (restart_energies) restart_energies->push_back(global_energy(r.final_config));
        if (e < best_own) {
          best_own = e;
          best = std::move(r);
        }
      }
      return best;
    };

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> restart_energies;
    const auto gnbhd = global_range(config, sc.nbhd);
    auto global_run = best_of(gnbhd, seed * 1000, &restart_energies);
    double h_star = global_energy(global_run.final_config);
    const double global_seconds = seconds_since(t0);

    std::vector<RunResult> local_runs;
    std::vector<double> h(ranges.size());
    std::vector<double> secs(ranges.size());
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      const auto tk = std::chrono::steady_clock::now();
      local_runs.push_back(best_of({sc.nbhd.contention_range, ranges[k]}, seed * 1000 + k + 1,
                                   nullptr));
      h[k] = global_energy(local_runs.back().final_config);
      h_star = std::min(h_star, h[k]);
      secs[k] = seconds_since(tk);
    }
    if (h_star == 0.0) throw UndefinedMetricError("approximation error undefined: H* = 0");
    const double lowest = *std::min_element(restart_energies.begin(), restart_energies.end());
    std::vector<double> gaps;
    for (double e : restart_energies) gaps.push_back((e - lowest) / std::abs(h_star));
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                     gaps.end());
    spreads.push_back(gaps[gaps.size() / 2]);

    SeedRun g;
    g.final_config = global_run.final_config;
    g.trajectory = std::move(global_run.trajectory);
    g.metrics = base_record(sc, seed, "global", g.final_config);
    g.metrics.sweeps = global_run.sweeps;
    g.metrics.energy = global_energy(g.final_config);
    g.metrics.measured_error = (g.metrics.energy - h_star) / std::abs(h_star);
    g.metrics.error_method = "annealed";
    g.metrics.measured_complexity = complexity_or_none(g.final_config, gnbhd);
    g.metrics.wall_seconds = global_seconds;
    out.runs.push_back(std::move(g));
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      SeedRun r;
      r.final_config = local_runs[k].final_config;
      r.trajectory = std::move(local_runs[k].trajectory);
      r.metrics = base_record(sc, seed, "r_f=" + num(ranges[k]), r.final_config);
      r.metrics.sweeps = local_runs[k].sweeps;
      r.metrics.energy = h[k];
      r.metrics.measured_error = (h[k] - h_star) / std::abs(h_star);
      r.metrics.error_method = "annealed";
      r.metrics.measured_complexity =
          complexity_or_none(r.final_config, {sc.nbhd.contention_range, ranges[k]});
      r.metrics.wall_seconds = secs[k];
      errors[k].push_back(*r.metrics.measured_error);
      methods[k] = "annealed";
      out.runs.push_back(std::move(r));
    }
  }

  out.resolution = mean_of(spreads);
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    BoundValidationRow row;
    row.interference_range = ranges[k];
    row.measured_error = mean_of(errors[k]);
    row.method = methods[k];
    BoundInputs in;
    in.chan = sc.chan;
    in.nbhd = {sc.nbhd.contention_range, ranges[k]};
    in.n_nodes = sc.topology.nodes;
    in.l_th = sc.weights.l_th;
    in.epsilon0 = sc.bounds.epsilon0;
    row.complexity = complexity(in.nbhd);
    try {
      in.validate();
      row.epsilon_delta = epsilon_delta(in).epsilon_delta;
      row.feasible = true;
      row.dominated = row.measured_error <= row.epsilon_delta;
    } catch (const InfeasibleError&) {
      row.epsilon_delta = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
  }
  return out;
}

CapacityComparison capacity_compare_experiment(const Scenario& sc) {
  CapacityComparison out;
  out.separation_ranges = sc.capacity.separation_ranges;
  std::vector<double> local, global;
  std::vector<std::vector<double>> protocol(out.separation_ranges.size());
  for (std::uint64_t seed : sc.seeds) {
    const auto config = build_topology(sc, seed);
    auto l = solve_logical(sc, config, sc.nbhd, false, seed, "local");
    auto g = solve_logical(sc, config, global_range(config, sc.nbhd), true, seed, "global");
    local.push_back(static_cast<double>(l.metrics.one_hop_capacity));
    global.push_back(static_cast<double>(g.metrics.one_hop_capacity));
    out.runs.push_back(std::move(l));
    out.runs.push_back(std::move(g));
    for (std::size_t k = 0; k < out.separation_ranges.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto p = protocol_model_baseline(config, out.separation_ranges[k], sc.chan,
                                             seed * 31 + k);
      SeedRun r;
      r.final_config = config.with_activities(p.sigma);
      r.metrics = base_record(sc, seed, "protocol r_s=" + num(out.separation_ranges[k]),
                              r.final_config);
      r.metrics.extra["separation_range"] = out.separation_ranges[k];
      r.metrics.wall_seconds = seconds_since(t0);
      protocol[k].push_back(static_cast<double>(p.capacity));
      out.runs.push_back(std::move(r));
    }
  }
  out.local_mean = mean_of(local);
  out.global_mean = mean_of(global);
  for (std::size_t k = 0; k < protocol.size(); ++k) {
    out.protocol_means.push_back(mean_of(protocol[k]));
    if (k == 0 || out.protocol_means[k] > out.protocol_best) {
      out.protocol_best = out.protocol_means[k];
      out.best_separation = out.separation_ranges[k];
    }
  }
  out.protocol_vs_local_gap = out.local_mean > 0 ? 1.0 - out.protocol_best / out.local_mean : 0.0;
  out.local_vs_global_gap = out.global_mean > 0 ? 1.0 - out.local_mean / out.global_mean : 0.0;
  return out;
}

ComplexityScaling complexity_experiment(const Scenario& sc) {
  ComplexityScaling out;
  out.sizes = sc.complexity.sizes;
  for (int n : out.sizes) {
    Scenario sized = sc;
    sized.topology.nodes = n;
    std::vector<double> local, global;
    for (std::uint64_t seed : sc.seeds) {
      const auto config = build_topology(sized, seed);
      const std::string suffix = " N=" + std::to_string(n);
      auto l = solve_logical(sized, config, sc.nbhd, false, seed, "local" + suffix);
      auto g = solve_logical(sized, config, global_range(config, sc.nbhd), true, seed,
                             "global" + suffix);
      local.push_back(l.metrics.measured_complexity.value_or(0.0));
      global.push_back(g.metrics.measured_complexity.value_or(0.0));
      out.runs.push_back(std::move(l));
      out.runs.push_back(std::move(g));
    }
    out.local_mean.push_back(mean_of(local));
    out.global_mean.push_back(mean_of(global));
  }
  std::vector<double> x(out.sizes.begin(), out.sizes.end());
  out.global_linear_r2 = linear_fit(x, out.global_mean).second;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (out.local_mean[k] <= 0.0) continue;
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(out.local_mean[k]));
  }
  out.local_exponent = linear_fit(lx, ly).first;
  return out;
}

std::vector<int> changed_nodes(const NetworkConfig& result, const NetworkConfig& reference,
                               double position_tolerance) {
  std::vector<char> changed(result.node_count(), 0);
  for (std::size_t i = 0; i < result.node_count(); ++i) {
    const auto& a = result.nodes()[i];
    const auto& b = reference.nodes()[i];
    if (a.failed != b.failed || distance(a.position, b.position) > position_tolerance)
      changed[i] = 1;
  }
  for (std::size_t d = 0; d < result.dipole_count(); ++d) {
    const auto& dp = result.dipole(d);
    if (dp.activity != reference.dipole(d).activity)
      changed[static_cast<std::size_t>(dp.tx)] = changed[static_cast<std::size_t>(dp.rx)] = 1;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < changed.size(); ++i)
    if (changed[i]) out.push_back(static_cast<int>(i));
  return out;
}

bool subset_connected(const NetworkConfig& reference, const std::vector<int>& subset,
                      double theta) {
  if (subset.size() <= 1) return true;
  const std::set<int> members(subset.begin(), subset.end());
  std::vector<std::vector<int>> adj(reference.node_count());
  for (int i : subset)
    for (int j : yao_neighbors(i, reference, theta))
      if (members.count(j)) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }
  std::set<int> seen{subset.front()};
  std::queue<int> q;
  q.push(subset.front());
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    for (int b : adj[static_cast<std::size_t>(a)])
      if (seen.insert(b).second) q.push(b);
  }
  return seen.size() == members.size();
}

RecoverExperiment recover_experiment(const Scenario& sc) {
  RecoverExperiment out;
  auto xis = sc.recover.xi;
  std::sort(xis.begin(), xis.end());
  for (std::uint64_t seed : sc.seeds) {
    const auto start = build_topology(sc, seed);
    auto ref_run = anneal_both(sc, start, sc.mode.kind, seed, "reference");
    const NetworkConfig reference = ref_run.final_config;
    out.runs.push_back(std::move(ref_run));
    const auto failed = sc.recover.failed.empty() ? default_failed(reference) : sc.recover.failed;
    if (out.failed.empty()) out.failed = failed;
    const auto current = inject_failures(reference, failed);
    for (double xi : xis) {
      const auto t0 = std::chrono::steady_clock::now();
      auto r = recover(current, reference, xi, sc.sampler(Layers::both), sc.schedule, seed + 100);
      RecoverRow row;
      row.seed = seed;
      row.xi = xi;
      auto changed = changed_nodes(r.final_config, reference, 0.01 * sc.weights.l_th);
      row.changed = changed.size();
      row.contains_failed = std::all_of(failed.begin(), failed.end(), [&](int f) {
        return std::binary_search(changed.begin(), changed.end(), f);
      });
      row.connected = subset_connected(reference, changed, sc.weights.theta);
      for (int i : changed) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int f : failed)
          nearest = std::min(nearest, distance(reference.node(i).position,
                                               reference.node(f).position));
        row.radius = std::max(row.radius, nearest);
      }
      out.rows.push_back(row);

      SeedRun s;
      s.final_config = std::move(r.final_config);
      s.trajectory = std::move(r.trajectory);
      s.metrics = base_record(sc, seed, "xi=" + num(xi), s.final_config);
      s.metrics.sweeps = r.sweeps;
      auto w = sc.weights;
      w.xi = xi;
      s.metrics.energy =
          h_total(s.final_config, sc.chan, w, sc.nbhd, sc.penalty, &reference).total;
      s.metrics.one_connected = is_one_connected(s.final_config, sc.weights.theta);
      s.metrics.extra["xi"] = xi;
      s.metrics.extra["changed_nodes"] = static_cast<double>(row.changed);
      s.metrics.extra["changed_connected"] = row.connected ? 1.0 : 0.0;
      s.metrics.extra["contains_failed"] = row.contains_failed ? 1.0 : 0.0;
      s.metrics.extra["radius"] = row.radius;
      s.metrics.wall_seconds = seconds_since(t0);
      out.runs.push_back(std::move(s));
    }
  }
  return out;
}

ScenarioResult evaluate_bounds(const Scenario& sc) {
  ScenarioResult out;
  out.scenario = sc;
  BoundInputs base;
  base.chan = sc.chan;
  base.nbhd = sc.nbhd;
  base.n_nodes = sc.bounds.n_nodes;
  base.l_th = sc.weights.l_th;
  base.epsilon0 = sc.bounds.epsilon0;
  Table t{"bounds",
          {"alpha", "n_nodes", "r_c", "r_f", "complexity", "feasible", "epsilon_delta", "i3",
           "i_r", "i_d", "k_u", "display_epsilon", "display_discrepancy"},
          {}};
  for (const auto& row : bound_sweep(base, sc.bounds.alphas, sc.bounds.interference_ranges)) {
    const auto& r = row.report;
    t.rows.push_back({num(row.alpha), num(row.n_nodes), num(row.r_c), num(row.r_f),
                      num(r.complexity), flag(row.feasible),
                      row.feasible ? num(r.epsilon_delta) : "", num(r.i3), num(r.i_r),
                      row.feasible ? num(r.i_d) : "", num(r.k_u),
                      row.feasible ? num(r.display_epsilon) : "",
                      row.feasible ? num(r.display_discrepancy) : ""});
    if (!row.feasible) continue;
    const std::string key = "best_epsilon alpha=" + num(row.alpha);
    auto it = out.summary.find(key);
    if (it == out.summary.end() || r.epsilon_delta < it->second)
      out.summary[key] = r.epsilon_delta;
  }
  out.tables.push_back(std::move(t));

  Table orders{"rc_order", {"alpha", "label", "regime", "exponent", "r_c", "epsilon"}, {}};
  for (double alpha : sc.bounds.alphas) {
    auto in = base;
    in.chan.alpha = alpha;
    try {
      const auto o = corollary1_rc_order(in, sc.bounds.epsilon_target);
      orders.rows.push_back(
          {num(alpha), o.label, o.regime, num(o.exponent), num(o.r_c), num(o.epsilon)});
    } catch (const InfeasibleError&) {
      orders.rows.push_back({num(alpha), "infeasible", "", "", "", ""});
    }
  }
  out.tables.push_back(std::move(orders));
  return out;
}

ScenarioResult run_scenario(const Scenario& sc) {
  sc.validate();
  ScenarioResult out;
  out.scenario = sc;
  switch (sc.experiment) {
    case ExperimentKind::form_topology: {
      double connected = 0.0, band = 0.0;
      for (std::uint64_t seed : sc.seeds) {
        auto r = anneal_both(sc, build_topology(sc, seed), sc.mode.kind, seed, "");
        connected += *r.metrics.one_connected ? 1.0 : 0.0;
        band += *r.metrics.within_band ? 1.0 : 0.0;
        out.runs.push_back(std::move(r));
      }
      out.summary["one_connected_fraction"] = connected / static_cast<double>(sc.seeds.size());
      out.summary["within_band_fraction"] = band / static_cast<double>(sc.seeds.size());
      break;
    }
    case ExperimentKind::schedule_links: {
      for (std::uint64_t seed : sc.seeds)
        out.runs.push_back(solve_logical(sc, build_topology(sc, seed), sc.nbhd, false, seed, ""));
      break;
    }
    case ExperimentKind::joint: {
      std::vector<double> seq, joint, seq_cap, joint_cap;
      for (std::uint64_t seed : sc.seeds) {
        const auto config = build_topology(sc, seed);
        auto s = anneal_both(sc, config, UpdateKind::sequential, seed, "sequential");
        auto j = anneal_both(sc, config, UpdateKind::joint, seed, "joint");
        seq.push_back(static_cast<double>(s.metrics.active));
        joint.push_back(static_cast<double>(j.metrics.active));
        seq_cap.push_back(static_cast<double>(s.metrics.one_hop_capacity));
        joint_cap.push_back(static_cast<double>(j.metrics.one_hop_capacity));
        out.runs.push_back(std::move(s));
        out.runs.push_back(std::move(j));
      }
      out.summary["sequential_active_mean"] = mean_of(seq);
      out.summary["joint_active_mean"] = mean_of(joint);
      out.summary["active_gain"] = mean_of(seq) > 0 ? mean_of(joint) / mean_of(seq) - 1.0 : 0.0;
      out.summary["sequential_capacity_mean"] = mean_of(seq_cap);
      out.summary["joint_capacity_mean"] = mean_of(joint_cap);
      out.summary["capacity_gain"] =
          mean_of(seq_cap) > 0 ? mean_of(joint_cap) / mean_of(seq_cap) - 1.0 : 0.0;
      break;
    }
    case ExperimentKind::recover: {
      auto r = recover_experiment(sc);
      Table t{"recover", {"seed", "xi", "changed", "connected", "contains_failed", "radius"}, {}};
      for (const auto& row : r.rows)
        t.rows.push_back({std::to_string(row.seed), num(row.xi), std::to_string(row.changed),
                          flag(row.connected), flag(row.contains_failed), num(row.radius)});
      out.tables.push_back(std::move(t));
      std::string failed;
      for (int f : r.failed) failed += (failed.empty() ? "" : " ") + std::to_string(f);
      out.tables.push_back({"failed_nodes", {"nodes"}, {{failed}}});
      out.runs = std::move(r.runs);
      break;
    }
    case ExperimentKind::capacity_compare: {
      auto c = capacity_compare_experiment(sc);
      Table t{"capacity", {"model", "separation_range", "mean_capacity"}, {}};
      t.rows.push_back({"local", "", num(c.local_mean)});
      t.rows.push_back({"global", "", num(c.global_mean)});
      for (std::size_t k = 0; k < c.separation_ranges.size(); ++k)
        t.rows.push_back({"protocol", num(c.separation_ranges[k]), num(c.protocol_means[k])});
      out.tables.push_back(std::move(t));
      out.summary["local_mean"] = c.local_mean;
      out.summary["global_mean"] = c.global_mean;
      out.summary["protocol_best"] = c.protocol_best;
      out.summary["best_separation"] = c.best_separation;
      out.summary["protocol_vs_local_gap"] = c.protocol_vs_local_gap;
      out.summary["local_vs_global_gap"] = c.local_vs_global_gap;
      out.runs = std::move(c.runs);
      break;
    }
    case ExperimentKind::bound_validate: {
      auto b = bound_validation_experiment(sc);
      Table t{"bound_validation",
              {"interference_range", "complexity", "measured_error", "epsilon_delta", "feasible",
               "dominated", "method"},
              {}};
      for (const auto& row : b.rows)
        t.rows.push_back({num(row.interference_range), num(row.complexity),
                          num(row.measured_error), num(row.epsilon_delta), flag(row.feasible),
                          flag(row.dominated), row.method});
      out.tables.push_back(std::move(t));
      out.summary["resolution"] = b.resolution;
      out.runs = std::move(b.runs);
      break;
    }
    case ExperimentKind::complexity_measure: {
      auto c = complexity_experiment(sc);
      Table t{"complexity", {"nodes", "local_mean", "global_mean"}, {}};
      for (std::size_t k = 0; k < c.sizes.size(); ++k)
        t.rows.push_back({std::to_string(c.sizes[k]), num(c.local_mean[k]), num(c.global_mean[k])});
      out.tables.push_back(std::move(t));
      out.summary["global_linear_r2"] = c.global_linear_r2;
      out.summary["local_exponent"] = c.local_exponent;
      out.runs = std::move(c.runs);
      break;
    }
    case ExperimentKind::stdma: {
      Table slots{"slots", {"seed", "tx", "rx", "slot"}, {}};
      Table audit{"sinr_audit", {"seed", "slot", "tx", "rx", "sinr", "ok"}, {}};
      double best = std::numeric_limits<double>::infinity();
      for (std::uint64_t seed : sc.seeds) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto config = build_topology(sc, seed);
        auto a = schedule(config, sc.chan, sc.weights, sc.nbhd, sc.schedule, seed);
        SeedRun r;
        r.final_config = config;
        r.metrics = base_record(sc, seed, "", config);
        r.metrics.sweeps = a.sweeps;
        const DipoleSystem sys(config, sc.chan, sc.nbhd.interference_range);
        r.metrics.energy = slotted_energy(sys, a.slots, sc.weights.beta, sc.penalty);
        const auto rows = sinr_audit(config, sc.chan, a);
        double min_sinr = std::numeric_limits<double>::infinity();
        bool all_ok = true;
        for (const auto& row : rows) {
          audit.rows.push_back({std::to_string(seed), std::to_string(row.slot),
                                std::to_string(row.tx), std::to_string(row.rx), num(row.sinr),
                                flag(row.ok)});
          min_sinr = std::min(min_sinr, row.sinr);
          all_ok = all_ok && row.ok;
        }
        slots = slot_rows(seed, config, a, std::move(slots));
        r.metrics.extra["s_max"] = a.s_max;
        r.metrics.extra["scheduled"] = static_cast<double>(rows.size());
        r.metrics.extra["min_sinr"] = min_sinr;
        r.metrics.extra["all_sinr_ok"] = all_ok ? 1.0 : 0.0;
        r.metrics.extra["complete"] = a.complete() ? 1.0 : 0.0;
        r.metrics.wall_seconds = seconds_since(t0);
        best = std::min(best, static_cast<double>(a.s_max));
        r.slots = std::move(a);
        out.runs.push_back(std::move(r));
      }
      out.tables.push_back(std::move(slots));
      out.tables.push_back(std::move(audit));
      out.summary["best_s_max"] = best;
      break;
    }
  }
  std::vector<MetricsRecord> records;
  for (const auto& r : out.runs) records.push_back(r.metrics);
  out.aggregate = aggregate(records);
  return out;
}

void write_outputs(const ScenarioResult& result, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "scenario.json");
    out << scenario_json(result.scenario) << '\n';
  }
  {
    std::ofstream out(dir / "metrics.jsonl");
    for (const auto& r : result.runs) out << metrics_json(r.metrics) << '\n';
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& a : result.aggregate)
      rows.push_back({a.variant, a.metric, std::to_string(a.count), num(a.mean), num(a.min),
                      num(a.max)});
    write_csv(dir / "aggregate.csv", {"variant", "metric", "count", "mean", "min", "max"}, rows);
  }
  if (!result.summary.empty()) {
    json s = json::object();
    for (const auto& [k, v] : result.summary) s[k] = v;
    std::ofstream out(dir / "summary.json");
    out << s.dump(2) << '\n';
  }
  for (const auto& t : result.tables) write_csv(dir / (t.name + ".csv"), t.columns, t.rows);
  if (result.runs.empty()) return;
  fs::create_directories(dir / "snapshots");
  for (const auto& r : result.runs) {
    const auto stem = file_stem(r.metrics);
    std::ofstream out(dir / "snapshots" / (stem + ".json"));
    out << snapshot_json(r).dump() << '\n';
    if (r.trajectory.empty()) continue;
    fs::create_directories(dir / "trajectory");
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : r.trajectory)
      rows.push_back({std::to_string(t.sweep), t.phase, num(t.temperature), num(t.energy.r1),
                      num(t.energy.r2), num(t.energy.r3), num(t.energy.r_residual),
                      num(t.energy.penalty), num(t.energy.physical), num(t.energy.reconfig),
                      num(t.energy.total), std::to_string(t.active)});
    write_csv(dir / "trajectory" / (stem + ".csv"),
              {"sweep", "phase", "temperature", "r1", "r2", "r3", "r_residual", "penalty",
               "physical", "reconfig", "total", "active"},
              rows);
  }
}

}  // namespace selfconf
