// Acceptance criteria, one PASS/FAIL line each. Arguments select criteria by
// number; no arguments runs all of them. Run artifacts go to
// acceptance-out/<criterion>/ under the working directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "selfconf/annealer.hpp"
#include "selfconf/bounds.hpp"
#include "selfconf/error.hpp"
#include "selfconf/harness.hpp"
#include "selfconf/oracle.hpp"
#include "selfconf/topology.hpp"

using namespace selfconf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario scenario(const char* name) {
  return load_scenario(std::string(SELFCONF_SCENARIO_DIR) + "/" + name);
}

ScenarioResult run_and_keep(const Scenario& sc, const std::string& tag) {
  auto r = run_scenario(sc);
  write_outputs(r, "acceptance-out/" + tag);
  return r;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int code_of(std::span<const int> s) {
  int c = 0;
  for (int v : s) c = 2 * c + (v == 1 ? 1 : 0);
  return c;
}

Outcome hamiltonian_exactness() {
  Rng rng(2024);
  auto nodes = random_nodes(4, 4.0, rng);
  const NetworkConfig cfg(nodes, dipoles_within(nodes, 100.0));
  const ChannelParams chan{3.0, 0.1, 1.0, 10.0};
  ModelWeights w;
  w.beta = 0.7;
  const NeighborhoodParams full{1.0, network_diameter(cfg) + 1.0};
  double worst = 0.0;
  std::size_t count = 0;
  for_each_sigma(cfg.dipole_count(), [&](std::span<const int> s) {
    const auto c = cfg.with_activities(s);
    const double direct = h_logical_direct(c, chan, w);
    const auto br = h_logical_decomposed(c, chan, w, full);
    const double sum = br.r1 + br.r2 + br.r3 + br.r_residual;
    const double scale = std::max(1.0, std::abs(direct));
    worst = std::max(worst, std::abs(sum - direct) / scale);
    ++count;
  });
  return {count == 4096 && worst <= 1e-9,
          fmt("%zu assignments of 12 dipoles, worst relative gap %.2e", count, worst)};
}

Outcome gibbs_fidelity() {
  std::vector<NodeState> nodes{{0, {0, 0}, {0, 0}}, {1, {1.5, 0}, {1.5, 0}},
                               {2, {0.4, 1.2}, {0.4, 1.2}}};
  const NetworkConfig cfg(nodes, dipoles_within(nodes, 10));
  double worst = 0.0;
  std::string parts;
  for (auto mode : {PenaltyMode::quadratic, PenaltyMode::hard}) {
    for (double t : {1.0, 3.0}) {
      SamplerParams p;
      p.chan = {2.0, 0.1, 1.0, 2.0};
      p.weights.beta = mode == PenaltyMode::hard ? 1.5 : 0.3;
      p.nbhd = {1.0, 1.4};
      p.penalty = mode;
      p.layers = Layers::logical;
      GibbsSpec spec;
      spec.temperature = t;
      spec.nbhd = p.nbhd;
      spec.penalty = mode;
      std::map<int, double> exact;
      for (const auto& st : gibbs_distribution(cfg, p.chan, p.weights, spec))
        exact[code_of(st.sigma)] = st.probability;
      Annealer a(cfg, p, 31);
      std::map<int, double> seen;
      const int sweeps = 100000;
      for (int k = 0; k < sweeps; ++k) {
        a.sweep(t);
        seen[code_of(a.sigma())] += 1.0 / sweeps;
      }
      double tv = 0.0;
      for (const auto& [c, q] : exact) tv += std::abs(q - seen[c]);
      for (const auto& [c, q] : seen)
        if (!exact.count(c)) tv += q;
      tv *= 0.5;
      worst = std::max(worst, tv);
      parts += fmt(" %s/T=%g:%.4f", mode == PenaltyMode::hard ? "hard" : "quadratic", t, tv);
    }
  }
  return {worst <= 0.05, "total variation" + parts};
}

Outcome map_recovery() {
  std::vector<NetworkConfig> fixtures;
  {
    auto nodes = line_nodes(5, 2.0);
    fixtures.emplace_back(nodes, dipoles_within(nodes, 2.0));
  }
  {
    std::vector<NodeState> star{{0, {0, 0}, {0, 0}},  {1, {2, 0}, {2, 0}},
                                {2, {0, 2}, {0, 2}},  {3, {-2, 0}, {-2, 0}},
                                {4, {0, -2}, {0, -2}}};
    fixtures.emplace_back(star, dipoles_within(star, 2.0));
  }
  SamplerParams p;
  p.chan = {4, 0.1, 100, 10};
  p.weights.beta = 100;
  p.nbhd = {2, 4};
  p.layers = Layers::logical;
  AnnealSchedule s;
  s.max_sweeps = 300;
  int hits = 0, runs = 0;
  for (const auto& cfg : fixtures) {
    if (cfg.dipole_count() > 10) return {false, "fixture exceeds 2^10 assignments"};
    GibbsSpec spec;
    spec.nbhd = p.nbhd;
    spec.penalty = PenaltyMode::hard;
    const auto best = map_config(cfg, p.chan, p.weights, spec);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = run(cfg, p, s, seed);
      const DipoleSystem sys(r.final_config, p.chan, p.nbhd.interference_range);
      const double e = logical_energy_local(sys, r.final_config.activities(), p.weights.beta,
                                            PenaltyMode::hard);
      ++runs;
      if (std::abs(e - best.energy) <= 1e-9 * std::max(1.0, std::abs(best.energy))) ++hits;
    }
  }
  return {hits * 10 >= runs * 9, fmt("%d/%d runs at the oracle MAP", hits, runs)};
}

Outcome bound_dominance() {
  const auto sc = scenario("validate_bound.json");
  const auto b = bound_validation_experiment(sc);
  bool dominated = true, monotone = true, first_is_max = true;
  std::string rows;
  for (std::size_t k = 0; k < b.rows.size(); ++k) {
    const auto& r = b.rows[k];
    dominated = dominated && r.feasible && r.dominated;
    if (k > 0) monotone = monotone && r.measured_error <= b.rows[k - 1].measured_error + b.resolution;
    first_is_max = first_is_max && r.measured_error <= b.rows[0].measured_error;
    rows += fmt(" C=%g:%.4f/%.3f", r.complexity, r.measured_error, r.epsilon_delta);
  }
  ScenarioResult keep;
  keep.scenario = sc;
  keep.runs = b.runs;
  write_outputs(keep, "acceptance-out/4");
  return {dominated && monotone,
          fmt("dominated %d, non-increasing within resolution %.4f %d, C=1 largest %d;",
              dominated, b.resolution, monotone, first_is_max) +
              " measured/bound" + rows};
}

Outcome bound_values() {
  std::string detail;
  bool pass = true;
  const std::map<double, double> target{{4.0, 0.10}, {6.0, 0.01}};
  for (const auto& [alpha, limit] : target) {
    BoundInputs in;
    in.chan = {alpha, 0.1, 1.0, 20.0};
    in.n_nodes = 1000;
    in.l_th = 2.0;
    // smallest power meeting the threshold at l_th, plus 1%
    in.chan.tx_power = 1.01 * in.chan.noise_power * in.chan.sinr_threshold * std::pow(2.0, alpha);
    double best = std::numeric_limits<double>::infinity(), best_rf = 0;
    for (double rf = 20; rf <= 100; rf += 10) {
      in.nbhd = {10.0, rf};
      const double e = epsilon_delta(in).epsilon_delta;
      if (e < best) {
        best = e;
        best_rf = rf;
      }
    }
    pass = pass && best < limit;
    detail += fmt("alpha=%g P=%.1f best eps=%.4f at r_f=%g (target < %g); ", alpha,
                  in.chan.tx_power, best, best_rf, limit);
  }
  BoundInputs flat;
  flat.chan = {6.0, 0.1, 100.0, 20.0};
  flat.n_nodes = 1000;
  flat.nbhd = {10.0, 40.0};
  const auto rows = bound_sweep(flat, {6.0}, {20, 60, 100});
  const bool truncated = std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.feasible; });
  detail += fmt("alpha=6 at P=100 infeasible (truncated regime) %d", truncated);
  return {pass, detail};
}

Outcome contention_scaling() {
  const std::map<double, std::string> labels{
      {3.0, "O(N^{(4−α)/(4+α)})"}, {4.0, "O(√ln N)"}, {5.0, "O(1)"}};
  const std::map<double, std::string> regimes{{3.0, "2 ≤ α < 4"}, {4.0, "α = 4"}, {5.0, "α > 4"}};
  bool labels_ok = true;
  for (const auto& [alpha, label] : labels) {
    const auto o = corollary1_rc_order(alpha, 1000, 0.5);
    labels_ok = labels_ok && o.label == label && o.regime == regimes.at(alpha);
  }
  // alpha = 3: log r_c against ln N, slope (4 - alpha) / (4 + alpha)
  std::vector<double> x, y;
  for (double e = 3; e <= 12; e += 1) {
    x.push_back(e * std::log(10.0));
    y.push_back(std::log(corollary1_rc_order(3.0, std::pow(10.0, e), 0.05).r_c));
  }
  const double s3 = slope(x, y);
  // alpha = 4: log r_c against log sqrt(ln N), slope 1
  x.clear();
  y.clear();
  for (double e = 10; e <= 100; e += 10) {
    x.push_back(std::log(std::sqrt(e * std::log(10.0))));
    y.push_back(std::log(corollary1_rc_order(4.0, std::pow(10.0, e), 0.05).r_c));
  }
  const double s4 = slope(x, y);
  // alpha = 5: r_c bounded; compare the growth across the range with 20%
  const double r_lo = corollary1_rc_order(5.0, 1e10, 0.05).r_c;
  const double r_hi = corollary1_rc_order(5.0, 1e100, 0.05).r_c;
  const double growth = r_hi / r_lo;
  const bool ok3 = std::abs(s3 - 1.0 / 7.0) <= 0.2 / 7.0;
  const bool ok4 = std::abs(s4 - 1.0) <= 0.2;
  const bool ok5 = growth <= 1.2 && growth >= 1.0 / 1.2;
  return {labels_ok && ok3 && ok4 && ok5,
          fmt("labels %d; alpha=3 slope %.4f (1/7), alpha=4 slope %.3f (1), alpha=5 r_c "
              "ratio 1e100/1e10 %.3f",
              labels_ok, s3, s4, growth)};
}

Outcome formation() {
  const auto sc = scenario("form.json");
  const auto r = run_and_keep(sc, "7");
  bool ok = true;
  double slowest = 0.0;
  std::string per;
  for (const auto& run : r.runs) {
    const auto& m = run.metrics;
    ok = ok && m.one_connected.value_or(false) && m.within_band.value_or(false);
    slowest = std::max(slowest, m.wall_seconds);
    per += fmt(" %d/%d", int(m.one_connected.value_or(false)), int(m.within_band.value_or(false)));
  }
  return {ok && slowest < 300.0,
          fmt("%zu seeds, N=%d, connected/band per seed:", r.runs.size(), sc.topology.nodes) +
              per + fmt("; slowest seed %.1f s", slowest)};
}

Outcome joint_vs_sequential() {
  const auto r = run_and_keep(scenario("joint.json"), "8");
  const double gain = r.summary.at("active_gain");
  return {gain >= 0.10,
          fmt("active joint %.1f vs sequential %.1f (gain %.0f%%); SINR-valid %.1f vs %.1f",
              r.summary.at("joint_active_mean"), r.summary.at("sequential_active_mean"),
              100 * gain, r.summary.at("joint_capacity_mean"),
              r.summary.at("sequential_capacity_mean"))};
}

Outcome capacity_ordering() {
  const auto r = run_and_keep(scenario("capacity.json"), "9");
  const double local = r.summary.at("local_mean");
  const double global = r.summary.at("global_mean");
  const double protocol = r.summary.at("protocol_best");
  const bool first = protocol < local;
  const bool second = local <= global + 1.0;
  return {first && second,
          fmt("protocol best %.2f (r_s=%g) < local %.2f: %d; local <= global %.2f + 1: %d; "
              "gaps protocol/local %.0f%%, local/global %.0f%%",
              protocol, r.summary.at("best_separation"), local, first, global, second,
              100 * r.summary.at("protocol_vs_local_gap"),
              100 * r.summary.at("local_vs_global_gap"))};
}

Outcome complexity_scaling() {
  const auto sc = scenario("complexity.json");
  const auto c = complexity_experiment(sc);
  ScenarioResult keep;
  keep.scenario = sc;
  keep.runs = c.runs;
  write_outputs(keep, "acceptance-out/10");
  std::string curve;
  for (std::size_t k = 0; k < c.sizes.size(); ++k)
    curve += fmt(" N=%d:%.2f/%.2f", c.sizes[k], c.global_mean[k], c.local_mean[k]);
  return {c.global_linear_r2 > 0.95 && c.local_exponent < 0.5,
          fmt("global linear R^2 %.3f, local exponent %.3f; global/local", c.global_linear_r2,
              c.local_exponent) +
              curve};
}

Outcome stdma_grid() {
  const auto r = run_and_keep(scenario("stdma.json"), "11");
  double best = std::numeric_limits<double>::infinity();
  std::string per;
  bool links = true;
  for (const auto& run : r.runs) {
    const auto& m = run.metrics;
    const bool valid = m.extra.at("complete") == 1.0 && m.extra.at("all_sinr_ok") == 1.0 &&
                       m.dipoles == 80 && m.extra.at("scheduled") == 80.0;
    links = links && m.dipoles == 80;
    if (valid) best = std::min(best, m.extra.at("s_max"));
    per += fmt(" %g%s", m.extra.at("s_max"), valid ? "" : "(invalid)");
  }
  return {links && best <= 36, fmt("80 links; s_max per seed:%s; best %g (limit 36)", per.c_str(), best)};
}

Outcome failure_locality() {
  const auto sc = scenario("recover.json");
  const auto e = recover_experiment(sc);
  ScenarioResult keep;
  keep.scenario = sc;
  keep.runs = e.runs;
  write_outputs(keep, "acceptance-out/12");
  bool ok = true;
  std::string per;
  std::map<std::uint64_t, double> last;
  for (const auto& row : e.rows) {
    ok = ok && row.connected && row.contains_failed;
    auto it = last.find(row.seed);
    if (it != last.end()) ok = ok && row.radius <= it->second + 1e-9;
    last[row.seed] = row.radius;
    per += fmt(" s%llu/xi=%g:%zu,%d,%.1f", static_cast<unsigned long long>(row.seed), row.xi,
               row.changed, int(row.connected), row.radius);
  }
  return {ok, "changed,connected,radius" + per};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hamiltonian exactness", hamiltonian_exactness},
      {"Gibbs fidelity", gibbs_fidelity},
      {"annealed MAP recovery", map_recovery},
      {"bound dominance on the linear topology", bound_dominance},
      {"bound values at N=1000", bound_values},
      {"contention range scaling", contention_scaling},
      {"topology formation", formation},
      {"joint versus sequential", joint_vs_sequential},
      {"capacity ordering", capacity_ordering},
      {"complexity scaling", complexity_scaling},
      {"STDMA on the 25-node grid", stdma_grid},
      {"failure locality", failure_locality},
  };
  const double none = std::numeric_limits<double>::infinity();
  const std::vector<double> time_limit{10, 60, none, 600, 1, none, none, none, none, none, 600, none};
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > time_limit[k]) {
      o.pass = false;
      o.detail += fmt(" (over the %g s limit)", time_limit[k]);
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[k].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
