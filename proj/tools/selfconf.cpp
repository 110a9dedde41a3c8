// Command-line front end: one verb per experiment.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfconf/error.hpp"
#include "selfconf/harness.hpp"

using namespace selfconf;

namespace {

enum Exit { ok = 0, failure = 1, validation = 2, infeasible = 3, oracle_cap = 4 };

// "3", "1,2,5" or "1-10", in any comma-separated mix.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    try {
      std::size_t used = 0;
      const auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument(item);
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("--seed: cannot read '" + item + "'");
    }
    pos = end + 1;
  }
  if (out.empty()) throw ValidationError("--seed: must be non-empty");
  return out;
}

void print_result(const ScenarioResult& r) {
  for (const auto& [k, v] : r.summary) std::printf("%s = %.6g\n", k.c_str(), v);
  for (const auto& a : r.aggregate) {
    if (a.metric == "wall_seconds" || a.metric == "sweeps") continue;
    std::printf("%-24s %-20s mean %-10.4g min %-10.4g max %-10.4g n %zu\n",
                a.variant.empty() ? "-" : a.variant.c_str(), a.metric.c_str(), a.mean, a.min,
                a.max, a.count);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-configuring wireless network experiments"};
  app.require_subcommand(1);

  struct Options {
    std::string scenario;
    std::string seeds;
    std::string out = "results";
    bool oracle = false;
  } opt;

  const std::map<std::string, std::vector<ExperimentKind>> verbs{
      {"form", {ExperimentKind::form_topology}},
      {"schedule", {ExperimentKind::schedule_links}},
      {"joint", {ExperimentKind::joint}},
      {"recover", {ExperimentKind::recover}},
      {"capacity", {ExperimentKind::capacity_compare, ExperimentKind::complexity_measure}},
      {"bounds", {}},
      {"validate-bound", {ExperimentKind::bound_validate}},
      {"stdma", {ExperimentKind::stdma}},
  };
  const std::map<std::string, std::string> blurbs{
      {"form", "anneal positions and links from a random start"},
      {"schedule", "choose active links for fixed positions"},
      {"joint", "sequential versus joint node-link updates"},
      {"recover", "inject node failures and reconfigure"},
      {"capacity", "one-hop capacity or measured complexity versus model"},
      {"bounds", "evaluate the closed-form error bound"},
      {"validate-bound", "measured approximation error against the bound"},
      {"stdma", "assign every link a time slot"},
  };

  std::vector<CLI::App*> subs;
  for (const auto& [verb, kinds] : verbs) {
    auto* sub = app.add_subcommand(verb, blurbs.at(verb));
    sub->add_option("--scenario", opt.scenario, "scenario JSON file")->required();
    sub->add_option("--seed", opt.seeds, "seed, comma list or range a-b");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_flag("--oracle", opt.oracle, "force exhaustive enumeration");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  std::string verb;
  for (auto* s : subs)
    if (s->parsed()) verb = s->get_name();

  try {
    Scenario sc = load_scenario(opt.scenario);
    const auto& kinds = verbs.at(verb);
    if (!kinds.empty() &&
        std::find(kinds.begin(), kinds.end(), sc.experiment) == kinds.end())
      throw ValidationError("experiment: '" + to_string(sc.experiment) +
                            "' does not belong to verb '" + verb + "'");
    if (!opt.seeds.empty()) sc.seeds = parse_seeds(opt.seeds);
    if (opt.oracle) {
      if (verb == "bounds") throw ValidationError("--oracle: not used by 'bounds'");
      sc.oracle = true;
    }
    sc.validate();
    const auto result = verb == "bounds" ? evaluate_bounds(sc) : run_scenario(sc);
    write_outputs(result, opt.out);
    print_result(result);
    std::printf("wrote %s\n", opt.out.c_str());
    return ok;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return validation;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return infeasible;
  } catch (const OracleCapError& e) {
    std::fprintf(stderr, "oracle cap exceeded: %s\n", e.what());
    return oracle_cap;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return failure;
  }
}
