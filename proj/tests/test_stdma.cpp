#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "selfconf/error.hpp"
#include "selfconf/stdma.hpp"
#include "selfconf/topology.hpp"

using namespace selfconf;

namespace {

ChannelParams channel() { return {4.0, 0.1, 100.0, 20.0}; }

ModelWeights weights() {
  ModelWeights w;
  w.beta = 100.0;
  return w;
}

AnnealSchedule quick() {
  AnnealSchedule s;
  s.max_sweeps = 300;
  return s;
}

void check_valid(const NetworkConfig& cfg, const SlotAssignment& a) {
  REQUIRE(a.slots.size() == cfg.dipole_count());
  CHECK(a.complete());
  const DipoleSystem sys(cfg, channel(), 1e9);
  for (int s = 1; s <= a.s_max; ++s) {
    CHECK(std::count(a.slots.begin(), a.slots.end(), s) > 0);
    CHECK(slot_feasible(sys, a.slots, s));
  }
  for (const auto& row : sinr_audit(cfg, channel(), a)) CHECK(row.ok);
}

}  // namespace

TEST_CASE("slot weight") {
  CHECK(slot_weight(1) == 1.0);
  CHECK(slot_weight(4) == 0.25);
  for (int s = 1; s < 20; ++s) CHECK(slot_weight(s + 1) < slot_weight(s));
  CHECK_THROWS_AS(slot_weight(0), ValidationError);
}

TEST_CASE("slotted coefficients") {
  CHECK(slotted_second(6.0, 1, 2) == 0.0);
  CHECK(slotted_second(6.0, 1, 1) == 6.0);
  CHECK(slotted_second(6.0, 2, 2) == 3.0);
  CHECK(slotted_first(6.0, 3) == 2.0);
  CHECK(slotted_third(6.0, 2, 2, 2) == 3.0);
  CHECK(slotted_third(6.0, 2, 2, 1) == 0.0);
}

TEST_CASE("slot restriction matches the unslotted energy") {
  std::mt19937_64 rng(5);
  auto nodes = random_nodes(6, 6.0, rng);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 4.0));
  const DipoleSystem full(cfg, channel(), 1e9);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> slots(cfg.dipole_count());
    for (auto& s : slots) s = pick(rng);
    double by_slot = 0.0;
    for (int s = 1; s <= 3; ++s) {
      const auto b = logical_breakdown(full, slot_activities(slots, s), 1.0, PenaltyMode::hard);
      by_slot += slot_weight(s) * (b.r1 + b.r2 + b.r3 + b.r_residual);
    }
    CHECK(slotted_expansion(full, slots) == doctest::Approx(by_slot).epsilon(1e-9));
    double quad = 7.0 * static_cast<double>(std::count(slots.begin(), slots.end(), 0));
    double hard = quad;
    for (int s = 1; s <= 3; ++s) {
      const auto sigma = slot_activities(slots, s);
      quad += slot_weight(s) * logical_energy_direct(full, sigma, 7.0, PenaltyMode::quadratic);
      const auto b = logical_breakdown(full, sigma, 7.0, PenaltyMode::hard);
      hard += slot_weight(s) * (b.r1 + b.r2 + b.r3 + b.r_residual) + b.penalty;
    }
    CHECK(slotted_energy(full, slots, 7.0, PenaltyMode::quadratic, false) ==
          doctest::Approx(quad).epsilon(1e-12));
    CHECK(slotted_energy(full, slots, 7.0, PenaltyMode::hard, false) ==
          doctest::Approx(hard).epsilon(1e-12));
  }
}

TEST_CASE("sampler conditional matches slotted energy differences") {
  std::mt19937_64 rng(9);
  auto nodes = grid_nodes(3, 3, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  const DipoleSystem sys(cfg, channel(), 4.5);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> slots(cfg.dipole_count(), 0);
    for (std::size_t e = 0; e < slots.size(); ++e) {
      const int s = pick(rng);
      slots[e] = s;
      if (s > 0 && !half_duplex_ok(sys, slot_activities(slots, s))) slots[e] = 0;
    }
    const std::size_t d = static_cast<std::size_t>(trial) % slots.size();
    const auto opts = slot_option_energies(sys, slots, d, 50.0, 4);
    REQUIRE(opts.size() == 5);
    auto off = slots;
    off[d] = 0;
    const double base = slotted_energy(sys, off, 50.0, PenaltyMode::hard);
    for (int s = 1; s <= 4; ++s) {
      auto on = slots;
      on[d] = s;
      if (!half_duplex_ok(sys, slot_activities(on, s))) {
        CHECK(std::isinf(opts[static_cast<std::size_t>(s)]));
        continue;
      }
      const double diff = slotted_energy(sys, on, 50.0, PenaltyMode::hard) - base;
      CHECK(opts[static_cast<std::size_t>(s)] - opts[0] == doctest::Approx(diff).epsilon(1e-9));
    }
  }
}

TEST_CASE("two separated dipoles share slot 1") {
  std::vector<NodeState> nodes(4);
  nodes[0].position = {0, 0};
  nodes[1].position = {2, 0};
  nodes[2].position = {100, 0};
  nodes[3].position = {102, 0};
  NetworkConfig cfg(nodes, {{0, 1, -1}, {2, 3, -1}});
  const auto a = schedule(cfg, channel(), weights(), {3, 6}, quick(), 1);
  CHECK(a.s_max == 1);
  CHECK(a.slots == std::vector<int>{1, 1});
}

TEST_CASE("half-duplex forces separate slots") {
  NetworkConfig cfg(line_nodes(3, 2.0), {{0, 1, -1}, {1, 2, -1}});
  const auto a = schedule(cfg, channel(), weights(), {3, 6}, quick(), 1);
  CHECK(a.s_max == 2);
  auto sorted = a.slots;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2});
}

TEST_CASE("lone dipole below threshold") {
  NetworkConfig cfg(line_nodes(2, 10.0), {{0, 1, -1}});
  CHECK_THROWS_AS(schedule(cfg, channel(), weights(), {3, 6}, quick(), 1), InfeasibleError);
}

TEST_CASE("grid schedule is valid and locally optimal") {
  auto nodes = grid_nodes(4, 4, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  REQUIRE(cfg.dipole_count() == 48);
  const auto a = schedule(cfg, channel(), weights(), {3, 6}, quick(), 3);
  check_valid(cfg, a);
  CHECK(a.s_max >= 6);

  // no dipole can move to a lower slot without breaking that slot
  const DipoleSystem sys(cfg, channel(), 6);
  const double before = slotted_energy(sys, a.slots, 100.0, PenaltyMode::hard, false);
  for (std::size_t d = 0; d < a.slots.size(); ++d) {
    for (int s = 1; s < a.slots[d]; ++s) {
      auto moved = a.slots;
      moved[d] = s;
      const bool feasible = slot_feasible(sys, moved, s);
      CHECK_FALSE(feasible);
      if (feasible)
        CHECK(slotted_energy(sys, moved, 100.0, PenaltyMode::hard, false) >= before);
    }
  }
  const auto rows = slot_table(cfg, a);
  REQUIRE(rows.size() == 48);
  CHECK(rows[0].tx == cfg.dipole(0).tx);
  CHECK(rows[0].slot == a.slots[0]);
}

TEST_CASE("deterministic per seed") {
  auto nodes = grid_nodes(3, 3, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  const auto a = schedule(cfg, channel(), weights(), {3, 6}, quick(), 11);
  const auto b = schedule(cfg, channel(), weights(), {3, 6}, quick(), 11);
  CHECK(a.slots == b.slots);
  CHECK(a.sweeps == b.sweeps);
}
