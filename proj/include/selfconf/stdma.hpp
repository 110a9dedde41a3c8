#pragma once

// Spatial TDMA: every demanded dipole gets one slot of a cycle, dipoles that
// share a slot must jointly meet the SINR threshold, and early slots are
// favoured through the weight 1/s so the cycle stays short.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "selfconf/annealer.hpp"
#include "selfconf/dipole_system.hpp"
#include "selfconf/hamiltonian.hpp"
#include "selfconf/network.hpp"

namespace selfconf {

// 1 / s. Throws ValidationError for s < 1.
double slot_weight(int s);

// Slot-dependent coefficients: scaled by the weight of the first dipole's
// slot and zero unless every dipole shares that slot.
double slotted_first(double coefficient, int slot);
double slotted_second(double coefficient, int slot_a, int slot_b);
double slotted_third(double coefficient, int slot_a, int slot_b, int slot_c);

struct SlotAssignment {
  std::vector<int> slots;  // per dipole of the configuration; 0 = unscheduled
  int s_max = 0;
  int budget = 0;   // slot budget the final anneal ran with
  int sweeps = 0;   // total annealing sweeps over all budgets
  bool complete() const;
};

// Activities (+1 / -1) of the dipoles placed in slot s.
std::vector<int> slot_activities(std::span<const int> slots, int s);

// Sum over slots of 1/s times the energy of that slot's active set. The
// hard-mode SINR barrier is not scaled, and each unscheduled dipole costs
// beta.
double slotted_energy(const DipoleSystem& sys, std::span<const int> slots, double beta,
                      PenaltyMode mode, bool local = true);
// Power-only expansion with slotted coefficients over every dipole pair and
// triple, no truncation and no penalty.
double slotted_expansion(const DipoleSystem& sys, std::span<const int> slots);

// Local energies of {unscheduled, slot 1, ..., slot budget} for dipole d with
// every other dipole kept in its slot; +inf where half-duplex blocks d.
std::vector<double> slot_option_energies(const DipoleSystem& sys, std::span<const int> slots,
                                         std::size_t d, double beta, int budget);

// True SINR check of slot s with every dipole there, plus half-duplex.
bool slot_feasible(const DipoleSystem& sys, std::span<const int> slots, int s);

// Slots for every dipole of `config` with the node positions held fixed.
// The slot budget starts at the largest number of dipoles at one node and
// grows by one until the annealed assignment, after a true-SINR repair,
// schedules every dipole. Each dipole is then moved to the lowest slot that
// stays feasible and empty slots are closed. Throws InfeasibleError when a
// dipole misses the threshold even alone.
SlotAssignment schedule(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, const NeighborhoodParams& nbhd,
                        const AnnealSchedule& sched, std::uint64_t seed);

struct SlotRow {
  int tx = 0;
  int rx = 0;
  int slot = 0;
};

struct SinrAuditRow {
  int slot = 0;
  int tx = 0;
  int rx = 0;
  double sinr = 0.0;
  bool ok = false;
};

std::vector<SlotRow> slot_table(const NetworkConfig& config, const SlotAssignment& a);
// One row per scheduled dipole with its SINR against the rest of its slot.
std::vector<SinrAuditRow> sinr_audit(const NetworkConfig& config, const ChannelParams& chan,
                                     const SlotAssignment& a);

}  // namespace selfconf
