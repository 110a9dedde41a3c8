#include "selfconf/stdma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "selfconf/error.hpp"

namespace selfconf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double true_interference(const DipoleSystem& sys, std::span<const int> slots, std::size_t d,
                         int s) {
  double total = 0.0;
  for (std::size_t e = 0; e < sys.size(); ++e)
    if (e != d && slots[e] == s) total += sys.gain(e, d);
  return total;
}

// Annealing state for one slot budget. Interference caches only cover the
// interference neighborhood, matching the local model.
class SlotSampler {
 public:
  SlotSampler(const DipoleSystem& sys, double beta, int budget)
      : sys_(sys),
        beta_(beta),
        budget_(budget),
        slot_(sys.size(), 0),
        interference_(static_cast<std::size_t>(budget) + 1, std::vector<double>(sys.size(), 0.0)),
        busy_(static_cast<std::size_t>(budget) + 1, std::vector<int>(sys.node_count(), 0)) {}

  const std::vector<int>& slots() const { return slot_; }
  int slot(std::size_t d) const { return slot_[d]; }

  void place(std::size_t d, int s) {
    slot_[d] = s;
    if (s == 0) return;
    const auto si = static_cast<std::size_t>(s);
    for (std::size_t f : sys_.neighbors(d)) interference_[si][f] += sys_.gain(d, f);
    busy_[si][static_cast<std::size_t>(sys_.tx(d))]++;
    busy_[si][static_cast<std::size_t>(sys_.rx(d))]++;
  }

  void remove(std::size_t d) {
    const int s = slot_[d];
    slot_[d] = 0;
    if (s == 0) return;
    const auto si = static_cast<std::size_t>(s);
    for (std::size_t f : sys_.neighbors(d)) interference_[si][f] -= sys_.gain(d, f);
    busy_[si][static_cast<std::size_t>(sys_.tx(d))]--;
    busy_[si][static_cast<std::size_t>(sys_.rx(d))]--;
  }

  bool busy(std::size_t d, int s) const {
    const auto& b = busy_[static_cast<std::size_t>(s)];
    return b[static_cast<std::size_t>(sys_.tx(d))] > 0 || b[static_cast<std::size_t>(sys_.rx(d))] > 0;
  }

  // Energies of {off, slot 1, ..., slot budget} for d, which must be off.
  std::vector<double> option_energies(std::size_t d) const {
    const auto& chan = sys_.channel();
    const double sig = sys_.signal(d);
    std::vector<double> delta(static_cast<std::size_t>(budget_) + 1, first_order(sig, chan, 0.0));
    std::vector<double> barrier(delta.size(), 0.0);
    for (std::size_t e : sys_.neighbors(d)) {
      const int s = slot_[e];
      if (s == 0) continue;
      const auto si = static_cast<std::size_t>(s);
      const double g_in = sys_.gain(e, d);
      const double g_out = sys_.gain(d, e);
      const double around = interference_[si][e];
      delta[si] += second_order(sig, g_in, chan, 0.0) +
                   second_order(sys_.signal(e), g_out, chan, 0.0);
      barrier[si] +=
          beta_ * (static_cast<double>(sinr_violated(sys_.signal(e), around + g_out, chan)) -
                   static_cast<double>(sinr_violated(sys_.signal(e), around, chan)));
    }
    std::vector<double> energies(delta.size(), beta_);
    for (int s = 1; s <= budget_; ++s) {
      const auto si = static_cast<std::size_t>(s);
      if (busy(d, s)) {
        energies[si] = kInf;
        continue;
      }
      energies[si] = slot_weight(s) * delta[si] + barrier[si];
      if (sinr_violated(sig, interference_[si][d], chan)) energies[si] += beta_;
    }
    return energies;
  }

  bool update(std::size_t d, double temperature, Rng& rng) {
    const int before = slot_[d];
    remove(d);
    const int next = static_cast<int>(draw_boltzmann(option_energies(d), temperature, rng));
    place(d, next);
    return next != before;
  }

  // True-SINR and half-duplex check for adding d to slot s.
  bool fits(std::size_t d, int s) const {
    if (busy(d, s)) return false;
    const auto& chan = sys_.channel();
    double at_d = 0.0;
    for (std::size_t m = 0; m < sys_.size(); ++m) {
      if (m == d || slot_[m] != s) continue;
      at_d += sys_.gain(m, d);
      const double at_m = true_interference(sys_, slot_, m, s) + sys_.gain(d, m);
      if (sinr_violated(sys_.signal(m), at_m, chan)) return false;
    }
    return !sinr_violated(sys_.signal(d), at_d, chan);
  }

  // Drops the worst true-SINR violator of each slot until every slot is
  // feasible, then places dropped dipoles in the lowest slot that fits.
  bool repair() {
    const auto& chan = sys_.channel();
    for (int s = 1; s <= budget_; ++s) {
      for (;;) {
        std::size_t worst = sys_.size();
        double worst_sinr = kInf;
        for (std::size_t d = 0; d < sys_.size(); ++d) {
          if (slot_[d] != s) continue;
          const double denom = chan.noise_power + true_interference(sys_, slot_, d, s);
          const double sinr = denom == 0.0 ? kUnboundedSinr : sys_.signal(d) / denom;
          if (sinr < chan.sinr_threshold && sinr < worst_sinr) {
            worst = d;
            worst_sinr = sinr;
          }
        }
        if (worst == sys_.size()) break;
        remove(worst);
      }
    }
    bool complete = true;
    for (std::size_t d = 0; d < sys_.size(); ++d) {
      if (slot_[d] != 0) continue;
      bool placed = false;
      for (int s = 1; s <= budget_ && !placed; ++s) {
        if (fits(d, s)) {
          place(d, s);
          placed = true;
        }
      }
      complete = complete && placed;
    }
    return complete;
  }

  void descend() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t d = 0; d < sys_.size(); ++d) {
        const int current = slot_[d];
        for (int s = 1; s < current; ++s) {
          if (fits(d, s)) {
            remove(d);
            place(d, s);
            changed = true;
            break;
          }
        }
      }
    }
  }

 private:
  const DipoleSystem& sys_;
  double beta_;
  int budget_;
  std::vector<int> slot_;
  std::vector<std::vector<double>> interference_;
  std::vector<std::vector<int>> busy_;
};

// Renumbers the used slots to 1..k in order.
int close_gaps(std::vector<int>& slots) {
  std::vector<int> used;
  for (int s : slots)
    if (s > 0) used.push_back(s);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (int& s : slots)
    if (s > 0)
      s = static_cast<int>(std::lower_bound(used.begin(), used.end(), s) - used.begin()) + 1;
  return static_cast<int>(used.size());
}

}  // namespace

double slot_weight(int s) {
  if (s < 1) throw ValidationError("stdma.slot must be >= 1");
  return 1.0 / static_cast<double>(s);
}

double slotted_first(double coefficient, int slot) { return coefficient * slot_weight(slot); }

double slotted_second(double coefficient, int slot_a, int slot_b) {
  return slot_a == slot_b ? coefficient * slot_weight(slot_a) : 0.0;
}

double slotted_third(double coefficient, int slot_a, int slot_b, int slot_c) {
  return slot_a == slot_b && slot_a == slot_c ? coefficient * slot_weight(slot_a) : 0.0;
}

bool SlotAssignment::complete() const {
  return std::all_of(slots.begin(), slots.end(), [](int s) { return s > 0; });
}

std::vector<int> slot_activities(std::span<const int> slots, int s) {
  std::vector<int> sigma(slots.size(), -1);
  for (std::size_t d = 0; d < slots.size(); ++d)
    if (slots[d] == s) sigma[d] = 1;
  return sigma;
}

double slotted_energy(const DipoleSystem& sys, std::span<const int> slots, double beta,
                      PenaltyMode mode, bool local) {
  if (slots.size() != sys.size()) throw ValidationError("stdma: slot count mismatch");
  const int top = slots.empty() ? 0 : *std::max_element(slots.begin(), slots.end());
  double h = 0.0;
  for (int s = 1; s <= top; ++s) {
    const auto sigma = slot_activities(slots, s);
    double e = local ? logical_energy_local(sys, sigma, beta, mode)
                     : logical_energy_direct(sys, sigma, beta, mode);
    double barrier = 0.0;
    if (mode == PenaltyMode::hard)
      for (std::size_t d = 0; d < sys.size(); ++d)
        if (slots[d] == s && sinr_of(sys, sigma, d, local) < sys.channel().sinr_threshold)
          barrier += beta;
    h += slot_weight(s) * (e - barrier) + barrier;
  }
  for (int s : slots)
    if (s == 0) h += beta;
  return h;
}

double slotted_expansion(const DipoleSystem& sys, std::span<const int> slots) {
  if (slots.size() != sys.size()) throw ValidationError("stdma: slot count mismatch");
  const auto& chan = sys.channel();
  double h = 0.0;
  for (std::size_t d = 0; d < sys.size(); ++d) {
    if (slots[d] == 0) continue;
    const double sig = sys.signal(d);
    h += slotted_first(first_order(sig, chan, 0.0), slots[d]);
    for (std::size_t a = 0; a < sys.size(); ++a) {
      if (a == d || slots[a] == 0) continue;
      h += slotted_second(second_order(sig, sys.gain(a, d), chan, 0.0), slots[d], slots[a]);
      for (std::size_t b = a + 1; b < sys.size(); ++b) {
        if (b == d || slots[b] == 0) continue;
        h += slotted_third(third_order_pair(sys.gain(a, d), sys.gain(b, d), chan, 0.0), slots[d],
                           slots[a], slots[b]);
      }
    }
  }
  return h;
}

std::vector<double> slot_option_energies(const DipoleSystem& sys, std::span<const int> slots,
                                         std::size_t d, double beta, int budget) {
  if (slots.size() != sys.size()) throw ValidationError("stdma: slot count mismatch");
  SlotSampler sampler(sys, beta, budget);
  for (std::size_t e = 0; e < sys.size(); ++e)
    if (e != d) sampler.place(e, slots[e]);
  return sampler.option_energies(d);
}

bool slot_feasible(const DipoleSystem& sys, std::span<const int> slots, int s) {
  const auto sigma = slot_activities(slots, s);
  if (!half_duplex_ok(sys, sigma)) return false;
  for (std::size_t d = 0; d < sys.size(); ++d)
    if (slots[d] == s &&
        sinr_violated(sys.signal(d), true_interference(sys, slots, d, s), sys.channel()))
      return false;
  return true;
}

SlotAssignment schedule(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, const NeighborhoodParams& nbhd,
                        const AnnealSchedule& sched, std::uint64_t seed) {
  chan.validate();
  w.validate();
  nbhd.validate();
  sched.validate();
  const DipoleSystem sys(config, chan, nbhd.interference_range);
  SlotAssignment out;
  if (sys.size() == 0) return out;
  for (std::size_t d = 0; d < sys.size(); ++d) {
    if (!sys.usable(d)) throw ValidationError("stdma: dipole on a failed node");
    if (sinr_violated(sys.signal(d), 0.0, chan))
      throw InfeasibleError("stdma: dipole " + std::to_string(sys.tx(d)) + "->" +
                            std::to_string(sys.rx(d)) + " misses SINR_th alone");
  }
  std::size_t degree = 1;
  for (int i = 0; i < static_cast<int>(sys.node_count()); ++i)
    degree = std::max(degree, sys.incident(i).size());

  Rng rng(seed);
  std::vector<std::size_t> order(sys.size());
  std::iota(order.begin(), order.end(), 0);
  for (int budget = static_cast<int>(degree); budget <= static_cast<int>(sys.size()); ++budget) {
    SlotSampler sampler(sys, w.beta, budget);
    int quiet = 0;
    for (int t = 1; t <= sched.max_sweeps; ++t) {
      const double temp = cooling(t, sched);
      std::shuffle(order.begin(), order.end(), rng);
      int changes = 0;
      for (std::size_t d : order) changes += sampler.update(d, temp, rng) ? 1 : 0;
      ++out.sweeps;
      quiet = changes == 0 ? quiet + 1 : 0;
      const auto& sl = sampler.slots();
      if (quiet >= sched.patience && std::all_of(sl.begin(), sl.end(), [](int s) { return s > 0; }))
        break;
    }
    for (int q = 0; q < sched.quench_sweeps; ++q) {
      int changes = 0;
      for (std::size_t d = 0; d < sys.size(); ++d) changes += sampler.update(d, 0.0, rng) ? 1 : 0;
      ++out.sweeps;
      if (changes == 0) break;
    }
    if (!sampler.repair()) continue;
    sampler.descend();
    out.slots = sampler.slots();
    out.s_max = close_gaps(out.slots);
    out.budget = budget;
    return out;
  }
  throw InfeasibleError("stdma: no complete schedule found");
}

std::vector<SlotRow> slot_table(const NetworkConfig& config, const SlotAssignment& a) {
  std::vector<SlotRow> rows;
  for (std::size_t d = 0; d < config.dipole_count() && d < a.slots.size(); ++d)
    rows.push_back({config.dipole(d).tx, config.dipole(d).rx, a.slots[d]});
  return rows;
}

std::vector<SinrAuditRow> sinr_audit(const NetworkConfig& config, const ChannelParams& chan,
                                     const SlotAssignment& a) {
  const DipoleSystem sys(config, chan, kInf);
  std::vector<SinrAuditRow> rows;
  for (int s = 1; s <= a.s_max; ++s) {
    for (std::size_t d = 0; d < sys.size(); ++d) {
      if (a.slots[d] != s) continue;
      const double denom = chan.noise_power + true_interference(sys, a.slots, d, s);
      const double sinr = denom == 0.0 ? kUnboundedSinr : sys.signal(d) / denom;
      rows.push_back({s, sys.tx(d), sys.rx(d), sinr, sinr >= chan.sinr_threshold});
    }
  }
  return rows;
}

}  // namespace selfconf
