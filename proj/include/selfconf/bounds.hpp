#pragma once

// Closed-form upper bound on the relative energy gap between the global
// optimum and the local-model optimum, and its large-N scaling laws.

#include <string>
#include <vector>

#include "selfconf/network.hpp"

namespace selfconf {

struct BoundInputs {
  ChannelParams chan;
  NeighborhoodParams nbhd;
  double n_nodes = 1000.0;
  double l_th = 2.0;
  double epsilon0 = 0.0;  // relative band on neighbour distances

  // Throws ValidationError for alpha < 2, eps0 outside [0, 1), N < 2 or
  // l_th (1 + eps0) >= r_c.
  void validate() const;
};

struct BoundReport {
  double complexity = 0.0;
  double i3 = 0.0;      // third-order truncation bound, per active dipole
  double i_r = 0.0;     // residual interference bound, per active dipole
  double i_d = 0.0;     // energy lower bound, per active dipole
  double k_u = 0.0;     // integer-valued ring count covering every other dipole
  double k_u_bound = 0.0;
  double epsilon_delta = 0.0;
  double script_i = 0.0;  // prefactor as displayed with the theorem

  // Same bound evaluated from the theorem's displayed case formulas, and
  // |display - epsilon_delta| / epsilon_delta.
  double display_epsilon = 0.0;
  double display_discrepancy = 0.0;
  // i3 with the printed exponent C^((2-alpha)/2) instead of C^((2-alpha)/4).
  double i3_printed_exponent = 0.0;
};

// (r_f / r_c)^2.
double complexity(const NeighborhoodParams& nbhd);

double i3_bound(const BoundInputs& in);
// Smallest ring count whose rings can hold the (N - 2) other dipoles.
double ring_count(const BoundInputs& in);
double ir_bound(const BoundInputs& in);
// Throws InfeasibleError when the SINR requirement cannot be met at l_th.
double id_lower_bound(const BoundInputs& in);
BoundReport epsilon_delta(const BoundInputs& in);

struct RcOrder {
  std::string label;   // e.g. "O(N^{(4-α)/(4+α)})"
  std::string regime;  // e.g. "2 ≤ α < 4"
  double exponent = 0.0;  // predicted growth exponent in N (0 for O(1), 0 for the log case)
  double r_c = 0.0;    // smallest grid r_c with epsilon_delta <= target
  double epsilon = 0.0;
};

inline constexpr double kRcGridFactor = 1.1;
inline constexpr double kRcSearchLimit = 1e40;

// Growth-order label for r_c and a concrete r_c found on the geometric grid
// starting just above l_th (1 + eps0). The complexity of `in` is held fixed
// while r_c varies (r_f = sqrt(C) r_c). Throws InfeasibleError when no grid
// point up to kRcSearchLimit reaches the target.
RcOrder corollary1_rc_order(const BoundInputs& in, double epsilon_target);
RcOrder corollary1_rc_order(double alpha, double n_nodes, double epsilon_target);

struct Corollary2Report {
  std::string regime;
  double value = 0.0;          // simplified form with re-derived coefficients
  double printed_value = 0.0;  // simplified form with the printed coefficients
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double a1_printed = 0.0, a2_printed = 0.0, a3_printed = 0.0, a4_printed = 0.0;
};

// Large-N simplification of epsilon_delta. For alpha > 4 the leading
// N^((4-alpha)/4) term is kept explicitly.
Corollary2Report corollary2_epsilon(const BoundInputs& in);

struct BoundRow {
  double alpha = 0.0;
  double n_nodes = 0.0;
  double r_c = 0.0;
  double r_f = 0.0;
  bool feasible = false;
  BoundReport report;
};

// One row per (alpha, r_f); infeasible points are kept with feasible=false.
std::vector<BoundRow> bound_sweep(const BoundInputs& base, const std::vector<double>& alphas,
                                  const std::vector<double>& interference_ranges);

}  // namespace selfconf
