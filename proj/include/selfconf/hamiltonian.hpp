#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "selfconf/dipole_system.hpp"
#include "selfconf/network.hpp"

namespace selfconf {

struct ModelWeights {
  double beta = 1.0;
  double zeta = 1.0;
  double xi = 0.0;
  double pos_variance = 0.25;  // (l_th / 4)^2 for l_th = 2
  double epsilon0 = 0.01;
  double l_th = 2.0;
  double theta = kPi / 2.0;

  void validate() const;
};

// quadratic: beta * (P_signal - SINR_th * (I + N_b))^2 per active dipole.
// hard: beta * [SINR < SINR_th] per active dipole, plus the half-duplex
// constraint (a node is endpoint of at most one active dipole).
enum class PenaltyMode { quadratic, hard };

struct EnergyBreakdown {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r_residual = 0.0;
  double penalty = 0.0;  // hard-mode SINR barrier; 0 in quadratic mode
  double physical = 0.0;
  double reconfig = 0.0;
  double total = 0.0;

  double logical() const { return r1 + r2 + r3 + r_residual + penalty; }
  void sum() { total = logical() + physical + reconfig; }
};

// Expansion coefficients in terms of received powers g = P_t * l^-alpha.
// signal: power of the dipole's own transmitter at its receiver.
// interferer(s): power of the interfering transmitter(s) at that receiver.
double first_order(double signal, const ChannelParams& chan, double beta);
double second_order(double signal, double interferer, const ChannelParams& chan, double beta);
double third_order(double interferer_a, double interferer_b, const ChannelParams& chan,
                   double beta);
// Exact coefficient of eta_a * eta_b for an unordered interferer pair in the
// expansion of the quadratic penalty: third_order + beta * S^2 * g_a * g_b.
double third_order_pair(double interferer_a, double interferer_b, const ChannelParams& chan,
                        double beta);

double coeff_first(int tx, int rx, std::span<const Point> positions, const ChannelParams& chan,
                   const ModelWeights& w);
double coeff_second(int tx, int rx, int itx, int irx, std::span<const Point> positions,
                    const ChannelParams& chan, const ModelWeights& w);
double coeff_third(int tx, int rx, int mtx, int mrx, int utx, int urx,
                   std::span<const Point> positions, const ChannelParams& chan,
                   const ModelWeights& w);

// signal / (N_b + interference) < SINR_th; false when the denominator is 0.
bool sinr_violated(double signal, double interference, const ChannelParams& chan);

// Energies on a cached DipoleSystem; sigma holds one activity (+1/-1) per
// dipole. Inactive or unusable dipoles contribute nothing.
double logical_energy_direct(const DipoleSystem& sys, std::span<const int> sigma, double beta,
                             PenaltyMode mode);
EnergyBreakdown logical_breakdown(const DipoleSystem& sys, std::span<const int> sigma,
                                  double beta, PenaltyMode mode);
double logical_energy_local(const DipoleSystem& sys, std::span<const int> sigma, double beta,
                            PenaltyMode mode);
// SINR of d against active dipoles in its neighborhood (or all, if !local).
double sinr_of(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d, bool local);
bool half_duplex_ok(const DipoleSystem& sys, std::span<const int> sigma);
// True if activating d would share a node with another active dipole.
bool half_duplex_blocked(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d);
// H_local(sigma with d active) - H_local(sigma with d inactive). In hard mode
// this includes the barrier changes of d's neighbors and is +inf when the
// half-duplex constraint blocks d.
double local_flip_delta(const DipoleSystem& sys, std::span<const int> sigma, std::size_t d,
                        double beta, PenaltyMode mode);

// Config-level wrappers.
double h_logical_direct(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, PenaltyMode mode = PenaltyMode::quadratic);
EnergyBreakdown h_logical_decomposed(const NetworkConfig& config, const ChannelParams& chan,
                                     const ModelWeights& w, const NeighborhoodParams& nbhd,
                                     PenaltyMode mode = PenaltyMode::quadratic);
double h_local(const NetworkConfig& config, const ChannelParams& chan, const ModelWeights& w,
               const NeighborhoodParams& nbhd, PenaltyMode mode = PenaltyMode::quadratic);

// 0 when |l - l_th| / l_th <= epsilon0, else |l - desired|.
double h_connectivity(Point a, Point b, const ModelWeights& w);
double h_connectivity(Point a, Point b, const ModelWeights& w, double desired);
double position_prior(Point x, Point desired, const ModelWeights& w);
// Position prior over non-failed nodes plus zeta * sum_i sum_{j in Yao(i)} h.
double h_physical(const NetworkConfig& config, const ModelWeights& w);

// sum_i |X_i - X_ref,i| + number of dipoles whose activity differs.
double reconfiguration_distance(const NetworkConfig& config, const NetworkConfig& reference);

EnergyBreakdown h_total(const NetworkConfig& config, const ChannelParams& chan,
                        const ModelWeights& w, const NeighborhoodParams& nbhd,
                        PenaltyMode mode = PenaltyMode::quadratic,
                        const NetworkConfig* reference = nullptr);

struct CliquePotential {
  double physical = 0.0;  // priors of both endpoints and their Yao penalties
  double logical = 0.0;   // eta_d * (alpha_d + sum_e (alpha_de + alpha_ed) eta_e)
  std::vector<std::size_t> neighborhood;
  double total() const { return physical + logical; }
};

// Local energy touching the dipole (i, j). Pair terms are shared between both
// dipoles, so the logical parts sum to r1 + 2 * r2 over all dipoles.
CliquePotential clique_potential(int i, int j, const NetworkConfig& config,
                                 const ChannelParams& chan, const ModelWeights& w,
                                 const NeighborhoodParams& nbhd);

}  // namespace selfconf
