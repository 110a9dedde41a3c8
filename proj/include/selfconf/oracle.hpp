#pragma once

// Exhaustive enumeration over dipole activities for small instances:
// partition functions, Gibbs probabilities, MAP configurations and the exact
// global-vs-local approximation error.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "selfconf/dipole_system.hpp"
#include "selfconf/hamiltonian.hpp"
#include "selfconf/network.hpp"

namespace selfconf {

inline constexpr std::size_t kDefaultEnumerationCap = 20;

enum class ModelKind { global, local };

struct GibbsSpec {
  double temperature = 1.0;
  ModelKind model = ModelKind::local;
  NeighborhoodParams nbhd;
  PenaltyMode penalty = PenaltyMode::quadratic;
  // hard penalty mode always enforces half-duplex
  bool half_duplex = false;
  std::size_t cap = kDefaultEnumerationCap;

  void validate() const;
  bool enforce_half_duplex() const { return half_duplex || penalty == PenaltyMode::hard; }
};

using SigmaVisitor = std::function<void(std::span<const int>)>;

// Visits every assignment in lexicographic order (-1 before +1, dipole 0
// most significant). With `sys` set, dipoles on failed nodes stay at -1 and
// `half_duplex` drops assignments where a node carries two active dipoles.
void for_each_sigma(std::size_t k, const SigmaVisitor& visit, const DipoleSystem* sys = nullptr,
                    bool half_duplex = false, std::size_t cap = kDefaultEnumerationCap);
std::vector<std::vector<int>> enumerate_sigma(std::size_t k, const DipoleSystem* sys = nullptr,
                                              bool half_duplex = false,
                                              std::size_t cap = kDefaultEnumerationCap);

// Energy of sigma under the configured model (direct global or truncated local).
double model_energy(const DipoleSystem& sys, std::span<const int> sigma, const ModelWeights& w,
                    const GibbsSpec& spec);

// exp(-E/T) normalized, computed relative to the lowest energy.
std::vector<double> boltzmann_weights(std::span<const double> energies, double temperature);

struct GibbsState {
  std::vector<int> sigma;
  double energy = 0.0;
  double probability = 0.0;
};

// Full normalized distribution over the allowed assignments.
std::vector<GibbsState> gibbs_distribution(const NetworkConfig& config, const ChannelParams& chan,
                                           const ModelWeights& w, const GibbsSpec& spec);
double partition_function(const NetworkConfig& config, const ChannelParams& chan,
                          const ModelWeights& w, const GibbsSpec& spec);
double gibbs_prob(std::span<const int> sigma, const NetworkConfig& config,
                  const ChannelParams& chan, const ModelWeights& w, const GibbsSpec& spec);

struct MapResult {
  std::vector<int> sigma;
  double energy = 0.0;
};

// Lowest-energy assignment; ties go to the lexicographically smallest sigma.
MapResult map_config(const NetworkConfig& config, const ChannelParams& chan,
                     const ModelWeights& w, const GibbsSpec& spec);

// |H(s*) - H(s^)| / |H(s*)| with s* the global MAP and s^ the local MAP, both
// scored by the global Hamiltonian. Throws UndefinedMetricError when H(s*) = 0.
double exact_error(const NetworkConfig& config, const ChannelParams& chan,
                   const ModelWeights& w, const NeighborhoodParams& nbhd,
                   PenaltyMode penalty = PenaltyMode::quadratic,
                   std::size_t cap = kDefaultEnumerationCap);

}  // namespace selfconf
