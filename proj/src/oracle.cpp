#include "selfconf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "selfconf/error.hpp"

namespace selfconf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cap(std::size_t k, std::size_t cap) {
  if (k > cap)
    throw OracleCapError("enumeration over " + std::to_string(k) +
                         " dipoles exceeds the cap of " + std::to_string(cap));
}

double range_for(const GibbsSpec& spec) {
  return spec.model == ModelKind::global ? kInf : spec.nbhd.interference_range;
}

}  // namespace

void GibbsSpec::validate() const {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
  if (model == ModelKind::local) nbhd.validate();
}

void for_each_sigma(std::size_t k, const SigmaVisitor& visit, const DipoleSystem* sys,
                    bool half_duplex, std::size_t cap) {
  check_cap(k, cap);
  if (sys != nullptr && sys->size() != k) throw ValidationError("dipole count mismatch");
  std::vector<int> sigma(k, -1);
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool ok = true;
    for (std::size_t d = 0; d < k; ++d) {
      sigma[d] = (mask >> (k - 1 - d)) & 1U ? 1 : -1;
      if (sigma[d] == 1 && sys != nullptr && !sys->usable(d)) ok = false;
    }
    if (!ok) continue;
    if (half_duplex && sys != nullptr && !half_duplex_ok(*sys, sigma)) continue;
    visit(sigma);
  }
}

std::vector<std::vector<int>> enumerate_sigma(std::size_t k, const DipoleSystem* sys,
                                              bool half_duplex, std::size_t cap) {
  std::vector<std::vector<int>> out;
  for_each_sigma(
      k, [&](std::span<const int> s) { out.emplace_back(s.begin(), s.end()); }, sys, half_duplex,
      cap);
  return out;
}

double model_energy(const DipoleSystem& sys, std::span<const int> sigma, const ModelWeights& w,
                    const GibbsSpec& spec) {
  return spec.model == ModelKind::global
             ? logical_energy_direct(sys, sigma, w.beta, spec.penalty)
             : logical_energy_local(sys, sigma, w.beta, spec.penalty);
}

std::vector<double> boltzmann_weights(std::span<const double> energies, double temperature) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
  std::vector<double> p(energies.size(), 0.0);
  if (energies.empty()) return p;
  const double lowest = *std::min_element(energies.begin(), energies.end());
  double z = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    p[i] = std::exp(-(energies[i] - lowest) / temperature);
    z += p[i];
  }
  for (auto& x : p) x /= z;
  return p;
}

std::vector<GibbsState> gibbs_distribution(const NetworkConfig& config, const ChannelParams& chan,
                                           const ModelWeights& w, const GibbsSpec& spec) {
  spec.validate();
  check_cap(config.dipole_count(), spec.cap);
  const DipoleSystem sys(config, chan, range_for(spec));
  std::vector<GibbsState> out;
  std::vector<double> energies;
  for_each_sigma(
      sys.size(),
      [&](std::span<const int> s) {
        out.push_back({{s.begin(), s.end()}, model_energy(sys, s, w, spec), 0.0});
        energies.push_back(out.back().energy);
      },
      &sys, spec.enforce_half_duplex(), spec.cap);
  const auto p = boltzmann_weights(energies, spec.temperature);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].probability = p[i];
  return out;
}

double partition_function(const NetworkConfig& config, const ChannelParams& chan,
                          const ModelWeights& w, const GibbsSpec& spec) {
  spec.validate();
  check_cap(config.dipole_count(), spec.cap);
  const DipoleSystem sys(config, chan, range_for(spec));
  std::vector<double> energies;
  for_each_sigma(
      sys.size(), [&](std::span<const int> s) { energies.push_back(model_energy(sys, s, w, spec)); },
      &sys, spec.enforce_half_duplex(), spec.cap);
  const double lowest = *std::min_element(energies.begin(), energies.end());
  double z = 0.0;
  for (double e : energies) z += std::exp(-(e - lowest) / spec.temperature);
  return z * std::exp(-lowest / spec.temperature);
}

double gibbs_prob(std::span<const int> sigma, const NetworkConfig& config,
                  const ChannelParams& chan, const ModelWeights& w, const GibbsSpec& spec) {
  if (sigma.size() != config.dipole_count()) throw ValidationError("activity count mismatch");
  for (const auto& st : gibbs_distribution(config, chan, w, spec))
    if (std::equal(st.sigma.begin(), st.sigma.end(), sigma.begin())) return st.probability;
  return 0.0;
}

MapResult map_config(const NetworkConfig& config, const ChannelParams& chan,
                     const ModelWeights& w, const GibbsSpec& spec) {
  check_cap(config.dipole_count(), spec.cap);
  if (spec.model == ModelKind::local) spec.nbhd.validate();
  const DipoleSystem sys(config, chan, range_for(spec));
  MapResult best{{}, kInf};
  for_each_sigma(
      sys.size(),
      [&](std::span<const int> s) {
        const double e = model_energy(sys, s, w, spec);
        if (best.sigma.empty() || e < best.energy) best = {{s.begin(), s.end()}, e};
      },
      &sys, spec.enforce_half_duplex(), spec.cap);
  return best;
}

double exact_error(const NetworkConfig& config, const ChannelParams& chan,
                   const ModelWeights& w, const NeighborhoodParams& nbhd, PenaltyMode penalty,
                   std::size_t cap) {
  GibbsSpec global;
  global.model = ModelKind::global;
  global.penalty = penalty;
  global.cap = cap;
  GibbsSpec local = global;
  local.model = ModelKind::local;
  local.nbhd = nbhd;
  const auto star = map_config(config, chan, w, global);
  const auto hat = map_config(config, chan, w, local);
  if (star.energy == 0.0)
    throw UndefinedMetricError("approximation error undefined: optimal energy is zero");
  const DipoleSystem sys(config, chan, kInf);
  const double h_hat = logical_energy_direct(sys, hat.sigma, w.beta, penalty);
  return std::abs(star.energy - h_hat) / std::abs(star.energy);
}

}  // namespace selfconf
