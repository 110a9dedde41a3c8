#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "selfconf/error.hpp"
#include "selfconf/oracle.hpp"
#include "selfconf/topology.hpp"

using namespace selfconf;

namespace {

NetworkConfig single_dipole(double l) {
  return NetworkConfig(line_nodes(2, l), {{0, 1, -1}});
}

// one dipole whose first-order coefficient is exactly `a` (beta = 0, P = 1, l = 1)
double alpha_of_single(const ChannelParams& chan, const ModelWeights& w) {
  auto cfg = single_dipole(1.0);
  return coeff_first(0, 1, cfg.positions(), chan, w);
}

}  // namespace

TEST_CASE("enumeration") {
  CHECK(enumerate_sigma(1).size() == 2);
  CHECK(enumerate_sigma(12).size() == 4096);
  CHECK_THROWS_AS(enumerate_sigma(21), OracleCapError);

  auto nodes = line_nodes(3, 1.0);
  NetworkConfig cfg(nodes, {{0, 1, -1}, {1, 2, -1}});
  const DipoleSystem sys(cfg, {}, 10);
  CHECK(enumerate_sigma(2, &sys, true).size() == 3);
  CHECK(enumerate_sigma(2, &sys, false).size() == 4);

  auto first = enumerate_sigma(3);
  CHECK(first.front() == std::vector<int>{-1, -1, -1});
  CHECK(first[1] == std::vector<int>{-1, -1, 1});
  CHECK(first.back() == std::vector<int>{1, 1, 1});
}

TEST_CASE("partition function") {
  ChannelParams chan{4, 0.1, 1, 10};
  ModelWeights w;
  w.beta = 1;
  // P l^-alpha = S * N_b and the penalty vanishes: alpha = -1
  GibbsSpec spec;
  spec.nbhd = {1, 1};
  for (double t : {0.5, 1.0, 3.0}) {
    spec.temperature = t;
    const double a = alpha_of_single(chan, w);
    CHECK(partition_function(single_dipole(1.0), chan, w, spec) ==
          doctest::Approx(1 + std::exp(-a / t)));
  }
  // alpha = 0: signal -1 offsets a penalty of +1
  chan = {4, 0.0, 1, 10};
  w.beta = 1.0;
  {
    // choose l so that -g + g^2 = 0, i.e. g = 1
    spec.temperature = 2.0;
    CHECK(alpha_of_single(chan, w) == doctest::Approx(0.0));
    CHECK(partition_function(single_dipole(1.0), chan, w, spec) == doctest::Approx(2.0));
  }
  auto nodes = line_nodes(3, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  spec.temperature = 1e9;
  spec.nbhd = {3, 3};
  CHECK(partition_function(cfg, {4, 0.1, 1, 10}, w, spec) ==
        doctest::Approx(std::pow(2.0, cfg.dipole_count())).epsilon(1e-6));
}

TEST_CASE("gibbs probabilities") {
  ChannelParams chan{4, 0.1, 1, 10};
  ModelWeights w;
  GibbsSpec spec;
  spec.nbhd = {1, 1};
  const double a = alpha_of_single(chan, w);
  CHECK(gibbs_prob(std::vector<int>{1}, single_dipole(1.0), chan, w, spec) ==
        doctest::Approx(std::exp(-a) / (1 + std::exp(-a))));

  chan = {4, 0.0, 1, 10};
  CHECK(gibbs_prob(std::vector<int>{1}, single_dipole(1.0), chan, w, spec) == doctest::Approx(0.5));

  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    auto nodes = random_nodes(4, 5, rng);
    NetworkConfig cfg(nodes, dipoles_within(nodes, 3));
    if (cfg.dipole_count() > 12) continue;
    for (auto model : {ModelKind::global, ModelKind::local}) {
      for (auto pen : {PenaltyMode::quadratic, PenaltyMode::hard}) {
        GibbsSpec s;
        s.model = model;
        s.penalty = pen;
        s.nbhd = {1.5, 2.5};
        s.temperature = 0.7;
        const auto dist = gibbs_distribution(cfg, {3, 0.05, 1, 5}, w, s);
        double total = 0;
        for (const auto& st : dist) total += st.probability;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("gibbs probabilities ignore constant energy shifts") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> e(16);
    for (auto& x : e) x = u(rng);
    auto shifted = e;
    const double c = u(rng) * 100;
    for (auto& x : shifted) x += c;
    const auto p = boltzmann_weights(e, 1.3);
    const auto q = boltzmann_weights(shifted, 1.3);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
  }
  CHECK(boltzmann_weights(std::vector<double>{2.0, 2.0}, 1.0)[0] == doctest::Approx(0.5));
}

TEST_CASE("low temperature concentrates on the minimum") {
  auto nodes = line_nodes(4, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  const ChannelParams chan{4, 0.1, 100, 20};
  ModelWeights w;
  GibbsSpec spec;
  spec.nbhd = {2, 4};
  spec.temperature = 1e-3;
  const auto best = map_config(cfg, chan, w, spec);
  CHECK(gibbs_prob(best.sigma, cfg, chan, w, spec) > 0.99);
}

TEST_CASE("map configuration") {
  ChannelParams chan{4, 0.1, 1, 10};
  ModelWeights w;
  GibbsSpec spec;
  spec.nbhd = {1, 1};
  CHECK(map_config(single_dipole(1.0), chan, w, spec).sigma == std::vector<int>{1});
  w.beta = 10;
  CHECK(map_config(single_dipole(2.0), chan, w, spec).sigma == std::vector<int>{-1});

  // four-node line regression fixture
  auto nodes = line_nodes(4, 2.0);
  NetworkConfig line(nodes, dipoles_within(nodes, 100));
  REQUIRE(line.dipole_count() == 12);
  GibbsSpec global;
  global.model = ModelKind::global;
  const ChannelParams c20{4, 0.1, 100, 20};
  w = ModelWeights{};
  const auto star = map_config(line, c20, w, global);
  const DipoleSystem sys(line, c20, 1e9);
  CHECK(star.energy == doctest::Approx(logical_energy_direct(sys, star.sigma, w.beta,
                                                             PenaltyMode::quadratic)));
  for_each_sigma(12, [&](std::span<const int> s) {
    CHECK(logical_energy_direct(sys, s, w.beta, PenaltyMode::quadratic) >= star.energy);
  });

  GibbsSpec local = global;
  local.model = ModelKind::local;
  local.nbhd = {10, 1e6};
  CHECK(map_config(line, c20, w, local).sigma == star.sigma);
}

TEST_CASE("exact approximation error") {
  const ChannelParams chan{4, 0.1, 100, 10};
  ModelWeights w;
  auto nodes = line_nodes(6, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  const auto hard = PenaltyMode::hard;
  CHECK(exact_error(cfg, chan, w, {2, 100}, hard) == doctest::Approx(0.0));
  NetworkConfig one(line_nodes(2, 2.0), {{0, 1, -1}});
  CHECK(exact_error(one, chan, w, {1, 1}, hard) == doctest::Approx(0.0));

  double last = std::numeric_limits<double>::infinity();
  for (double rf : {0.5, 2.0, 4.0, 6.0, 10.0}) {
    const double err = exact_error(cfg, chan, w, {0.5, rf}, hard);
    MESSAGE("r_f = " << rf << " error = " << err);
    CHECK(err <= last + 1e-12);
    last = err;
  }

  ModelWeights heavy;
  heavy.beta = 1e3;
  NetworkConfig far(line_nodes(2, 50.0), {{0, 1, -1}});
  CHECK_THROWS_AS(exact_error(far, chan, heavy, {1, 1}), UndefinedMetricError);
}
