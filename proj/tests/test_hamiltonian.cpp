#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "selfconf/hamiltonian.hpp"
#include "selfconf/oracle.hpp"
#include "selfconf/topology.hpp"

using namespace selfconf;

namespace {

constexpr double kHuge = 1e9;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

NetworkConfig random_four(std::uint64_t seed) {
  Rng rng(seed);
  auto nodes = random_nodes(4, 6.0, rng);
  return NetworkConfig(nodes, dipoles_within(nodes, 100.0));
}

}  // namespace

TEST_CASE("first-order coefficient") {
  std::vector<Point> unit{{0, 0}, {1, 0}};
  ModelWeights w;
  w.beta = 0;
  CHECK(coeff_first(0, 1, unit, {4, 0.1, 1, 20}, w) == doctest::Approx(-1.0));
  w.beta = 1;
  CHECK(coeff_first(0, 1, unit, {4, 0.1, 1, 10}, w) == doctest::Approx(-1.0));
  w.beta = 2;
  std::vector<Point> two{{0, 0}, {2, 0}};
  CHECK(coeff_first(0, 1, two, {2, 0.1, 1, 20}, w) == doctest::Approx(5.875));
}

TEST_CASE("second-order coefficient") {
  ModelWeights w;
  w.beta = 0;
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {5, 5}};
  CHECK(coeff_second(0, 1, 2, 3, pts, {4, 0.1, 1, 20}, w) == doctest::Approx(1.0));
  std::vector<Point> far{{0, 0}, {1, 0}, {1e6, 0}, {1e6 + 1, 0}};
  CHECK(coeff_second(0, 1, 2, 3, far, {4, 0.1, 1, 20}, w) == doctest::Approx(0.0));
  w.beta = 1;
  std::vector<Point> line{{0, 0}, {1, 0}, {3, 0}, {4, 0}};
  CHECK(coeff_second(0, 1, 2, 3, line, {2, 0.1, 1, 20}, w) == doctest::Approx(35.75));
  CHECK_THROWS(coeff_second(0, 1, 0, 1, line, {2, 0.1, 1, 20}, w));
}

TEST_CASE("third-order coefficient") {
  ModelWeights w;
  w.beta = 0;
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {9, 9}, {1, -1}, {-9, -9}};
  CHECK(coeff_third(0, 1, 2, 3, 4, 5, pts, {4, 0.1, 1, 20}, w) == doctest::Approx(-2.0));
  std::vector<Point> far{{0, 0}, {1, 0}, {1, 1}, {9, 9}, {1e6, 0}, {1e6, 1}};
  CHECK(coeff_third(0, 1, 2, 3, 4, 5, far, {4, 0.1, 1, 20}, w) == doctest::Approx(0.0));
  w.beta = 1;
  std::vector<Point> mixed{{0, 0}, {1, 0}, {1, 1}, {9, 9}, {1, 2}, {-9, -9}};
  CHECK(coeff_third(0, 1, 2, 3, 4, 5, mixed, {4, 0.1, 1, 10}, w) == doctest::Approx(5.75));
}

TEST_CASE("coefficients are invariant under rigid motion") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  const ChannelParams chan{3, 0.1, 1, 10};
  ModelWeights w;
  for (int k = 0; k < 50; ++k) {
    std::vector<Point> p(6);
    for (auto& x : p) x = {u(rng), u(rng)};
    const double a = u(rng);
    std::vector<Point> q;
    for (auto x : p)
      q.push_back({std::cos(a) * x.x - std::sin(a) * x.y + 3, std::sin(a) * x.x + std::cos(a) * x.y - 7});
    CHECK(close_rel(coeff_second(0, 1, 2, 3, p, chan, w), coeff_second(0, 1, 2, 3, q, chan, w), 1e-9));
    CHECK(close_rel(coeff_third(0, 1, 2, 3, 4, 5, p, chan, w),
                    coeff_third(0, 1, 2, 3, 4, 5, q, chan, w), 1e-9));
  }
}

TEST_CASE("direct logical energy") {
  auto nodes = line_nodes(2, 1.0);
  NetworkConfig idle(nodes, {{0, 1, -1}, {1, 0, -1}});
  const ChannelParams chan{4, 0.1, 1, 20};
  ModelWeights w;
  CHECK(h_logical_direct(idle, chan, w) == 0.0);
  w.beta = std::numeric_limits<double>::min();
  NetworkConfig one(nodes, {{0, 1, 1}, {1, 0, -1}});
  CHECK(h_logical_direct(one, chan, w) == doctest::Approx(-1.0));
}

TEST_CASE("decomposition matches the direct energy on every assignment") {
  const ChannelParams chan{3.0, 0.1, 1.0, 10.0};
  ModelWeights w;
  w.beta = 0.7;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto cfg = random_four(seed);
    REQUIRE(cfg.dipole_count() == 12);
    const auto start = std::chrono::steady_clock::now();
    const DipoleSystem full(cfg, chan, kHuge);
    const DipoleSystem part(cfg, chan, 2.0);
    std::size_t visited = 0;
    for_each_sigma(12, [&](std::span<const int> s) {
      ++visited;
      for (auto mode : {PenaltyMode::quadratic, PenaltyMode::hard}) {
        const double direct = logical_energy_direct(full, s, w.beta, mode);
        const auto br = logical_breakdown(full, s, w.beta, mode);
        CHECK(close_rel(br.total, direct, 1e-9));
        CHECK(br.r_residual == doctest::Approx(0.0).epsilon(1e-12));
        const auto br_part = logical_breakdown(part, s, w.beta, mode);
        CHECK(close_rel(br_part.total, direct, 1e-9));
        if (mode == PenaltyMode::quadratic) {
          const double local = logical_energy_local(part, s, w.beta, mode);
          CHECK(close_rel(local, br_part.r1 + br_part.r2, 1e-9));
          CHECK(local <= direct + std::abs(br_part.r3) + std::abs(br_part.r_residual) + 1e-9);
        }
      }
    });
    CHECK(visited == 4096);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
  }
}

TEST_CASE("breakdown of small cases") {
  auto nodes = line_nodes(4, 2.0);
  NetworkConfig cfg(nodes, {{0, 1, 1}, {2, 3, 1}, {3, 2, -1}});
  const ChannelParams chan{4, 0.1, 100, 10};
  ModelWeights w;
  const auto all_off = h_logical_decomposed(cfg.with_activities(std::vector<int>{-1, -1, -1}),
                                            chan, w, {10, 10});
  CHECK(all_off.total == 0.0);
  const auto br = h_logical_decomposed(cfg, chan, w, {10, 10});
  CHECK(br.r3 == 0.0);
  CHECK(br.r_residual == 0.0);
  CHECK(br.total == doctest::Approx(h_logical_direct(cfg, chan, w)));
  CHECK(h_local(cfg, chan, w, {10, 10}) == doctest::Approx(br.r1 + br.r2));

  NetworkConfig single(nodes, {{0, 1, 1}});
  CHECK(h_local(single, chan, w, {1, 1}) ==
        doctest::Approx(coeff_first(0, 1, single.positions(), chan, w)));
  CHECK(h_local(cfg.with_activities(std::vector<int>{-1, -1, -1}), chan, w, {1, 1}) == 0.0);
}

TEST_CASE("truncated terms shrink as attenuation grows") {
  auto nodes = line_nodes(6, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  std::vector<int> sigma(cfg.dipole_count(), -1);
  sigma[*cfg.find(0, 1)] = 1;
  sigma[*cfg.find(2, 3)] = 1;
  sigma[*cfg.find(5, 4)] = 1;
  cfg = cfg.with_activities(sigma);
  ModelWeights w;
  double last_r3 = std::numeric_limits<double>::infinity();
  double last_res = std::numeric_limits<double>::infinity();
  for (double alpha = 2.0; alpha <= 6.0; alpha += 0.5) {
    const auto br = h_logical_decomposed(cfg, {alpha, 0.1, 1, 10}, w, {2, 3}, PenaltyMode::hard);
    CHECK(std::abs(br.r3) <= last_r3);
    CHECK(std::abs(br.r_residual) <= last_res);
    last_r3 = std::abs(br.r3);
    last_res = std::abs(br.r_residual);
  }
}

TEST_CASE("connectivity penalty") {
  ModelWeights w;
  CHECK(h_connectivity({0, 0}, {2, 0}, w) == 0.0);
  CHECK(h_connectivity({0, 0}, {2 * (1 + 0.005), 0}, w) == 0.0);
  CHECK(h_connectivity({0, 0}, {3, 0}, w) == doctest::Approx(1.0));
  CHECK(h_connectivity({0, 0}, {3, 0}, w, 2.5) == doctest::Approx(0.5));
}

TEST_CASE("physical energy") {
  ModelWeights w;
  NetworkConfig grid(grid_nodes(4, 4, 2.0), {});
  CHECK(h_physical(grid, w) == 0.0);

  w.epsilon0 = 0.2;
  auto nodes = line_nodes(3, 2.0);
  nodes[1].position = {2.1, 0.0};
  CHECK(h_physical(NetworkConfig(nodes, {}), w) ==
        doctest::Approx(0.01 / (2 * w.pos_variance)));

  w = ModelWeights{};
  w.zeta = 5;
  auto pair = line_nodes(2, 3.0);
  CHECK(h_physical(NetworkConfig(pair, {}), w) == doctest::Approx(10.0));

  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    auto r = random_nodes(10, 8, rng);
    for (auto& n : r) n.desired_position = {n.position.x + 0.3, n.position.y};
    CHECK(h_physical(NetworkConfig(r, {}), w) > 0.0);
  }
}

TEST_CASE("total energy and reconfiguration") {
  ModelWeights w;
  const ChannelParams chan;
  NetworkConfig grid(grid_nodes(3, 3, 2.0), yao_dipoles(NetworkConfig(grid_nodes(3, 3, 2.0), {}),
                                                        w.theta));
  CHECK(h_total(grid, chan, w, {10, 40}).total == 0.0);
  CHECK(h_total(grid, chan, w, {10, 40}, PenaltyMode::quadratic, &grid).reconfig == 0.0);
  w.xi = 2;
  auto sigma = grid.activities();
  sigma[3] = 1;
  auto flipped = grid.with_activities(sigma);
  const auto br = h_total(flipped, chan, w, {10, 40}, PenaltyMode::quadratic, &grid);
  CHECK(br.reconfig == doctest::Approx(2.0));
  CHECK(br.total == doctest::Approx(br.r1 + br.r2 + br.r3 + br.r_residual + br.physical + br.reconfig));
}

TEST_CASE("clique potentials") {
  auto nodes = line_nodes(6, 2.0);
  NetworkConfig cfg(nodes, dipoles_within(nodes, 2.0));
  const ChannelParams chan{4, 0.1, 100, 10};
  ModelWeights w;
  const auto c = clique_potential(2, 3, cfg, chan, w, {4, 4});
  std::vector<std::pair<int, int>> got;
  for (auto e : c.neighborhood) got.emplace_back(cfg.dipole(e).tx, cfg.dipole(e).rx);
  const std::vector<std::pair<int, int>> expect{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {3, 2},
                                                {3, 4}, {4, 3}, {4, 5}, {5, 4}};
  CHECK(got == expect);

  auto pair = line_nodes(2, 2.0);
  NetworkConfig lone(pair, {{0, 1, 1}});
  const auto p = clique_potential(0, 1, lone, chan, w, {4, 4});
  CHECK(p.physical == 0.0);
  CHECK(p.logical == doctest::Approx(coeff_first(0, 1, lone.positions(), chan, w)));

  Rng rng(4);
  std::vector<int> sigma(cfg.dipole_count());
  for (auto& s : sigma) s = (rng() & 1) ? 1 : -1;
  auto active = cfg.with_activities(sigma);
  double sum = 0;
  for (const auto& d : active.dipoles()) sum += clique_potential(d.tx, d.rx, active, chan, w, {4, 4}).logical;
  const auto br = h_logical_decomposed(active, chan, w, {4, 4});
  CHECK(sum == doctest::Approx(br.r1 + 2 * br.r2));
}
