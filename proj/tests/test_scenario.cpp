// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "femtocap/scenario.hpp"

using namespace femtocap;

namespace {

double pl(double slope, double intercept, double coef, double d) {
  return slope * std::log10(d) + intercept + coef * std::log10(2.5);
}

double lin(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

TEST_CASE("hexagonal layout distances") {
  const auto t = Topology::from(ScenarioConfig{});
  const double isd = std::sqrt(3.0) * 500.0;
  std::multiset<long> radii;
  for (const Point& p : t.neighbors) radii.insert(std::lround(std::hypot(p.x, p.y)));
  CHECK(radii.count(std::lround(isd)) == 6);
  CHECK(radii.count(std::lround(2 * isd)) == 6);
  CHECK(radii.count(1500) == 6);
  CHECK(t.femto_site.x == doctest::Approx(400.0));
  CHECK(t.femto_site.y == doctest::Approx(0.0).epsilon(1e-12));
  // every second-tier site sits at least isd from every other site
  for (std::size_t a = 0; a < kNeighborCount; ++a)
    for (std::size_t b = a + 1; b < kNeighborCount; ++b) CHECK(distance(t.neighbors[a], t.neighbors[b]) >= isd - 1e-6);
}

TEST_CASE("ring classification") {
  CHECK(classify_ring(0.0, 30.0) == Ring::Inside);
  CHECK(classify_ring(29.99, 30.0) == Ring::Inside);
  CHECK(classify_ring(30.0, 30.0) == Ring::FirstRing);
  CHECK(classify_ring(60.0, 30.0) == Ring::SecondRing);
  CHECK(classify_ring(89.9, 30.0) == Ring::SecondRing);
  CHECK(classify_ring(90.0, 30.0) == Ring::Outer);
  CHECK(ring_name(Ring::Inside) == "inside");
  CHECK(ring_name(Ring::Outer) == "outer");
}

TEST_CASE("round-robin assignment is a bijection") {
  const auto a = Assignment::round_robin(50, 50);
  std::set<std::size_t> used(a.subchannel_of_user.begin(), a.subchannel_of_user.end());
  CHECK(used.size() == 50);
  for (std::size_t j = 0; j < 50; ++j) CHECK(a.user_of_subchannel[a.subchannel_of_user[j]] == j);
  CHECK_THROWS_AS(Assignment::round_robin(5, 6), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  ScenarioConfig c;
  CHECK_NOTHROW(c.validate());
  c.subchannels = 49;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.building_radius_m = 600.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.wall_loss_db = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("power configuration") {
  const auto p = PowerConfig::from(ScenarioConfig{});
  CHECK(p.macro_power == doctest::Approx(std::pow(10.0, 1.3) / 50.0));
  CHECK(p.femto_total_power == doctest::Approx(0.1));
  // -174 + 10 log10(200e3) + 9 dBm
  CHECK(p.noise == doctest::Approx(std::pow(10.0, (-174.0 + 53.0103 + 9.0 - 30.0) / 10.0)).epsilon(1e-4));
  CHECK(p.macro_antenna_gain == doctest::Approx(lin(15.0)));
}

TEST_CASE("drop structure and wall placement") {
  const ScenarioConfig cfg;
  for (std::uint64_t idx = 0; idx < 10; ++idx) {
    const Drop d = build_drop(cfg, 42, idx);
    REQUIRE(d.macro_users.size() == 50);
    CHECK(distance(d.stations.femto_user, d.topology.femto_site) < 30.0);
    for (std::size_t j = 0; j < 50; ++j) {
      const Point u = d.stations.macro_users[j];
      CHECK(std::hypot(u.x, u.y) <= 500.0);
      CHECK(distance(u, d.topology.macro_site) >= 1.0);
      CHECK(distance(u, d.topology.femto_site) >= 1.0);
      const bool inside = distance(u, d.topology.femto_site) < 30.0;
      CHECK(d.inside(j) == inside);
      CHECK((d.ring(j) == Ring::Inside) == inside);
      const ReceiverLinks& l = d.macro_users[j];
      CHECK(l.macro.gain.wall_attenuated == inside);
      CHECK(l.femto.gain.wall_attenuated == !inside);
      for (const Link& nb : l.neighbors) CHECK(nb.gain.wall_attenuated == inside);
      CHECK(l.macro.gain.fading.size() == 50);
    }
    CHECK(d.femto_user.macro.gain.wall_attenuated);
    CHECK_FALSE(d.femto_user.femto.gain.wall_attenuated);
    for (const Link& nb : d.femto_site_neighbors) CHECK(nb.gain.wall_attenuated);
  }
}

TEST_CASE("drops are reproducible and independent across indices") {
  const ScenarioConfig cfg;
  const Drop a = build_drop(cfg, 7, 3), b = build_drop(cfg, 7, 3), c = build_drop(cfg, 7, 4);
  CHECK(a.stations.macro_users[0].x == b.stations.macro_users[0].x);
  CHECK(a.macro_users[5].neighbors[3].gain.fading == b.macro_users[5].neighbors[3].gain.fading);
  CHECK(a.stations.macro_users[0].x != c.stations.macro_users[0].x);
}

TEST_CASE("femto-user floor recomputed by hand") {
  const ScenarioConfig cfg;
  const Drop d = build_drop(cfg, 42, 0);
  const auto state = channel_state_for_fms(d);
  const double pm = std::pow(10.0, 1.3) / 50.0;
  const double noise = std::pow(10.0, (-174.0 + 10.0 * std::log10(200e3) + 9.0 - 30.0) / 10.0);
  const double wall = lin(3.0);
  const Point u = d.stations.femto_user;
  for (std::size_t n : {0u, 17u, 49u}) {
    const auto& f = d.femto_user;
    double imp = noise;
    const double dm = std::hypot(u.x, u.y);
    imp += pm * lin(15.0 - pl(36.7, 22.7, 26.0, dm) - f.macro.shadow_db) / wall * f.macro.gain.fading[n];
    for (std::size_t b = 0; b < kNeighborCount; ++b) {
      const double db = distance(d.topology.neighbors[b], u);
      imp += pm * lin(15.0 - pl(36.7, 22.7, 26.0, db) - f.neighbors[b].shadow_db) / wall * f.neighbors[b].gain.fading[n];
    }
    const double df = distance(d.topology.femto_site, u);
    const double sig = lin(2.0 - pl(43.3, 11.5, 20.0, df) - f.femto.shadow_db) * f.femto.gain.fading[n];
    CHECK(state.floors[n] == doctest::Approx(imp / sig).epsilon(1e-10));
  }
  CHECK(state.total_power == doctest::Approx(0.1));
  for (double k : state.caps) CHECK(std::isinf(k));
}

TEST_CASE("SINR terms and the femto-free SINR") {
  const Drop d = build_drop(ScenarioConfig{}, 11, 0);
  const std::vector<double> zero(50, 0.0), some(50, 0.01);
  for (std::size_t j = 0; j < 50; ++j) {
    const double base = sinr_mms(d, j);
    CHECK(base > 0.0);
    CHECK(sinr_mms(d, j, zero) == doctest::Approx(base).epsilon(1e-14));
    CHECK(sinr_mms(d, j, some) < base);
    const SinrTerms t = sinr_terms(d, j, some);
    CHECK(psi_exact(t) == doctest::Approx(sinr_mms(d, j, some) / base).epsilon(1e-12));
  }
}

TEST_CASE("interference estimates") {
  const Drop d = build_drop(ScenarioConfig{}, 3, 0);
  const auto s = macro_interference(d.femto_site_neighbors, d.power.macro_power);
  CHECK(s.mean == doctest::Approx(estimate_ibar_approx(d)));
  CHECK(s.per_subchannel.size() == 50);
  const double quiet = mean_macro_interference_at(d.topology.femto_site, d, true);
  CHECK(mean_macro_interference_at(d.topology.femto_site, d, false) == doctest::Approx(quiet * lin(3.0)));

  for (std::size_t j = 0; j < 50; ++j) {
    const auto ex = macro_side_estimate(d, j, IbarMode::Exact);
    const auto ap = macro_side_estimate(d, j, IbarMode::Approx);
    CHECK(ex.avg_cross_gain == ap.avg_cross_gain);
    CHECK(ex.wall.present() == !d.inside(j));
    const double expect = estimate_ibar_approx(d) * (d.inside(j) ? 1.0 : lin(3.0));
    CHECK(ap.avg_interference == doctest::Approx(expect));
  }
}

TEST_CASE("caps follow the per-sub-channel QoS targets") {
  const Drop d = build_drop(ScenarioConfig{}, 5, 0);
  std::vector<QosSpec> tight(50, QosSpec{0.9, 0.01}), loose(50, QosSpec{0.5, 0.2});
  const auto kt = subchannel_caps(d, tight, IbarMode::Exact);
  const auto kl = subchannel_caps(d, loose, IbarMode::Exact);
  for (std::size_t n = 0; n < 50; ++n) {
    CHECK(kt[n] > 0.0);
    CHECK(kt[n] < kl[n]);
  }
  CHECK_THROWS_AS(subchannel_caps(d, std::span<const QosSpec>(tight).first(3), IbarMode::Exact), std::invalid_argument);
}

TEST_CASE("inside fraction over many placements") {
  const auto topo = Topology::from(ScenarioConfig{});
  Rng rng = make_rng(2024, 0, Stream::Positions);
  std::size_t inside = 0;
  const std::size_t drops = 100'000;
  for (std::size_t k = 0; k < drops; ++k) {
    const auto st = place_stations(topo, 50, rng);
    for (bool b : st.inside) inside += b;
  }
  // area ratio with the 1 m exclusion discs removed
  const double expect = 50.0 * (30.0 * 30.0 - 1.0) / (500.0 * 500.0 - 2.0);
  CHECK(std::abs(double(inside) / drops - expect) <= 0.005);
}
