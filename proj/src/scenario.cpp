// SPDX-License-Identifier: Apache-2.0
#include "femtocap/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "femtocap/units.hpp"

namespace femtocap {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

Point polar(double r, double deg) {
  const double rad = deg * std::numbers::pi / 180.0;
  return {r * std::cos(rad), r * std::sin(rad)};
}

Point uniform_in_disc(Rng& rng, Point centre, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

// Rejects points closer than 1 m to either base station (path-loss validity).
Point place(Rng& rng, Point centre, double radius, const Topology& topo) {
  for (;;) {
    const Point p = uniform_in_disc(rng, centre, radius);
    if (distance(p, topo.macro_site) >= 1.0 && distance(p, topo.femto_site) >= 1.0) return p;
  }
}

struct LinkSpec {
  Point from;
  Point to;
  const PathLossModel* model;
  double antenna_dbi;
  bool through_wall;
};

Link make_link(const LinkSpec& spec, WallLoss wall, Rng& shadow_rng, Rng& fading_rng, std::size_t n) {
  Link l;
  l.distance = distance(spec.from, spec.to);
  l.path_loss_db = path_loss_db(*spec.model, l.distance);
  l.shadow_db = sample_shadowing_db(shadow_rng, spec.model->shadowing_db);
  l.gain = compose_link_gain(l.path_loss_db, l.shadow_db, spec.antenna_dbi,
                             spec.through_wall ? wall : WallLoss::none(), sample_fading(fading_rng, n));
  return l;
}

ReceiverLinks receiver_links(const Drop& d, Point at, bool inside, Rng& shadow_rng, Rng& fading_rng) {
  const ScenarioConfig& c = d.config;
  const std::size_t n = c.subchannels;
  ReceiverLinks r;
  r.macro = make_link({d.topology.macro_site, at, &c.macro_model, c.macro_antenna_dbi, inside}, d.wall,
                      shadow_rng, fading_rng, n);
  r.femto = make_link({d.topology.femto_site, at, &c.femto_model, c.femto_antenna_dbi, !inside}, d.wall,
                      shadow_rng, fading_rng, n);
  for (std::size_t b = 0; b < kNeighborCount; ++b)
    r.neighbors[b] = make_link({d.topology.neighbors[b], at, &c.macro_model, c.macro_antenna_dbi, inside},
                               d.wall, shadow_rng, fading_rng, n);
  return r;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(macro_radius_m > 0.0 && std::isfinite(macro_radius_m), "macro_radius_m must be positive");
  require(building_radius_m > 0.0 && building_radius_m < macro_radius_m,
          "building_radius_m must lie in (0, macro_radius_m)");
  require(femto_distance_m >= 0.0 && femto_distance_m <= macro_radius_m,
          "femto_distance_m must lie in [0, macro_radius_m]");
  require(std::isfinite(femto_bearing_deg), "femto_bearing_deg must be finite");
  require(macro_users >= 1, "macro_users must be >= 1");
  require(subchannels == macro_users, "subchannels must equal macro_users (one sub-channel per macro user)");
  macro_model.validate();
  femto_model.validate();
  require(wall_loss_db >= 0.0 && std::isfinite(wall_loss_db), "wall_loss_db must be >= 0");
  for (double v : {macro_antenna_dbi, femto_antenna_dbi, macro_tx_power_dbm, femto_tx_power_dbm,
                   noise_psd_dbm_hz, noise_figure_db})
    require(std::isfinite(v), "dB-valued scenario fields must be finite");
  require(subchannel_bandwidth_hz > 0.0 && std::isfinite(subchannel_bandwidth_hz),
          "subchannel_bandwidth_hz must be positive");
}

PowerConfig PowerConfig::from(const ScenarioConfig& cfg) {
  PowerConfig p;
  p.macro_power = dbm_to_watts(cfg.macro_tx_power_dbm) / static_cast<double>(cfg.subchannels);
  p.femto_total_power = dbm_to_watts(cfg.femto_tx_power_dbm);
  p.macro_antenna_gain = db_to_linear(cfg.macro_antenna_dbi);
  p.femto_antenna_gain = db_to_linear(cfg.femto_antenna_dbi);
  p.noise = dbm_to_watts(cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.subchannel_bandwidth_hz) +
                         cfg.noise_figure_db);
  return p;
}

Topology Topology::from(const ScenarioConfig& cfg) {
  Topology t;
  t.macro_radius = cfg.macro_radius_m;
  t.building_radius = cfg.building_radius_m;
  t.femto_distance = cfg.femto_distance_m;
  t.femto_site = polar(cfg.femto_distance_m, cfg.femto_bearing_deg);
  // hexagonal sites of circumradius R: first tier at sqrt(3) R, second tier at
  // 2 sqrt(3) R (same bearings) and 3 R (bearings offset by 30 degrees)
  const double isd = std::sqrt(3.0) * cfg.macro_radius_m;
  for (std::size_t k = 0; k < 6; ++k) {
    const double bearing = 30.0 + 60.0 * static_cast<double>(k);
    t.neighbors[k] = polar(isd, bearing);
    t.neighbors[6 + k] = polar(2.0 * isd, bearing);
    t.neighbors[12 + k] = polar(3.0 * cfg.macro_radius_m, 60.0 * static_cast<double>(k));
  }
  return t;
}

std::string_view ring_name(Ring ring) {
  switch (ring) {
    case Ring::Inside: return "inside";
    case Ring::FirstRing: return "rf_2rf";
    case Ring::SecondRing: return "2rf_3rf";
    case Ring::Outer: return "outer";
  }
  return "outer";
}

Ring classify_ring(double d, double rf) {
  if (d < rf) return Ring::Inside;
  if (d < 2.0 * rf) return Ring::FirstRing;
  if (d < 3.0 * rf) return Ring::SecondRing;
  return Ring::Outer;
}

Assignment Assignment::round_robin(std::size_t users, std::size_t subchannels) {
  if (users != subchannels) throw std::invalid_argument("round-robin bijection needs users == subchannels");
  Assignment a;
  a.subchannel_of_user.resize(users);
  a.user_of_subchannel.resize(subchannels);
  for (std::size_t j = 0; j < users; ++j) {
    a.subchannel_of_user[j] = j % subchannels;
    a.user_of_subchannel[j % subchannels] = j;
  }
  return a;
}

double Link::large_scale_gain() const { return db_to_linear(-(path_loss_db + shadow_db)); }

Ring Drop::ring(std::size_t user) const {
  return classify_ring(distance(stations.macro_users[user], topology.femto_site), topology.building_radius);
}

StationSet place_stations(const Topology& topo, std::size_t macro_users, Rng& rng) {
  StationSet st;
  st.macro_users.reserve(macro_users);
  st.inside.reserve(macro_users);
  for (std::size_t j = 0; j < macro_users; ++j) {
    const Point p = place(rng, topo.macro_site, topo.macro_radius, topo);
    st.macro_users.push_back(p);
    st.inside.push_back(distance(p, topo.femto_site) < topo.building_radius);
  }
  st.femto_user = place(rng, topo.femto_site, topo.building_radius, topo);
  return st;
}

Drop build_drop(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t index) {
  config.validate();
  Drop d;
  d.config = config;
  d.power = PowerConfig::from(config);
  d.wall = WallLoss::from_db(config.wall_loss_db);
  d.topology = Topology::from(config);
  d.assignment = Assignment::round_robin(config.macro_users, config.subchannels);

  Rng pos = make_rng(seed, index, Stream::Positions);
  Rng shadow = make_rng(seed, index, Stream::Shadowing);
  Rng fading = make_rng(seed, index, Stream::Fading);

  const Topology& topo = d.topology;
  d.stations = place_stations(topo, config.macro_users, pos);

  d.macro_users.reserve(config.macro_users);
  for (std::size_t j = 0; j < config.macro_users; ++j)
    d.macro_users.push_back(receiver_links(d, d.stations.macro_users[j], d.stations.inside[j], shadow, fading));
  d.femto_user = receiver_links(d, d.stations.femto_user, true, shadow, fading);
  for (std::size_t b = 0; b < kNeighborCount; ++b)
    d.femto_site_neighbors[b] = make_link(
        {topo.neighbors[b], topo.femto_site, &config.macro_model, config.macro_antenna_dbi, true}, d.wall, shadow,
        fading, config.subchannels);
  return d;
}

InterferenceSample macro_interference(std::span<const Link, kNeighborCount> neighbors, double macro_power) {
  InterferenceSample s;
  s.per_subchannel.assign(neighbors[0].gain.fading.size(), 0.0);
  for (const Link& l : neighbors) {
    s.mean += macro_power * l.gain.mean_gain;
    for (std::size_t n = 0; n < s.per_subchannel.size(); ++n) s.per_subchannel[n] += macro_power * l.gain.at(n);
  }
  return s;
}

double mean_macro_interference_at(Point point, const Drop& drop, bool indoors) {
  double total = 0.0;
  for (const Point& site : drop.topology.neighbors) {
    const double pl = path_loss_db(drop.config.macro_model, distance(site, point));
    total += drop.power.macro_power * db_to_linear(drop.config.macro_antenna_dbi - pl);
  }
  return indoors ? total / drop.wall.ratio() : total;
}

double estimate_ibar_approx(const Drop& drop) {
  double total = 0.0;
  for (const Link& l : drop.femto_site_neighbors) total += drop.power.macro_power * l.gain.mean_gain;
  return total;
}

MacroSideEstimate macro_side_estimate(const Drop& drop, std::size_t user, IbarMode mode) {
  const ReceiverLinks& links = drop.macro_users.at(user);
  const bool inside = drop.inside(user);
  MacroSideEstimate est;
  if (mode == IbarMode::Exact) {
    for (const Link& l : links.neighbors) est.avg_interference += drop.power.macro_power * l.gain.mean_gain;
  } else {
    est.avg_interference = estimate_ibar_approx(drop) * (inside ? 1.0 : drop.wall.ratio());
  }
  est.avg_cross_gain = links.femto.large_scale_gain();
  est.femto_antenna_gain = drop.power.femto_antenna_gain;
  est.wall = inside ? WallLoss::none() : drop.wall;
  return est;
}

std::vector<double> subchannel_caps(const Drop& drop, std::span<const QosSpec> qos, IbarMode mode) {
  const std::size_t n = drop.subchannels();
  if (qos.size() != n) throw std::invalid_argument("need one QoS spec per sub-channel");
  std::vector<double> caps(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t user = drop.assignment.user_of_subchannel[s];
    caps[s] = power_cap(qos[s], macro_side_estimate(drop, user, mode)).cap;
  }
  return caps;
}

SinrTerms sinr_terms(const Drop& drop, std::size_t user, std::span<const double> femto_powers) {
  const ReceiverLinks& links = drop.macro_users.at(user);
  const std::size_t n = drop.assignment.subchannel_of_user[user];
  const bool inside = drop.inside(user);
  SinrTerms t;
  t.femto_power = femto_powers.empty() ? 0.0 : femto_powers[n];
  t.macro_power = drop.power.macro_power;
  t.macro_antenna_gain = drop.power.macro_antenna_gain;
  t.macro_gain = links.macro.gain.at(n) / drop.power.macro_antenna_gain;
  t.femto_antenna_gain = drop.power.femto_antenna_gain;
  t.cross_gain = links.femto.large_scale_gain() * links.femto.gain.fading[n];
  t.wall = inside ? WallLoss::none() : drop.wall;
  for (const Link& l : links.neighbors) t.interference += drop.power.macro_power * l.gain.at(n);
  t.noise = drop.power.noise;
  return t;
}

double sinr_mms(const Drop& drop, std::size_t user, std::span<const double> femto_powers) {
  const SinrTerms t = sinr_terms(drop, user, femto_powers);
  return femto_powers.empty() ? t.sinr_without_femto() : t.sinr_with_femto();
}

ChannelState channel_state_for_fms(const Drop& drop, std::vector<double> caps) {
  const std::size_t n = drop.subchannels();
  const ReceiverLinks& f = drop.femto_user;
  const double pm = drop.power.macro_power;
  std::vector<double> floors(n);
  for (std::size_t s = 0; s < n; ++s) {
    double impairment = pm * f.macro.gain.at(s) + drop.power.noise;
    for (const Link& l : f.neighbors) impairment += pm * l.gain.at(s);
    floors[s] = impairment / f.femto.gain.at(s);
  }
  ChannelState state;
  state.floors = std::move(floors);
  state.caps = caps.empty() ? std::vector<double>(n, kNoCap) : std::move(caps);
  state.total_power = drop.power.femto_total_power;
  return state;
}

}  // namespace femtocap
