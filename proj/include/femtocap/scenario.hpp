// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "femtocap/allocator.hpp"
#include "femtocap/channel.hpp"
#include "femtocap/qoscap.hpp"

namespace femtocap {

inline constexpr std::size_t kNeighborCount = 18;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Physical parameters of the two-tier layout, in interface units (dB, dBm, m).
struct ScenarioConfig {
  double macro_radius_m = 500.0;
  double building_radius_m = 30.0;
  double femto_distance_m = 400.0;
  double femto_bearing_deg = 0.0;
  std::size_t macro_users = 50;
  std::size_t subchannels = 50;

  PathLossModel macro_model = PathLossModel::urban_micro_nlos();
  PathLossModel femto_model = PathLossModel::indoor_hotspot_nlos();
  double wall_loss_db = 3.0;

  double macro_antenna_dbi = 15.0;
  double femto_antenna_dbi = 2.0;
  double macro_tx_power_dbm = 43.0;  ///< total over all sub-channels
  double femto_tx_power_dbm = 20.0;  ///< total budget
  double noise_psd_dbm_hz = -174.0;
  double subchannel_bandwidth_hz = 200e3;
  double noise_figure_db = 9.0;

  void validate() const;
};

/// Linear-unit power figures derived once from a ScenarioConfig.
struct PowerConfig {
  double macro_power = 0.0;  ///< W per sub-channel
  double femto_total_power = 0.0;
  double macro_antenna_gain = 1.0;
  double femto_antenna_gain = 1.0;
  double noise = 0.0;  ///< W per sub-channel

  static PowerConfig from(const ScenarioConfig& cfg);
};

struct Topology {
  double macro_radius = 0.0;
  double building_radius = 0.0;
  double femto_distance = 0.0;
  Point macro_site;
  Point femto_site;  ///< building centre, where the femto base station sits
  std::array<Point, kNeighborCount> neighbors{};

  static Topology from(const ScenarioConfig& cfg);
};

enum class Ring { Inside, FirstRing, SecondRing, Outer };

std::string_view ring_name(Ring ring);
inline constexpr std::array<Ring, 4> kAllRings{Ring::Inside, Ring::FirstRing, Ring::SecondRing, Ring::Outer};

/// inside (< R_f), [R_f, 2R_f), [2R_f, 3R_f) or beyond.
Ring classify_ring(double distance_to_femto, double building_radius);

struct StationSet {
  std::vector<Point> macro_users;
  Point femto_user;
  std::vector<bool> inside;
};

/// Round-robin bijection between macro users and sub-channels.
struct Assignment {
  std::vector<std::size_t> subchannel_of_user;
  std::vector<std::size_t> user_of_subchannel;

  static Assignment round_robin(std::size_t users, std::size_t subchannels);
};

struct Link {
  double distance = 0.0;
  double path_loss_db = 0.0;
  double shadow_db = 0.0;
  LinkGain gain;

  /// Path loss and shadowing only, without antenna gain or wall.
  double large_scale_gain() const;
};

/// Every link seen by one receiver.
struct ReceiverLinks {
  Link macro;                                  ///< serving macro site
  Link femto;                                  ///< femto base station
  std::array<Link, kNeighborCount> neighbors;  ///< the other macro sites
};

struct Drop {
  ScenarioConfig config;
  PowerConfig power;
  WallLoss wall;
  Topology topology;
  StationSet stations;
  Assignment assignment;
  std::vector<ReceiverLinks> macro_users;
  ReceiverLinks femto_user;
  /// Neighbor links into the femto base station itself (its interference measurement).
  std::array<Link, kNeighborCount> femto_site_neighbors;

  std::size_t subchannels() const { return config.subchannels; }
  bool inside(std::size_t user) const { return stations.inside[user]; }
  Ring ring(std::size_t user) const;
};

/// Mean interference and its per-sub-channel faded realization.
struct InterferenceSample {
  double mean = 0.0;
  std::vector<double> per_subchannel;
};

enum class IbarMode { Exact, Approx };

/// Macro users uniform over the macro disc, the femto user uniform inside the
/// building; points within 1 m of either base station are redrawn.
StationSet place_stations(const Topology& topology, std::size_t macro_users, Rng& rng);

/// One random drop: positions, shadowing and per-sub-channel fading on every link.
Drop build_drop(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t index = 0);

/// Sum over the neighbor sites of p_M * A_M * gain, mean and per sub-channel.
InterferenceSample macro_interference(std::span<const Link, kNeighborCount> neighbors, double macro_power);

/// Shadowing- and fading-free mean interference at an arbitrary point.
double mean_macro_interference_at(Point point, const Drop& drop, bool indoors);

/// Interference the femto base station measures from the neighbor sites.
double estimate_ibar_approx(const Drop& drop);

/// What the femto base station knows about macro user j under the given mode.
/// In approximate mode the femto-site measurement stands in for the user's
/// own mean interference; the wall the femto site sits behind is removed again
/// for users outside the building.
MacroSideEstimate macro_side_estimate(const Drop& drop, std::size_t user, IbarMode mode);

/// Per-sub-channel caps for the drop; `qos[n]` applies to sub-channel n.
std::vector<double> subchannel_caps(const Drop& drop, std::span<const QosSpec> qos, IbarMode mode);

/// SINR terms of macro user j on its own sub-channel for the drop's fading realization.
SinrTerms sinr_terms(const Drop& drop, std::size_t user, std::span<const double> femto_powers = {});

/// SINR of macro user j on its sub-channel; femto silent when `femto_powers` is empty.
double sinr_mms(const Drop& drop, std::size_t user, std::span<const double> femto_powers = {});

/// Allocator input for the femto user. Caps default to none.
ChannelState channel_state_for_fms(const Drop& drop, std::vector<double> caps = {});

}  // namespace femtocap
