// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "femtocap/rng.hpp"

namespace femtocap {

enum class PathLossKind { IndoorHotspotNLoS, UrbanMicroNLoS };

/// Log-distance path loss of the form
///   PL[dB] = slope * log10(d[m]) + intercept + freq_coef * log10(fc[GHz])
/// with log-normal shadowing of standard deviation `shadowing_db`.
///
/// The factory functions carry the IMT-Advanced NLoS coefficients; every
/// coefficient is a plain field so a config file can override it.
struct PathLossModel {
  PathLossKind kind = PathLossKind::UrbanMicroNLoS;
  double carrier_ghz = 2.5;
  double shadowing_db = 4.0;
  double slope = 36.7;
  double intercept = 22.7;
  double freq_coef = 26.0;

  static PathLossModel indoor_hotspot_nlos(double carrier_ghz = 2.5);
  static PathLossModel urban_micro_nlos(double carrier_ghz = 2.5);

  /// Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
};

/// Attenuation of one wall crossing, as a linear ratio >= 1.
class WallLoss {
 public:
  WallLoss() = default;
  explicit WallLoss(double ratio);

  static WallLoss from_db(double db);
  static WallLoss none() { return WallLoss{}; }

  double ratio() const { return ratio_; }
  bool present() const { return ratio_ > 1.0; }

 private:
  double ratio_ = 1.0;
};

/// Mean gain (path loss, shadowing, antenna gain and wall) times a unit-mean
/// per-sub-channel fading vector.
struct LinkGain {
  double mean_gain = 0.0;
  std::vector<double> fading;
  bool wall_attenuated = false;

  double at(std::size_t subchannel) const { return mean_gain * fading[subchannel]; }
};

/// Path loss in dB. Throws std::domain_error for distance < 1 m.
double path_loss_db(const PathLossModel& model, double distance_m);

/// n i.i.d. unit-mean exponential variates (Rayleigh amplitude, power domain).
std::vector<double> sample_fading(Rng& rng, std::size_t n);

/// One zero-mean normal shadowing draw in dB.
double sample_shadowing_db(Rng& rng, double stddev_db);

LinkGain compose_link_gain(double path_loss_db, double shadow_db, double antenna_gain_db,
                           WallLoss wall, std::vector<double> fading);

}  // namespace femtocap
