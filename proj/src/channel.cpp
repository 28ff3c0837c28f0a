// SPDX-License-Identifier: Apache-2.0
#include "femtocap/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "femtocap/units.hpp"

namespace femtocap {

PathLossModel PathLossModel::indoor_hotspot_nlos(double carrier_ghz) {
  return PathLossModel{PathLossKind::IndoorHotspotNLoS, carrier_ghz, 4.0, 43.3, 11.5, 20.0};
}

PathLossModel PathLossModel::urban_micro_nlos(double carrier_ghz) {
  return PathLossModel{PathLossKind::UrbanMicroNLoS, carrier_ghz, 4.0, 36.7, 22.7, 26.0};
}

void PathLossModel::validate() const {
  if (!(carrier_ghz > 0.0) || !std::isfinite(carrier_ghz))
    throw std::invalid_argument("carrier frequency must be positive, got " + std::to_string(carrier_ghz));
  if (!(shadowing_db >= 0.0) || !std::isfinite(shadowing_db))
    throw std::invalid_argument("shadowing stddev must be >= 0, got " + std::to_string(shadowing_db));
  // strictly increasing in distance
  if (!(slope > 0.0) || !std::isfinite(slope))
    throw std::invalid_argument("path-loss slope must be positive, got " + std::to_string(slope));
  if (!std::isfinite(intercept) || !std::isfinite(freq_coef))
    throw std::invalid_argument("path-loss coefficients must be finite");
}

WallLoss::WallLoss(double ratio) : ratio_(ratio) {
  if (!(ratio >= 1.0) || !std::isfinite(ratio))
    throw std::invalid_argument("wall loss ratio must be >= 1, got " + std::to_string(ratio));
}

WallLoss WallLoss::from_db(double db) { return WallLoss(db_to_linear(db)); }

double path_loss_db(const PathLossModel& model, double distance_m) {
  if (!(distance_m >= 1.0))
    throw std::domain_error("path loss is defined for distance >= 1 m, got " + std::to_string(distance_m));
  return model.slope * std::log10(distance_m) + model.intercept +
         model.freq_coef * std::log10(model.carrier_ghz);
}

std::vector<double> sample_fading(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("fading vector length must be >= 1");
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> out(n);
  for (auto& v : out) {
    // exponential_distribution can return exactly 0 when the engine yields 0
    do {
      v = exp1(rng);
    } while (v <= 0.0);
  }
  return out;
}

double sample_shadowing_db(Rng& rng, double stddev_db) {
  // always consume one draw so the stream layout does not depend on the stddev
  std::normal_distribution<double> normal(0.0, 1.0);
  return stddev_db * normal(rng);
}

LinkGain compose_link_gain(double path_loss_db, double shadow_db, double antenna_gain_db,
                           WallLoss wall, std::vector<double> fading) {
  LinkGain g;
  g.mean_gain = db_to_linear(antenna_gain_db - path_loss_db - shadow_db) / wall.ratio();
  g.fading = std::move(fading);
  g.wall_attenuated = wall.present();
  return g;
}

}  // namespace femtocap
