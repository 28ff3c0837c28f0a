// SPDX-License-Identifier: Apache-2.0
#include "femtocap/qoscap.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace femtocap {

void QosSpec::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::domain_error("gamma must lie in (0, 1], got " + std::to_string(gamma));
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
}

void MacroSideEstimate::validate() const {
  if (!(avg_interference > 0.0) || !std::isfinite(avg_interference))
    throw std::domain_error("average interference must be positive and finite");
  if (!(avg_cross_gain > 0.0) || !std::isfinite(avg_cross_gain))
    throw std::domain_error("average cross gain must be positive and finite");
  if (!(femto_antenna_gain > 0.0) || !std::isfinite(femto_antenna_gain))
    throw std::domain_error("femto antenna gain must be positive and finite");
}

double SinrTerms::sinr_with_femto() const {
  const double femto = femto_power * femto_antenna_gain * cross_gain / wall.ratio();
  return macro_power * macro_antenna_gain * macro_gain / (femto + interference + noise);
}

double SinrTerms::sinr_without_femto() const {
  return macro_power * macro_antenna_gain * macro_gain / (interference + noise);
}

double fading_ratio_cdf(double x) {
  if (!(x >= 0.0)) throw std::domain_error("fading ratio CDF needs x >= 0");
  if (std::isinf(x)) return 1.0;
  return x / (1.0 + x);
}

CapParams power_cap(const QosSpec& spec, const MacroSideEstimate& est) {
  spec.validate();
  est.validate();
  CapParams p;
  p.zeta = 1.0 / spec.gamma - 1.0;
  p.delta = 1.0 / spec.epsilon - 1.0;
  p.kappa = est.wall.ratio() / est.femto_antenna_gain * (est.avg_interference / est.avg_cross_gain) * p.zeta;
  p.cap = p.kappa / p.delta;
  return p;
}

double psi_exact(const SinrTerms& t) {
  if (t.femto_power == 0.0) return 1.0;
  // the macro signal power cancels; this form stays defined when it is zero
  const double base = t.interference + t.noise;
  const double femto = t.femto_power * t.femto_antenna_gain * t.cross_gain / t.wall.ratio();
  return base / (femto + base);
}

double psi_approx(double femto_power, double femto_antenna_gain, double cross_gain,
                  double interference, WallLoss wall) {
  return 1.0 / (femto_power * femto_antenna_gain * cross_gain / (interference * wall.ratio()) + 1.0);
}

double empirical_violation_rate(double femto_power, const CapParams& params, std::size_t trials,
                                Rng& rng) {
  if (trials == 0) throw std::invalid_argument("empirical_violation_rate needs trials >= 1");
  std::exponential_distribution<double> exp1(1.0);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double h = exp1(rng);
    const double i = exp1(rng);
    // psi <= gamma  <=>  p h / i >= kappa
    if (femto_power * h >= params.kappa * i) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace femtocap
