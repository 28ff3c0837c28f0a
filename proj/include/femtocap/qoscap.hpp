// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "femtocap/channel.hpp"
#include "femtocap/rng.hpp"

namespace femtocap {

/// Probabilistic QoS target of one sub-channel: the macro user's SINR may
/// drop below `gamma` times its femto-free value with probability at most
/// `epsilon`.
struct QosSpec {
  double gamma = 0.8;
  double epsilon = 0.05;

  /// Throws std::domain_error unless 0 < gamma <= 1 and 0 < epsilon < 1.
  void validate() const;
};

/// Parameters of the closed-form per-sub-channel power cap.
struct CapParams {
  double zeta = 0.0;   ///< 1/gamma - 1
  double delta = 0.0;  ///< 1/epsilon - 1
  double kappa = 0.0;  ///< W; femto power at which the violation probability is 1/2
  double cap = 0.0;    ///< W; kappa / delta

  double gamma() const { return 1.0 / (1.0 + zeta); }
};

/// What the femto base station knows about the macro user on a sub-channel.
struct MacroSideEstimate {
  double avg_interference = 0.0;  ///< W, mean interference from the other macro sites
  double avg_cross_gain = 0.0;    ///< femto -> macro user, path loss and shadowing only
  double femto_antenna_gain = 1.0;
  WallLoss wall;                  ///< none() for macro users inside the building

  void validate() const;
};

/// Terms entering the macro user's SINR with and without the femtocell.
/// Gains exclude antenna gain and wall loss; those are separate fields.
struct SinrTerms {
  double femto_power = 0.0;
  double macro_power = 0.0;
  double macro_antenna_gain = 1.0;
  double macro_gain = 0.0;  ///< serving macro -> macro user
  double femto_antenna_gain = 1.0;
  double cross_gain = 0.0;  ///< femto -> macro user
  WallLoss wall;
  double interference = 0.0;  ///< from the other macro sites, W
  double noise = 0.0;         ///< W

  double sinr_with_femto() const;
  double sinr_without_femto() const;
};

/// CDF of h/i for i.i.d. unit exponentials: x / (1 + x).
double fading_ratio_cdf(double x);

CapParams power_cap(const QosSpec& spec, const MacroSideEstimate& est);

/// SINR ratio (with femto / without femto), noise included.
double psi_exact(const SinrTerms& terms);

/// Noise-free SINR ratio (p A H / (I L) + 1)^-1.
double psi_approx(double femto_power, double femto_antenna_gain, double cross_gain,
                  double interference, WallLoss wall);

/// Monte Carlo estimate of Prob(psi <= gamma) with fresh unit-mean exponential
/// draws for the cross-gain fading h and the aggregate interference fading i.
/// Converges to 1 / (1 + kappa / p).
double empirical_violation_rate(double femto_power, const CapParams& params, std::size_t trials,
                                Rng& rng);

}  // namespace femtocap
