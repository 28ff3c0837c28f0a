// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "femtocap/config.hpp"
#include "femtocap/scenario.hpp"

namespace femtocap {

enum class Scheme { Unconstrained, ProposedExact, ProposedApprox };
inline constexpr std::array<Scheme, 3> kAllSchemes{Scheme::Unconstrained, Scheme::ProposedExact,
                                                   Scheme::ProposedApprox};
std::string_view scheme_name(Scheme scheme);

struct MacroUserOutcome {
  std::size_t drop = 0;
  std::size_t user = 0;
  Ring ring = Ring::Outer;
  double sinr_no_femto_db = 0.0;
  double sinr_unconstrained_db = 0.0;
  double sinr_proposed_db = 0.0;  ///< primary QoS setting, configured interference mode
  double psi_proposed = 1.0;
};

/// Femto-user sum-rates for one QoS setting, on the drop's channel realization.
struct FemtoOutcome {
  double rate_unconstrained = 0.0;
  double rate_exact = 0.0;
  double rate_approx = 0.0;

  double rate(Scheme scheme) const;
  /// 1 - proposed/unconstrained; 0 when the unconstrained rate is 0.
  double degradation(Scheme scheme) const;
};

struct Tally {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// [setting][scheme][ring]
using ViolationTally = std::vector<std::array<std::array<Tally, 4>, 3>>;

struct TrialOutcome {
  std::size_t drop = 0;
  std::vector<MacroUserOutcome> macro_users;
  std::vector<FemtoOutcome> femto;  ///< one per QoS setting
  ViolationTally violations;
};

struct CcdfPoint {
  double threshold = 0.0;
  double ccdf = 0.0;  ///< fraction of samples >= threshold
};

struct ViolationRate {
  std::string setting;
  Scheme scheme = Scheme::Unconstrained;
  Ring ring = Ring::Outer;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double sigma = 0.0;  ///< binomial stddev of the rate at p = epsilon
  bool within_bound() const { return rate <= epsilon + 3.0 * sigma; }
};

struct ExperimentReport {
  Config config;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::vector<TrialOutcome> trials;
  std::vector<ViolationRate> violations;
};

/// Evaluates one drop under every QoS setting and all three schemes.
TrialOutcome evaluate_drop(const Drop& drop, const Config& config, std::uint64_t seed, std::size_t index);

/// `reps` independent drops seeded from (seed, drop index); parallel over drops.
ExperimentReport run_experiment(const Config& config, std::size_t reps, std::uint64_t seed);

std::vector<CcdfPoint> degradation_cdf(std::span<const double> degradations, std::span<const double> thresholds);

/// Pooled Prob(psi <= gamma) per setting, scheme and ring.
std::vector<ViolationRate> qos_protection_summary(std::span<const TrialOutcome> outcomes, const Config& config);

/// Femto degradation samples for one setting and scheme, in drop order.
std::vector<double> degradations(const ExperimentReport& report, std::size_t setting, Scheme scheme);

/// Thresholds 0, 0.01, ..., 1 used for fig3.csv.
std::vector<double> default_thresholds();

std::string fig2_csv(const ExperimentReport& report);
std::string fig3_csv(const ExperimentReport& report);
std::string summary_json(const ExperimentReport& report);

}  // namespace femtocap
