// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace femtocap {

inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

/// Per-sub-channel input to the capped water-filling problem
///
///   maximize   sum_n log2(1 + p_n / floor_n)
///   subject to 0 <= p_n <= cap_n,  sum_n p_n <= total_power.
///
/// floor_n is the interference-plus-noise power divided by the femto link gain,
/// in watts. Caps may be kNoCap.
struct ChannelState {
  std::vector<double> floors;
  std::vector<double> caps;
  double total_power = 0.0;

  std::size_t size() const { return floors.size(); }

  /// All floors positive and finite, caps >= 0, total_power >= 0, equal lengths.
  void validate() const;

  static ChannelState uncapped(std::vector<double> floors, double total_power);
};

struct KktResiduals {
  double primal = 0.0;         ///< budget and box feasibility, relative to total power
  double dual = 0.0;           ///< negative multipliers
  double complementary = 0.0;  ///< lambda*slack, mu*p, nu*(cap - p)
  double stationarity = 0.0;   ///< scaled by (p + floor)
};

/// Lagrange multipliers of the budget (lambda), the lower bounds (mu) and the
/// caps (nu), reconstructed from a candidate allocation. The natural-log form
/// of the objective is used, so lambda = 1 / water level.
struct KktCertificate {
  double lambda = 0.0;
  std::vector<double> mu;
  std::vector<double> nu;
  KktResiduals residuals;
  double max_residual = 0.0;

  bool certifies(double tol) const { return max_residual <= tol; }
};

struct AllocationResult {
  std::vector<double> powers;
  /// 1/lambda in watts; +inf when the budget is not binding (every cap is hit).
  double water_level = 0.0;
  double sum_rate = 0.0;  ///< bits/s/Hz
  KktCertificate certificate;
};

struct GridOracleResult {
  double objective = 0.0;
  /// Upper bound on how far the grid optimum can sit below the true optimum.
  double bound = 0.0;
  std::vector<double> powers;
};

inline constexpr double kKktTolerance = 1e-8;

/// Sum of log2(1 + p/floor).
double sum_rate(const ChannelState& state, std::span<const double> powers);

/// Water-fill, pin every sub-channel above its cap at the cap, take the pinned
/// power out of the budget and repeat on the rest. At most N rounds.
AllocationResult waterfill_capped_iterative(const ChannelState& state);

/// Bisection on the water level so that sum_n min(cap, max(0, w - floor))
/// meets min(total_power, sum of caps).
AllocationResult waterfill_capped_bisection(const ChannelState& state, double tol = 1e-12);

/// Rebuilds (lambda, mu, nu) from `result` and reports the worst residual over
/// the KKT system. lambda comes from result.water_level when it is positive and
/// is otherwise inferred from the powers. An allocation outside the feasible box by more than `tol`
/// gets an infinite residual.
KktCertificate check_kkt(const ChannelState& state, const AllocationResult& result,
                         double tol = kKktTolerance);

/// Exhaustive search over a grid with `resolution` steps per coordinate on the
/// first N-1 sub-channels; the last takes whatever budget remains. N <= 4.
GridOracleResult oracle_grid_search(const ChannelState& state, std::size_t resolution);

}  // namespace femtocap
